"""Finite posets, their downsets, width and two-chain covers.

Elements are addressed by their index in the input order; every set of
elements (downsets in particular) is an ``int`` bitmask in which bit ``i``
stands for element ``i``.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import CycleDetected, InternalDisagreement, SizeExceeded, UnknownLabel

DEFAULT_MAX_POSET_SIZE = 20
DEFAULT_DOWNSET_CAP = 1 << 20


def bits_of(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Poset:
    """An immutable finite poset.

    ``below[i]`` is the mask of all ``j <= i`` (reflexive), ``above[i]`` the
    mask of all ``j >= i``. ``covers`` holds index pairs ``(lower, upper)``.
    """

    elements: tuple[str, ...]
    covers: frozenset[tuple[int, int]]
    below: tuple[int, ...]
    above: tuple[int, ...]
    dropped_covers: tuple[tuple[str, str], ...] = ()
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.elements)})

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(f"unknown element {label!r}") from None

    def mask(self, labels: Iterable[str]) -> int:
        m = 0
        for lab in labels:
            m |= 1 << self.index(lab)
        return m

    def labels(self, mask: int) -> list[str]:
        return [self.elements[i] for i in bits_of(mask)]

    def leq(self, i: int, j: int) -> bool:
        return bool(self.below[j] >> i & 1)

    def lt(self, i: int, j: int) -> bool:
        return i != j and self.leq(i, j)

    def comparable(self, i: int, j: int) -> bool:
        return self.leq(i, j) or self.leq(j, i)

    def strictly_below(self, i: int) -> int:
        return self.below[i] & ~(1 << i)

    def strictly_above(self, i: int) -> int:
        return self.above[i] & ~(1 << i)

    def lower_covers(self, i: int) -> list[int]:
        return sorted(lo for lo, hi in self.covers if hi == i)

    def is_chain(self, mask: int) -> bool:
        idx = list(bits_of(mask))
        return all(self.comparable(a, b) for a, b in combinations(idx, 2))

    def linear_extension(self) -> list[int]:
        """Topological order, ties broken by input index."""
        indeg = [popcount(self.strictly_below(i) & self._lower_cover_mask(i)) for i in range(self.n)]
        heap = [i for i in range(self.n) if indeg[i] == 0]
        heapq.heapify(heap)
        out = []
        while heap:
            i = heapq.heappop(heap)
            out.append(i)
            for lo, hi in self.covers:
                if lo == i:
                    indeg[hi] -= 1
                    if indeg[hi] == 0:
                        heapq.heappush(heap, hi)
        return out

    def _lower_cover_mask(self, i: int) -> int:
        m = 0
        for lo, hi in self.covers:
            if hi == i:
                m |= 1 << lo
        return m

    def to_json(self) -> dict:
        return {
            "elements": list(self.elements),
            "covers": [[self.elements[lo], self.elements[hi]] for lo, hi in sorted(self.covers)],
        }

    def relabel(self, labels: Sequence[str]) -> "Poset":
        return Poset(tuple(labels), self.covers, self.below, self.above)

    def induced(self, mask: int) -> "Poset":
        """Subposet on the elements of ``mask`` (input order kept)."""
        idx = list(bits_of(mask))
        pos = {old: new for new, old in enumerate(idx)}
        below = []
        for old in idx:
            m = 0
            for j in bits_of(self.below[old] & mask):
                m |= 1 << pos[j]
            below.append(m)
        return poset_from_below([self.elements[i] for i in idx], below)

    def __repr__(self):
        cov = ", ".join(f"{self.elements[a]}<{self.elements[b]}" for a, b in sorted(self.covers))
        return f"Poset([{', '.join(self.elements)}]; {cov})"


def _closure(n: int, succ: list[list[int]]) -> tuple[list[int], list[int]]:
    """Reflexive-transitive closure of a DAG given by successor lists."""
    state = [0] * n
    above = [0] * n

    def visit(i: int):
        stack = [(i, iter(succ[i]))]
        state[i] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                m = 1 << node
                for s in succ[node]:
                    m |= above[s]
                above[node] = m
                state[node] = 2
                stack.pop()
            elif state[nxt] == 1:
                raise CycleDetected(f"cycle through element index {nxt}")
            elif state[nxt] == 0:
                state[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))

    for i in range(n):
        if state[i] == 0:
            visit(i)
    below = [0] * n
    for i in range(n):
        for j in bits_of(above[i]):
            below[j] |= 1 << i
    return below, above


def build_poset(elements: Sequence[str], covers: Iterable[Sequence[str]]) -> Poset:
    """Validate a cover description and return the poset it generates.

    Covers implied by a longer path are dropped and listed in
    ``Poset.dropped_covers`` rather than rejected.
    """
    elements = tuple(str(e) for e in elements)
    if len(set(elements)) != len(elements):
        raise UnknownLabel("element labels must be distinct")
    index = {e: i for i, e in enumerate(elements)}
    pairs = []
    for pair in covers:
        lo, hi = pair
        if lo not in index or hi not in index:
            missing = lo if lo not in index else hi
            raise UnknownLabel(f"cover references unknown element {missing!r}")
        if lo == hi:
            raise CycleDetected(f"self-cover on {lo!r}")
        pairs.append((index[lo], index[hi]))
    n = len(elements)
    succ = [[] for _ in range(n)]
    for lo, hi in dict.fromkeys(pairs):
        succ[lo].append(hi)
    below, above = _closure(n, succ)
    kept, dropped = set(), []
    for lo, hi in dict.fromkeys(pairs):
        # redundant iff hi is reachable from some other successor of lo
        if any(s != hi and above[s] >> hi & 1 for s in succ[lo]):
            dropped.append((elements[lo], elements[hi]))
        else:
            kept.add((lo, hi))
    return Poset(elements, frozenset(kept), tuple(below), tuple(above), tuple(dropped))


def poset_from_below(elements: Sequence[str], below: Sequence[int]) -> Poset:
    """Build a poset from reflexive down-closure masks (assumed transitive)."""
    n = len(below)
    above = [0] * n
    for i in range(n):
        for j in bits_of(below[i]):
            above[j] |= 1 << i
    covers = set()
    for i in range(n):
        strict = below[i] & ~(1 << i)
        for j in bits_of(strict):
            # j is covered by i iff nothing strictly between
            if not (strict & above[j] & ~(1 << j)):
                covers.add((j, i))
    return Poset(tuple(elements), frozenset(covers), tuple(below), tuple(above))


def poset_from_json(data: dict) -> Poset:
    return build_poset(data["elements"], data.get("covers", []))


def load_poset(path) -> Poset:
    with open(path) as fh:
        return poset_from_json(json.load(fh))


def antichain(n: int, prefix: str = "p") -> Poset:
    return build_poset([f"{prefix}{i + 1}" for i in range(n)], [])


def chain(n: int, prefix: str = "p") -> Poset:
    labels = [f"{prefix}{i + 1}" for i in range(n)]
    return build_poset(labels, list(zip(labels, labels[1:])))


def disjoint_chains(m: int, n: int) -> Poset:
    """Two mutually incomparable chains c1<...<cm and d1<...<dn."""
    c = [f"c{i + 1}" for i in range(m)]
    d = [f"d{i + 1}" for i in range(n)]
    return build_poset(c + d, list(zip(c, c[1:])) + list(zip(d, d[1:])))


# -- downsets -----------------------------------------------------------------


@dataclass(frozen=True, order=True)
class DownSet:
    """A poset ideal as a characteristic bitmask; compares by bits."""

    bits: int

    def __contains__(self, i: int) -> bool:
        return bool(self.bits >> i & 1)

    def __len__(self) -> int:
        return popcount(self.bits)

    def __or__(self, other: "DownSet") -> "DownSet":
        return DownSet(self.bits | other.bits)

    def __and__(self, other: "DownSet") -> "DownSet":
        return DownSet(self.bits & other.bits)

    def bitstring(self, n: int) -> str:
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(n))


def is_down_set(P: Poset, mask: int) -> bool:
    return all(P.below[i] & ~mask == 0 for i in bits_of(mask))


def down_closure(P: Poset, mask: int) -> int:
    out = 0
    for i in bits_of(mask):
        out |= P.below[i]
    return out


def enumerate_down_sets(
    P: Poset,
    max_size: int = DEFAULT_MAX_POSET_SIZE,
    cap: int = DEFAULT_DOWNSET_CAP,
) -> list[DownSet]:
    """All downsets of ``P`` sorted by (cardinality, bit value)."""
    return [DownSet(m) for m in down_set_masks(P, max_size, cap)]


def down_set_masks(P: Poset, max_size: int = DEFAULT_MAX_POSET_SIZE, cap: int = DEFAULT_DOWNSET_CAP) -> list[int]:
    if P.n > max_size:
        raise SizeExceeded(f"poset has {P.n} elements, bound is {max_size}")
    masks = [0]
    for e in P.linear_extension():
        need = P.strictly_below(e)
        bit = 1 << e
        masks.extend([m | bit for m in masks if need & ~m == 0])
        if len(masks) > cap:
            raise SizeExceeded(f"more than {cap} downsets")
    masks.sort(key=lambda m: (popcount(m), m))
    return masks


def minimal_generators(P: Poset, a: DownSet | int) -> list[int]:
    """Maximal elements of the downset ``a``; they generate it."""
    mask = a.bits if isinstance(a, DownSet) else a
    return [i for i in bits_of(mask) if P.strictly_above(i) & mask == 0]


def width_le_two(P: Poset) -> tuple[bool, tuple[int, int, int] | None]:
    """``(True, None)`` if no three elements are pairwise incomparable."""
    for i, j, k in combinations(range(P.n), 3):
        if not (P.comparable(i, j) or P.comparable(i, k) or P.comparable(j, k)):
            return False, (i, j, k)
    return True, None


# -- chain covers ---------------------------------------------------------------


@dataclass(frozen=True)
class ChainCover:
    """Two disjoint chains, each listed bottom-up; ``chain_d`` may be empty."""

    chain_c: tuple[int, ...]
    chain_d: tuple[int, ...]

    @property
    def mask_c(self) -> int:
        return sum(1 << i for i in self.chain_c)

    @property
    def mask_d(self) -> int:
        return sum(1 << i for i in self.chain_d)

    def swapped(self) -> "ChainCover":
        return ChainCover(self.chain_d, self.chain_c)

    def labels(self, P: Poset) -> tuple[list[str], list[str]]:
        return [P.elements[i] for i in self.chain_c], [P.elements[i] for i in self.chain_d]


def _sorted_chain(P: Poset, idx: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(idx, key=lambda i: popcount(P.below[i])))


def is_chain_cover(P: Poset, cover: ChainCover) -> bool:
    c, d = cover.mask_c, cover.mask_d
    if len(set(cover.chain_c)) != len(cover.chain_c) or len(set(cover.chain_d)) != len(cover.chain_d):
        return False
    if c & d or (c | d) != P.full_mask:
        return False
    for chain_ in (cover.chain_c, cover.chain_d):
        if any(not P.lt(a, b) for a, b in zip(chain_, chain_[1:])):
            return False
    return True


def _tail_swap(P: Poset, keep: list[int], split: list[int], p: int):
    """Case of the inductive step where ``p`` is above neither chain top.

    ``split = d_1 < ... < d_k``; with ``d_i`` the largest element of ``split``
    below ``p``, return ``(keep + d_{i+1..k}, d_1..d_i + p)`` if both are
    chains, else ``None``.
    """
    i = 0
    while i < len(split) and P.lt(split[i], p):
        i += 1
    new_keep = keep + split[i:]
    if not P.is_chain(sum(1 << e for e in new_keep)):
        return None
    return list(_sorted_chain(P, new_keep)), split[:i] + [p]


def two_chain_cover_inductive(P: Poset) -> ChainCover | None:
    """Grow a cover along a maximal chain of downsets, one element at a time.

    Each new element ``p`` is maximal in the current downset. It extends a
    chain whose top lies below it; otherwise the tail of one chain above the
    part below ``p`` is moved onto the other chain and ``p`` takes its place.
    Returns ``None`` when no step applies, which happens when the width
    exceeds two.
    """
    C: list[int] = []
    D: list[int] = []
    for p in P.linear_extension():
        if not C:
            C = [p]
        elif P.lt(C[-1], p):
            C.append(p)
        elif D and P.lt(D[-1], p):
            D.append(p)
        else:
            step = _tail_swap(P, C, D, p)
            if step is not None:
                C, D = step
            else:
                step = _tail_swap(P, D, C, p)
                if step is None:
                    return None
                D, C = step
    return ChainCover(tuple(C), tuple(D))


def _max_matching(n: int, adj: list[list[int]]) -> list[int]:
    """Kuhn's augmenting paths; returns ``match_right[j] = i`` or -1."""
    match_r = [-1] * n

    def augment(i: int, seen: list[bool]) -> bool:
        for j in adj[i]:
            if not seen[j]:
                seen[j] = True
                if match_r[j] < 0 or augment(match_r[j], seen):
                    match_r[j] = i
                    return True
        return False

    for i in range(n):
        augment(i, [False] * n)
    return match_r


def minimum_chain_partition(P: Poset) -> list[tuple[int, ...]]:
    """Fulkerson's reduction of Dilworth to bipartite matching."""
    adj = [[j for j in bits_of(P.strictly_above(i))] for i in range(P.n)]
    match_r = _max_matching(P.n, adj)
    nxt = [-1] * P.n
    for j, i in enumerate(match_r):
        if i >= 0:
            nxt[i] = j
    starts = [j for j in range(P.n) if match_r[j] < 0]
    chains = []
    for s in starts:
        ch = [s]
        while nxt[ch[-1]] >= 0:
            ch.append(nxt[ch[-1]])
        chains.append(tuple(ch))
    return chains


def two_chain_cover_matching(P: Poset) -> ChainCover | None:
    chains = minimum_chain_partition(P)
    if len(chains) > 2:
        return None
    chains += [()] * (2 - len(chains))
    return ChainCover(chains[0], chains[1])


def two_chain_cover(P: Poset) -> ChainCover | None:
    """Inductive cover, checked for existence against the matching route."""
    inductive = two_chain_cover_inductive(P)
    matching = two_chain_cover_matching(P)
    if (inductive is None) != (matching is None):
        raise InternalDisagreement(
            f"inductive cover {'absent' if inductive is None else 'found'} but matching "
            f"{'absent' if matching is None else 'found'} for {P!r}"
        )
    if inductive is not None and not is_chain_cover(P, inductive):
        raise InternalDisagreement(f"inductive construction produced an invalid cover for {P!r}")
    return inductive


def _incomparability_colorings(P: Poset) -> list[list[int]] | None:
    """Connected components of the incomparability graph, each 2-coloured.

    Returns one list per component of ``(element, colour)`` with the
    smallest-index element coloured 0, or ``None`` when some component is not
    bipartite.
    """
    colour = [-1] * P.n
    comps = []
    for s in range(P.n):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        comp, queue = [s], [s]
        while queue:
            u = queue.pop()
            for v in range(P.n):
                if v != u and not P.comparable(u, v):
                    if colour[v] < 0:
                        colour[v] = 1 - colour[u]
                        comp.append(v)
                        queue.append(v)
                    elif colour[v] == colour[u]:
                        return None
        comps.append([(v, colour[v]) for v in comp])
    return comps


def canonical_two_chain_cover(P: Poset) -> ChainCover | None:
    """The lexicographically least cover under the input order.

    Two chains partitioning ``P`` are exactly a proper 2-colouring of the
    incomparability graph; colouring the first element of every component
    into ``C`` gives the least assignment vector.
    """
    comps = _incomparability_colorings(P)
    if comps is None:
        return None
    c = [v for comp in comps for v, col in comp if col == 0]
    d = [v for comp in comps for v, col in comp if col == 1]
    return ChainCover(_sorted_chain(P, c), _sorted_chain(P, d))


def all_two_chain_covers(P: Poset) -> list[ChainCover]:
    """Every ordered pair (C, D) of disjoint chains covering ``P``."""
    comps = _incomparability_colorings(P)
    if comps is None:
        return []
    out = []
    for flips in range(1 << len(comps)):
        c, d = [], []
        for k, comp in enumerate(comps):
            flip = flips >> k & 1
            for v, col in comp:
                (c if col ^ flip == 0 else d).append(v)
        out.append(ChainCover(_sorted_chain(P, c), _sorted_chain(P, d)))
    return out


def is_chain_or_two_incomparable_chains(P: Poset) -> bool:
    """True if ``P`` is a chain or a disjoint union of two chains with no
    comparabilities between them."""
    if P.is_chain(P.full_mask):
        return True
    # components of the comparability graph
    seen, comps = 0, []
    for s in range(P.n):
        if seen >> s & 1:
            continue
        comp, frontier = 0, 1 << s
        while frontier:
            comp |= frontier
            nxt = 0
            for v in bits_of(frontier):
                nxt |= P.below[v] | P.above[v]
            frontier = nxt & ~comp
        seen |= comp
        comps.append(comp)
    return len(comps) == 2 and all(P.is_chain(c) for c in comps)

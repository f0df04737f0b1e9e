"""Finite lattices and meet-semilattices.

Elements are ids ``0..n-1``. Order is stored as reflexive down-closure
bitmasks (``below[i]`` has bit ``j`` iff ``j <= i``), and meet/join as full
tables. Lattices built from a poset remember the downset each id stands for.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .errors import (
    ConditionsDisagree,
    InternalDisagreement,
    MultipleComplements,
    NotALattice,
    NotAPartialOrder,
    NotMeetDistributive,
)
from .poset import Poset, bits_of, down_set_masks, poset_from_below, popcount


def _above_from_below(below: Sequence[int]) -> list[int]:
    above = [0] * len(below)
    for i, m in enumerate(below):
        for j in bits_of(m):
            above[j] |= 1 << i
    return above


def _ranks(below: Sequence[int]) -> list[int]:
    """Length of the longest chain descending from each element."""
    order = sorted(range(len(below)), key=lambda i: popcount(below[i]))
    rank = [0] * len(below)
    for i in order:
        strict = below[i] & ~(1 << i)
        rank[i] = max((rank[j] + 1 for j in bits_of(strict)), default=0)
    return rank


def _covers_from_below(below: Sequence[int]) -> tuple[list[list[int]], list[list[int]]]:
    above = _above_from_below(below)
    lower = [[] for _ in below]
    upper = [[] for _ in below]
    for i, m in enumerate(below):
        strict = m & ~(1 << i)
        for j in bits_of(strict):
            if not (strict & above[j] & ~(1 << j)):
                lower[i].append(j)
                upper[j].append(i)
    return lower, upper


def _check_partial_order(below: Sequence[int]) -> None:
    n = len(below)
    for i in range(n):
        if not below[i] >> i & 1:
            raise NotAPartialOrder(f"not reflexive at {i}")
        for j in bits_of(below[i]):
            if j != i and below[j] >> i & 1:
                raise NotAPartialOrder(f"not antisymmetric: {i}, {j}")
            if below[j] & ~below[i]:
                raise NotAPartialOrder(f"not transitive at {j} <= {i}")


def _glb(below: Sequence[int], common: int) -> int | None:
    for m in bits_of(common):
        if below[m] == common:
            return m
    return None


@dataclass(frozen=True)
class Lattice:
    """A finite lattice with precomputed order, meet and join tables."""

    below: tuple[int, ...]
    above: tuple[int, ...]
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    rank: tuple[int, ...]
    bottom: int
    top: int
    labels: tuple[str, ...]
    downsets: tuple[int, ...] | None = None
    poset: Poset | None = None
    lower: tuple[tuple[int, ...], ...] = field(default=(), repr=False)
    upper: tuple[tuple[int, ...], ...] = field(default=(), repr=False)

    @property
    def size(self) -> int:
        return len(self.below)

    def leq(self, a: int, b: int) -> bool:
        return bool(self.below[b] >> a & 1)

    def comparable(self, a: int, b: int) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def interval_mask(self, lo: int, hi: int) -> int:
        return self.above[lo] & self.below[hi]

    def in_interval(self, lo: int, hi: int, c: int) -> bool:
        return self.leq(lo, c) and self.leq(c, hi)

    def incomparable_pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a, b in combinations(range(self.size), 2) if not self.comparable(a, b)]

    def downset_bits(self, a: int) -> str:
        """Bit-string of the downset behind ``a`` (ideal lattices only)."""
        return "".join("1" if self.downsets[a] >> i & 1 else "0" for i in range(self.poset.n))

    def describe(self, a: int) -> str:
        return self.labels[a]

    def to_json(self) -> dict:
        return {"size": self.size, "covers": [[lo, hi] for hi in range(self.size) for lo in self.lower[hi]]}

    def __repr__(self):
        return f"Lattice(size={self.size}, labels={list(self.labels)})"


def _lattice_from_below(below: Sequence[int], labels=None, downsets=None, poset=None, meet=None, join=None) -> Lattice:
    n = len(below)
    above = _above_from_below(below)
    if meet is None:
        meet = [[0] * n for _ in range(n)]
        join = [[0] * n for _ in range(n)]
        for a in range(n):
            for b in range(a, n):
                m = _glb(below, below[a] & below[b])
                if m is None:
                    raise NotALattice(f"elements {a} and {b} have no meet", (a, b))
                j = _glb(above, above[a] & above[b])
                if j is None:
                    raise NotALattice(f"elements {a} and {b} have no join", (a, b))
                meet[a][b] = meet[b][a] = m
                join[a][b] = join[b][a] = j
    full = (1 << n) - 1
    bottom = next(i for i in range(n) if above[i] == full)
    top = next(i for i in range(n) if below[i] == full)
    lower, upper = _covers_from_below(below)
    return Lattice(
        below=tuple(below),
        above=tuple(above),
        meet=tuple(map(tuple, meet)),
        join=tuple(map(tuple, join)),
        rank=tuple(_ranks(below)),
        bottom=bottom,
        top=top,
        labels=tuple(labels) if labels is not None else tuple(str(i) for i in range(n)),
        downsets=tuple(downsets) if downsets is not None else None,
        poset=poset,
        lower=tuple(map(tuple, lower)),
        upper=tuple(map(tuple, upper)),
    )


def build_lattice(leq: Sequence[Sequence[bool]], labels: Sequence[str] | None = None) -> Lattice:
    """Validate an order matrix (``leq[a][b]`` iff a <= b) and build the lattice."""
    n = len(leq)
    if n == 0:
        raise NotALattice("empty order")
    below = [sum(1 << a for a in range(n) if leq[a][b]) for b in range(n)]
    _check_partial_order(below)
    L = _lattice_from_below(below, labels)
    _verify_axioms(L)
    return L


def _verify_axioms(L: Lattice) -> None:
    n = L.size
    for a in range(n):
        for b in range(n):
            if L.leq(a, b) != (L.meet[a][b] == a) or L.leq(a, b) != (L.join[a][b] == b):
                raise NotALattice(f"order and operations disagree at {a}, {b}", (a, b))
            if L.meet[a][L.join[a][b]] != a or L.join[a][L.meet[a][b]] != a:
                raise NotALattice(f"absorption fails at {a}, {b}", (a, b))


def lattice_from_covers(covers: Sequence[Sequence[int]], size: int | None = None, labels=None) -> Lattice:
    if size is None:
        size = 1 + max((max(c) for c in covers), default=0)
    succ = [[] for _ in range(size)]
    for lo, hi in covers:
        succ[lo].append(hi)
    from .poset import _closure

    below, _ = _closure(size, succ)
    leq = [[bool(below[b] >> a & 1) for b in range(size)] for a in range(size)]
    return build_lattice(leq, labels)


def lattice_from_json(data: dict) -> Lattice:
    labels = data.get("labels")
    if "leq" in data:
        return build_lattice([[bool(v) for v in row] for row in data["leq"]], labels)
    return lattice_from_covers(data["covers"], data.get("size"), labels)


def load_lattice(path) -> Lattice:
    with open(path) as fh:
        return lattice_from_json(json.load(fh))


def ideal_lattice(P: Poset, max_size: int | None = None, cap: int | None = None) -> Lattice:
    """Lattice of downsets of ``P`` under inclusion.

    Ids follow the (cardinality, bit value) order of the downsets, so rank
    equals cardinality and ids increase with the canonical variable order.
    """
    kwargs = {}
    if max_size is not None:
        kwargs["max_size"] = max_size
    if cap is not None:
        kwargs["cap"] = cap
    masks = down_set_masks(P, **kwargs)
    index = {m: i for i, m in enumerate(masks)}
    n = len(masks)
    below = [sum(1 << j for j in range(n) if masks[j] & ~masks[i] == 0) for i in range(n)]
    meet = [[index[a & b] for b in masks] for a in masks]
    join = [[index[a | b] for b in masks] for a in masks]
    labels = ["{" + ",".join(P.labels(m)) + "}" for m in masks]
    L = _lattice_from_below(below, labels, masks, P, meet, join)
    if any(L.rank[i] != popcount(masks[i]) for i in range(n)):
        raise InternalDisagreement("rank differs from downset cardinality")
    return L


def grid_lattice(m: int, n: int, missing=()) -> Lattice:
    """Points of [m]_0 x [n]_0 minus ``missing`` with the componentwise order."""
    missing = set(map(tuple, missing))
    points = [(i, j) for i in range(m + 1) for j in range(n + 1) if (i, j) not in missing]
    return points_lattice(points)


def points_lattice(points) -> Lattice:
    points = sorted(map(tuple, points), key=lambda p: (p[0] + p[1], p))
    below = [
        sum(1 << k for k, q in enumerate(points) if q[0] <= p[0] and q[1] <= p[1])
        for p in points
    ]
    return _lattice_from_below(below, [f"({i},{j})" for i, j in points])


def diamond() -> Lattice:
    return grid_lattice(1, 1)


def chain_lattice(n: int) -> Lattice:
    return lattice_from_covers([(i, i + 1) for i in range(n - 1)], n)


def m3() -> Lattice:
    """The five-element lattice with three pairwise incomparable atoms."""
    return lattice_from_covers([(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)], 5, ["e", "b", "c", "d", "a"])


def n5() -> Lattice:
    """The pentagon: e < c < b < a and e < d < a."""
    return lattice_from_covers([(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)], 5, ["e", "c", "b", "d", "a"])


# -- isomorphism -------------------------------------------------------------------


def order_isomorphism(below1: Sequence[int], below2: Sequence[int]) -> list[int] | None:
    """An order isomorphism between two finite posets given by below-masks.

    Backtracking over candidates that share (rank, #below, #above); returns
    the map as a list or ``None``.
    """
    n = len(below1)
    if n != len(below2):
        return None
    above1, above2 = _above_from_below(below1), _above_from_below(below2)
    r1, r2 = _ranks(below1), _ranks(below2)
    inv1 = [(r1[i], popcount(below1[i]), popcount(above1[i])) for i in range(n)]
    inv2 = [(r2[i], popcount(below2[i]), popcount(above2[i])) for i in range(n)]
    if sorted(inv1) != sorted(inv2):
        return None
    order = sorted(range(n), key=lambda i: inv1[i])
    phi = [-1] * n
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        a = order[k]
        for b in range(n):
            if used[b] or inv2[b] != inv1[a]:
                continue
            ok = True
            for prev in order[:k]:
                pb = phi[prev]
                if bool(below1[a] >> prev & 1) != bool(below2[b] >> pb & 1) or bool(
                    below1[prev] >> a & 1
                ) != bool(below2[pb] >> b & 1):
                    ok = False
                    break
            if ok:
                phi[a], used[b] = b, True
                if extend(k + 1):
                    return True
                phi[a], used[b] = -1, False
        return False

    return phi if extend(0) else None


def lattices_isomorphic(L1: Lattice, L2: Lattice) -> bool:
    return order_isomorphism(L1.below, L2.below) is not None


def canonical_form(below: Sequence[int]) -> tuple:
    """Isomorphism-invariant encoding of a small poset.

    Minimum, over permutations that sort elements by an invariant, of the
    relabelled relation; exponential only inside ties of the invariant.
    """
    n = len(below)
    above = _above_from_below(below)
    rank = _ranks(below)
    inv = [(rank[i], popcount(below[i]), popcount(above[i])) for i in range(n)]
    classes = defaultdict(list)
    for i in range(n):
        classes[inv[i]].append(i)
    keys = sorted(classes)
    best = None

    def rec(k: int, perm: list[int]):
        nonlocal best
        if k == len(keys):
            pos = {old: new for new, old in enumerate(perm)}
            code = tuple(sorted((pos[j], pos[i]) for i in range(n) for j in bits_of(below[i]) if j != i))
            if best is None or code < best:
                best = code
            return
        from itertools import permutations

        for p in permutations(classes[keys[k]]):
            rec(k + 1, perm + list(p))

    rec(0, [])
    return (tuple(keys[i] for i in range(len(keys)) for _ in classes[keys[i]]), best)


# -- Birkhoff ------------------------------------------------------------------------


def join_irreducible_ids(L: Lattice) -> list[int]:
    return [a for a in range(L.size) if len(L.lower[a]) == 1]


def join_irreducibles(L: Lattice) -> Poset:
    """Induced subposet of elements with exactly one lower neighbour.

    For an ideal lattice the principal downset of ``p`` is labelled ``p``,
    so the round trip returns the original labels.
    """
    ids = join_irreducible_ids(L)
    mask = sum(1 << a for a in ids)
    pos = {a: k for k, a in enumerate(ids)}
    below = [sum(1 << pos[b] for b in bits_of(L.below[a] & mask)) for a in ids]
    if L.poset is not None:
        labels = []
        for a in ids:
            ds = L.downsets[a]
            top_el = [p for p in bits_of(ds) if L.poset.strictly_above(p) & ds == 0]
            labels.append(L.poset.elements[top_el[0]])
        # keep the source poset's element order
        order = sorted(range(len(ids)), key=lambda k: L.poset.index(labels[k]))
        remap = {old: new for new, old in enumerate(order)}
        below = [sum(1 << remap[j] for j in bits_of(below[old])) for old in order]
        labels = [labels[old] for old in order]
    else:
        labels = [L.labels[a] for a in ids]
    return poset_from_below(labels, below)


# -- distributivity --------------------------------------------------------------------


def distributive_law_witness(L: Lattice) -> tuple[int, int, int] | None:
    meet, join = L.meet, L.join
    n = L.size
    for a in range(n):
        ma = meet[a]
        for b in range(n):
            mab = ma[b]
            jb = join[b]
            for c in range(b + 1, n):
                if ma[jb[c]] != join[mab][ma[c]]:
                    return a, b, c
    return None


def forbidden_sublattice(L: Lattice) -> tuple[str, tuple[int, ...]] | None:
    """A sublattice isomorphic to M3 or N5, as (name, (bottom, ..., top))."""
    meet, join = L.meet, L.join
    n = L.size
    pairs = L.incomparable_pairs()
    for x, y in pairs:
        lo, hi = meet[x][y], join[x][y]
        for z in range(y + 1, n):
            if z != x and not L.comparable(x, z) and not L.comparable(y, z):
                if meet[x][z] == lo and meet[y][z] == lo and join[x][z] == hi and join[y][z] == hi:
                    return "M3", (lo, x, y, z, hi)
    for c in range(n):
        for a in range(n):
            if L.comparable(a, c):
                continue
            lo, hi = meet[a][c], join[a][c]
            for b in bits_of(L.above[a] & ~(1 << a)):
                if not L.comparable(b, c) and meet[b][c] == lo and join[b][c] == hi:
                    return "N5", (lo, a, b, c, hi)
    return None


def is_distributive(L: Lattice) -> tuple[bool, object]:
    """Distributive-law sweep and forbidden-sublattice search; both must agree."""
    law = distributive_law_witness(L)
    forbidden = forbidden_sublattice(L)
    if (law is None) != (forbidden is None):
        raise InternalDisagreement(f"distributive law witness {law} vs forbidden sublattice {forbidden}")
    if law is None:
        return True, None
    return False, {"triple": law, "sublattice": forbidden}


# -- complements ---------------------------------------------------------------------


def complements_in_interval(L: Lattice, lo: int, hi: int, c: int) -> list[int]:
    """Every ``d`` in [lo, hi] with c v d = hi and c ^ d = lo."""
    if not L.in_interval(lo, hi, c):
        raise ValueError(f"{c} is not in [{lo}, {hi}]")
    return [d for d in bits_of(L.interval_mask(lo, hi)) if L.join[c][d] == hi and L.meet[c][d] == lo]


def complement_in_interval(L: Lattice, lo: int, hi: int, c: int) -> int | None:
    found = complements_in_interval(L, lo, hi, c)
    if len(found) > 1:
        raise MultipleComplements(found)
    return found[0] if found else None


def complementary_sets(L: Lattice, lo: int, hi: int) -> list[tuple[int, int]]:
    """Unordered pairs {c, d} != {lo, hi} of [lo, hi] with c v d = hi, c ^ d = lo."""
    idx = list(bits_of(L.interval_mask(lo, hi)))
    out = []
    for c, d in combinations(idx, 2):
        if {c, d} != {lo, hi} and L.join[c][d] == hi and L.meet[c][d] == lo:
            out.append((c, d))
    return out


def _complementary_table(L: Lattice) -> dict[tuple[int, int], list[tuple[int, int]]]:
    # every complementary set is an incomparable pair keyed by its meet and join
    table = defaultdict(list)
    for c, d in L.incomparable_pairs():
        table[L.meet[c][d], L.join[c][d]].append((c, d))
    return table


def _intervals_widest_first(L: Lattice) -> list[tuple[int, int]]:
    ivs = [(lo, hi) for hi in range(L.size) for lo in bits_of(L.below[hi])]
    ivs.sort(key=lambda iv: (-(L.rank[iv[1]] - L.rank[iv[0]]), iv))
    return ivs


def is_conditionally_urc(L: Lattice) -> tuple[bool, tuple[int, int] | None]:
    table = _complementary_table(L)
    for iv in _intervals_widest_first(L):
        if len(table.get(iv, ())) > 1:
            return False, iv
    return True, None


def is_chain_interval(L: Lattice, lo: int, hi: int) -> bool:
    mask = L.interval_mask(lo, hi)
    return all((L.below[x] | L.above[x]) & mask == mask for x in bits_of(mask))


def is_urc(L: Lattice) -> tuple[bool, tuple[int, int] | None]:
    """Every interval is a chain or has exactly one complementary set.

    The witness is the widest failing interval.
    """
    table = _complementary_table(L)
    for lo, hi in _intervals_widest_first(L):
        k = len(table.get((lo, hi), ()))
        if k > 1 or (k == 0 and not is_chain_interval(L, lo, hi)):
            return False, (lo, hi)
    return True, None


def neighbor_bounds(L: Lattice) -> tuple[int, int, dict]:
    lo_w = max(range(L.size), key=lambda a: (len(L.lower[a]), -a))
    up_w = max(range(L.size), key=lambda a: (len(L.upper[a]), -a))
    return len(L.lower[lo_w]), len(L.upper[up_w]), {"max_lower_at": lo_w, "max_upper_at": up_w}


# -- meet-semilattices -----------------------------------------------------------------


@dataclass(frozen=True)
class MeetSemilattice:
    """Finite meet-semilattice; ``join[a][b]`` is ``None`` where no join exists."""

    below: tuple[int, ...]
    above: tuple[int, ...]
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int | None, ...], ...]
    rank: tuple[int, ...]
    lower: tuple[tuple[int, ...], ...]
    upper: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]
    downsets: tuple[int, ...] | None = None
    poset: Poset | None = None

    @property
    def size(self) -> int:
        return len(self.below)

    @property
    def bottom(self) -> int:
        full = (1 << self.size) - 1
        return next(i for i in range(self.size) if self.above[i] == full)

    def leq(self, a: int, b: int) -> bool:
        return bool(self.below[b] >> a & 1)

    def join_irreducibles(self) -> list[int]:
        return [a for a in range(self.size) if len(self.lower[a]) == 1]

    @property
    def degree(self) -> tuple[int, ...]:
        jmask = sum(1 << a for a in self.join_irreducibles())
        return tuple(popcount(self.below[a] & jmask) for a in range(self.size))

    def is_lattice(self) -> bool:
        return all(j is not None for row in self.join for j in row)


def _semilattice_from_below(below, labels=None, downsets=None, poset=None) -> MeetSemilattice:
    n = len(below)
    above = _above_from_below(below)
    meet = [[0] * n for _ in range(n)]
    join = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            m = _glb(below, below[a] & below[b])
            if m is None:
                raise NotALattice(f"elements {a} and {b} have no meet", (a, b))
            meet[a][b] = meet[b][a] = m
            j = _glb(above, above[a] & above[b])
            join[a][b] = join[b][a] = j
    lower, upper = _covers_from_below(below)
    return MeetSemilattice(
        tuple(below),
        tuple(above),
        tuple(map(tuple, meet)),
        tuple(map(tuple, join)),
        tuple(_ranks(below)),
        tuple(map(tuple, lower)),
        tuple(map(tuple, upper)),
        tuple(labels) if labels is not None else tuple(str(i) for i in range(n)),
        tuple(downsets) if downsets is not None else None,
        poset,
    )


def build_meet_semilattice(leq: Sequence[Sequence[bool]], labels=None) -> MeetSemilattice:
    n = len(leq)
    below = [sum(1 << a for a in range(n) if leq[a][b]) for b in range(n)]
    _check_partial_order(below)
    return _semilattice_from_below(below, labels)


def semilattice_from_downsets(P: Poset, masks: Sequence[int]) -> MeetSemilattice:
    """Family of downsets of ``P`` ordered by inclusion (must be meet-closed)."""
    masks = sorted(set(masks), key=lambda m: (popcount(m), m))
    n = len(masks)
    below = [sum(1 << j for j in range(n) if masks[j] & ~masks[i] == 0) for i in range(n)]
    labels = ["{" + ",".join(P.labels(m)) + "}" for m in masks]
    return _semilattice_from_below(below, labels, masks, P)


def as_meet_semilattice(L: Lattice) -> MeetSemilattice:
    return _semilattice_from_below(L.below, L.labels, L.downsets, L.poset)


def _is_boolean_interval(S: MeetSemilattice, lo: int, hi: int) -> bool:
    mask = S.above[lo] & S.below[hi]
    atoms = [a for a in S.upper[lo] if mask >> a & 1]
    if popcount(mask) != 1 << len(atoms):
        return False
    seen = set()
    for sub in range(1 << len(atoms)):
        j = lo
        for k in bits_of(sub):
            j = S.join[j][atoms[k]]
        if j is None or j in seen or not mask >> j & 1:
            return False
        seen.add(j)
    return True


def meet_distributive_boolean_intervals(S: MeetSemilattice) -> tuple[bool, int | None]:
    """For every y, [meet of lower neighbours of y, y] is Boolean."""
    for y in range(S.size):
        if not S.lower[y]:
            continue
        x = S.lower[y][0]
        for z in S.lower[y][1:]:
            x = S.meet[x][z]
        if not _is_boolean_interval(S, x, y):
            return False, y
    return True, None


def meet_distributive_graded_degree(S: MeetSemilattice) -> tuple[bool, int | None]:
    """Every cover raises rank by one, and degree equals rank everywhere."""
    deg = S.degree
    for b in range(S.size):
        for a in S.lower[b]:
            if S.rank[b] != S.rank[a] + 1:
                return False, b
        if deg[b] != S.rank[b]:
            return False, b
    return True, None


def meet_distributive_unique_decomposition(S: MeetSemilattice) -> tuple[bool, int | None]:
    """Each element has exactly one inclusion-minimal set of join-irreducibles
    joining to it."""
    jis = S.join_irreducibles()
    for l in range(S.size):
        cand = [p for p in jis if S.leq(p, l)]
        spanning = []
        for sub in range(1 << len(cand)):
            j = S.bottom
            for k in bits_of(sub):
                j = S.join[j][cand[k]]
            if j == l:
                spanning.append(sub)
        minimal = [s for s in spanning if not any(t != s and t & ~s == 0 for t in spanning)]
        if len(minimal) != 1:
            return False, l
    return True, None


def is_meet_distributive(S: MeetSemilattice | Lattice) -> tuple[bool, dict]:
    if isinstance(S, Lattice):
        S = as_meet_semilattice(S)
    report = {
        "boolean_intervals": meet_distributive_boolean_intervals(S),
        "graded_degree_rank": meet_distributive_graded_degree(S),
        "unique_minimal_decomposition": meet_distributive_unique_decomposition(S),
    }
    verdicts = {ok for ok, _ in report.values()}
    if len(verdicts) != 1:
        raise ConditionsDisagree(f"meet-distributivity conditions disagree: {report}")
    return verdicts.pop(), report


def associated_distributive_lattice(S: MeetSemilattice | Lattice) -> tuple[Lattice, list[int], bool]:
    """``(L_hat, embedding, image_is_poset_ideal)``.

    ``L_hat`` is the downset lattice of the join-irreducibles of ``S`` and
    ``embedding[l]`` the id in ``L_hat`` of the join-irreducibles below ``l``.
    """
    if isinstance(S, Lattice):
        S = as_meet_semilattice(S)
    ok, report = is_meet_distributive(S)
    if not ok:
        raise NotMeetDistributive(f"not meet-distributive: {report}")
    jis = S.join_irreducibles()
    if S.poset is not None:
        # reuse the source poset's labels and order where elements are downsets
        src = S.poset

        def generator(a):
            ds = S.downsets[a]
            return next(p for p in bits_of(ds) if src.strictly_above(p) & ds == 0)

        jis.sort(key=generator)
        labels = [src.elements[generator(a)] for a in jis]
    else:
        labels = [S.labels[a] for a in jis]
    pos = {a: k for k, a in enumerate(jis)}
    P = poset_from_below(labels, [sum(1 << pos[b] for b in jis if S.leq(b, a)) for a in jis])
    L_hat = ideal_lattice(P)
    index = {m: i for i, m in enumerate(L_hat.downsets)}
    embedding = [index[sum(1 << pos[p] for p in jis if S.leq(p, l))] for l in range(S.size)]
    if len(set(embedding)) != S.size:
        raise InternalDisagreement("canonical embedding is not injective")
    for a in range(S.size):
        for b in range(S.size):
            if embedding[S.meet[a][b]] != L_hat.meet[embedding[a]][embedding[b]]:
                raise InternalDisagreement("canonical embedding does not preserve meets")
    image = sum(1 << e for e in embedding)
    is_ideal = all(L_hat.below[e] & ~image == 0 for e in embedding)
    return L_hat, embedding, is_ideal

"""Pure-difference binomials and Buchberger's algorithm specialised to them.

Coefficients never appear: every polynomial handled here is ``u - v`` for
monomials ``u != v``, and S-polynomials and reductions of such differences
are again such differences (or zero). Monomials are dense exponent tuples
over a :class:`Ring`; the term order supplies a sort key.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from operator import itemgetter
from typing import Callable, Iterable, Mapping, Sequence

from .errors import DegreeCapExceeded, IncompatibleVariables, InternalDisagreement

log = logging.getLogger(__name__)

DEFAULT_DEGREE_CAP = 12

Monomial = tuple  # dense exponent vector over a Ring


@dataclass(frozen=True, order=True)
class Variable:
    """``kind`` is one of ``"z"``, ``"x"``, ``"y"``, ``"t"``."""

    kind: str
    key: str = ""

    @property
    def name(self) -> str:
        return self.kind if self.kind == "t" else f"{self.kind}:{self.key}"

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Ring:
    variables: tuple[Variable, ...]
    _index: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise IncompatibleVariables("repeated variable in ring")
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.variables)})

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, v: Variable) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise IncompatibleVariables(f"{v} is not a variable of this ring") from None

    def one(self) -> Monomial:
        return (0,) * self.nvars

    def var(self, v: Variable, exp: int = 1) -> Monomial:
        m = [0] * self.nvars
        m[self.index(v)] = exp
        return tuple(m)

    def monomial(self, exponents: Mapping[Variable, int]) -> Monomial:
        m = [0] * self.nvars
        for v, e in exponents.items():
            if e < 0:
                raise ValueError("negative exponent")
            m[self.index(v)] += e
        return tuple(m)

    def as_dict(self, m: Monomial) -> dict[str, int]:
        if len(m) != self.nvars:
            raise IncompatibleVariables("monomial length does not match ring")
        return {self.variables[i].name: e for i, e in enumerate(m) if e}

    def format(self, m: Monomial) -> str:
        parts = []
        for i, e in enumerate(m):
            if e:
                name = self.variables[i].name
                parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts) or "1"

    def indices(self, kind: str) -> list[int]:
        return [i for i, v in enumerate(self.variables) if v.kind == kind]


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def coprime(a: Monomial, b: Monomial) -> bool:
    return not any(x and y for x, y in zip(a, b))


def degree(m: Monomial) -> int:
    return sum(m)


def support_mask(m: Monomial) -> int:
    out = 0
    for i, e in enumerate(m):
        if e:
            out |= 1 << i
    return out


# -- term orders -----------------------------------------------------------------------


RANK_LEX = "rank-lex"
RANK_REVLEX = "rank-revlex"
PRODUCT_LEX1 = "product-lex1"
LEX = "lex"
ELIMINATION = "elimination"


@dataclass(frozen=True)
class TermOrder:
    """A monomial order on a fixed ring.

    ``ranking`` lists ring variable indices from largest to smallest.
    ``rank-lex``, ``product-lex1`` and ``lex`` compare exponent vectors
    lexicographically along ``ranking``; ``rank-revlex`` is degree reverse
    lexicographic along it. ``elimination`` compares the exponents of the
    first ``block`` variables of ``ranking`` lexicographically and breaks
    ties with ``inner``.
    """

    kind: str
    ranking: tuple[int, ...]
    block: int = 0
    inner: "TermOrder | None" = None
    key: Callable = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "key", self._make_key())

    def _make_key(self):
        r = self.ranking
        if self.kind in (RANK_LEX, PRODUCT_LEX1, LEX):
            if len(r) == 1:
                i = r[0]
                return lambda m: (m[i],)
            return itemgetter(*r)
        if self.kind == RANK_REVLEX:
            rev = tuple(reversed(r))
            if len(rev) == 1:
                i = rev[0]
                return lambda m: (sum(m), -m[i])
            get = itemgetter(*rev)
            return lambda m: (sum(m), tuple(-e for e in get(m)))
        if self.kind == ELIMINATION:
            head = r[: self.block]
            inner_key = self.inner.key
            if not head:
                return lambda m: ((), inner_key(m))
            get = itemgetter(*head) if len(head) > 1 else (lambda m, i=head[0]: (m[i],))
            return lambda m: (get(m), inner_key(m))
        raise ValueError(f"unknown term order kind {self.kind!r}")

    def greater(self, u: Monomial, v: Monomial) -> bool:
        return self.key(u) > self.key(v)


def compare(u: Monomial, v: Monomial, order: TermOrder) -> int:
    """-1, 0 or 1 as ``u`` is smaller than, equal to or larger than ``v``."""
    if len(u) != len(v):
        raise IncompatibleVariables("monomials live in different rings")
    ku, kv = order.key(u), order.key(v)
    return (ku > kv) - (ku < kv)


def elimination_order(eliminate: Sequence[int], inner: TermOrder) -> TermOrder:
    elim = tuple(eliminate)
    rest = tuple(i for i in inner.ranking if i not in set(elim))
    return TermOrder(ELIMINATION, elim + rest, block=len(elim), inner=inner)


# -- binomials ------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Binomial:
    """``lead - trail`` with ``lead`` the larger monomial for the order used."""

    lead: Monomial
    trail: Monomial

    @property
    def degree(self) -> int:
        return max(sum(self.lead), sum(self.trail))

    def monomials(self) -> frozenset:
        return frozenset((self.lead, self.trail))

    def to_json(self, ring: Ring) -> dict:
        return {"lead": ring.as_dict(self.lead), "trail": ring.as_dict(self.trail)}

    def format(self, ring: Ring) -> str:
        return f"{ring.format(self.lead)} - {ring.format(self.trail)}"


def make_binomial(u: Monomial, v: Monomial, order: TermOrder) -> Binomial | None:
    """Orient ``u - v`` (up to sign) so the lead is the larger term."""
    if len(u) != len(v):
        raise IncompatibleVariables("monomials live in different rings")
    if u == v:
        return None
    if min(u) < 0 or min(v) < 0:
        raise InternalDisagreement(f"negative exponent in binomial {u} - {v}")
    return Binomial(u, v) if order.key(u) > order.key(v) else Binomial(v, u)


def orient(f: Binomial, order: TermOrder) -> Binomial:
    return make_binomial(f.lead, f.trail, order)


def same_binomial_set(F: Iterable[Binomial], G: Iterable[Binomial]) -> bool:
    """Set equality up to the sign of each binomial."""
    return {f.monomials() for f in F} == {g.monomials() for g in G}


def spoly(f: Binomial, g: Binomial, order: TermOrder) -> Binomial | None:
    """S-polynomial of two oriented binomials.

    ``None`` when the leads are coprime (Buchberger's first criterion) or the
    S-polynomial vanishes.
    """
    if coprime(f.lead, g.lead):
        return None
    lcm = mono_lcm(f.lead, g.lead)
    a = tuple(l - x + y for l, x, y in zip(lcm, f.lead, f.trail))
    b = tuple(l - x + y for l, x, y in zip(lcm, g.lead, g.trail))
    return make_binomial(a, b, order)


class _Reducer:
    """Monomial rewriting modulo a growing list of oriented binomials.

    Rules are bucketed by the first variable of their lead, so only buckets
    hit by the support of the monomial being reduced are scanned.
    """

    __slots__ = ("buckets", "size")

    def __init__(self, basis: Iterable[Binomial] = ()):
        self.buckets: dict[int, list[tuple[int, Monomial, Monomial]]] = {}
        self.size = 0
        for g in basis:
            self.add(g)

    def add(self, g: Binomial) -> None:
        mask = support_mask(g.lead)
        pivot = (mask & -mask).bit_length() - 1
        self.buckets.setdefault(pivot, []).append((mask, g.lead, g.trail))
        self.size += 1

    def reduce(self, w: Monomial) -> Monomial:
        buckets = self.buckets
        while True:
            for i, e in enumerate(w):
                if not e or i not in buckets:
                    continue
                for mask, lead, trail in buckets[i]:
                    if all(x <= y for x, y in zip(lead, w)):
                        w = tuple(y - x + t for x, y, t in zip(lead, w, trail))
                        break
                else:
                    continue
                break
            else:
                return w


def normal_form(f: Binomial, G: Sequence[Binomial] | _Reducer, order: TermOrder) -> Binomial | None:
    """Fully reduce both terms of ``f`` modulo ``G``; ``None`` means zero."""
    red = G if isinstance(G, _Reducer) else _Reducer(G)
    return make_binomial(red.reduce(f.lead), red.reduce(f.trail), order)


@dataclass
class BuchbergerTrace:
    pairs_considered: int = 0
    coprime_skipped: int = 0
    zero_reductions: int = 0
    added: int = 0
    truncated_pairs: int = 0
    chain_skipped: int = 0


def _chain_criterion(G: list[Binomial], masks: list[int], j: int, k: int, done: set) -> bool:
    """Some lead divides lcm(j, k) and both of its pairs with j, k are done."""
    lcm = mono_lcm(G[j].lead, G[k].lead)
    within = masks[j] | masks[k]
    for i, m in enumerate(masks):
        if m & ~within or i == j or i == k:
            continue
        if (min(i, j), max(i, j)) in done and (min(i, k), max(i, k)) in done and divides(G[i].lead, lcm):
            return True
    return False


def _minimal_reduced(G: list[Binomial], order: TermOrder) -> list[Binomial]:
    G = sorted(G, key=lambda g: (order.key(g.lead), order.key(g.trail)))
    minimal = []
    for k, g in enumerate(G):
        if any(divides(h.lead, g.lead) and (h.lead != g.lead or j < k) for j, h in enumerate(G) if j != k):
            continue
        minimal.append(g)
    red = _Reducer(minimal)
    out = []
    for g in minimal:
        trail = red.reduce(g.trail)
        b = make_binomial(g.lead, trail, order)
        if b is None or b.lead != g.lead:
            raise InternalDisagreement("interreduction changed a leading term")
        out.append(b)
    out.sort(key=lambda g: order.key(g.lead), reverse=True)
    return out


def reduced_basis(G: Iterable[Binomial], order: TermOrder) -> list[Binomial]:
    """Minimalise and interreduce a Gröbner basis; leads sorted descending."""
    return _minimal_reduced([orient(g, order) for g in G], order)


def buchberger(
    gens: Iterable[Binomial],
    order: TermOrder,
    degree_cap: int = DEFAULT_DEGREE_CAP,
    max_degree: int | None = None,
    verify: bool = True,
    trace: BuchbergerTrace | None = None,
) -> list[Binomial]:
    """Reduced Gröbner basis of the ideal generated by ``gens``.

    Pairs are processed by increasing lcm degree, then lcm order. With
    ``max_degree`` set, pairs whose lcm exceeds it are dropped; for
    homogeneous input the result is then the reduced basis truncated at that
    degree. A new element above ``degree_cap`` raises DegreeCapExceeded.
    """
    trace = trace if trace is not None else BuchbergerTrace()
    G: list[Binomial] = []
    red = _Reducer()
    heap: list = []
    done: set[tuple[int, int]] = set()
    masks: list[int] = []

    def push_pairs(k: int) -> None:
        g = G[k]
        masks.append(support_mask(g.lead))
        for j in range(k):
            h = G[j]
            lcm = mono_lcm(g.lead, h.lead)
            heapq.heappush(heap, (sum(lcm), order.key(lcm), j, k))

    seen = set()
    for f in gens:
        f = orient(f, order)
        if f is None or f.monomials() in seen:
            continue
        seen.add(f.monomials())
        G.append(f)
        red.add(f)
        push_pairs(len(G) - 1)

    while heap:
        deg, lcm_key, j, k = heapq.heappop(heap)
        if max_degree is not None and deg > max_degree:
            trace.truncated_pairs += 1 + len(heap)
            break
        trace.pairs_considered += 1
        done.add((j, k))
        f, g = G[j], G[k]
        if coprime(f.lead, g.lead):
            trace.coprime_skipped += 1
            continue
        if _chain_criterion(G, masks, j, k, done):
            trace.chain_skipped += 1
            continue
        s = spoly(f, g, order)
        h = normal_form(s, red, order) if s is not None else None
        if h is None:
            trace.zero_reductions += 1
            continue
        if h.degree > degree_cap:
            raise DegreeCapExceeded(f"intermediate binomial of degree {h.degree} exceeds cap {degree_cap}")
        G.append(h)
        red.add(h)
        trace.added += 1
        push_pairs(len(G) - 1)

    out = _minimal_reduced(G, order)
    if verify and max_degree is None:
        ok, witness = is_groebner_basis(out, order)
        if not ok:
            raise InternalDisagreement(f"Buchberger output fails the S-pair criterion: {witness}")
    return out


def is_groebner_basis(
    G: Sequence[Binomial], order: TermOrder, max_degree: int | None = None
) -> tuple[bool, Binomial | None]:
    """Buchberger's criterion: every S-pair reduces to zero modulo ``G``.

    Returns the first nonzero remainder as witness. Pairs with lcm degree
    above ``max_degree`` are ignored when it is given.
    """
    G = [orient(g, order) for g in G]
    red = _Reducer(G)
    pairs = []
    for k in range(len(G)):
        for j in range(k):
            if not coprime(G[j].lead, G[k].lead):
                lcm = mono_lcm(G[j].lead, G[k].lead)
                pairs.append((sum(lcm), order.key(lcm), j, k))
    pairs.sort()
    for deg, _, j, k in pairs:
        if max_degree is not None and deg > max_degree:
            break
        s = spoly(G[j], G[k], order)
        if s is None:
            continue
        h = normal_form(s, red, order)
        if h is not None:
            return False, h
    return True, None


# -- toric kernels ----------------------------------------------------------------------


def multidegree(m: Monomial, images: Mapping[int, Monomial]) -> Monomial:
    """Image of ``m`` under the monomial map ``var -> images[var]``.

    Variables without an image map to themselves.
    """
    out = [0] * len(m)
    for i, e in enumerate(m):
        if not e:
            continue
        img = images.get(i)
        if img is None:
            out[i] += e
        else:
            for k, x in enumerate(img):
                if x:
                    out[k] += e * x
    return tuple(out)


def in_kernel(f: Binomial, images: Mapping[int, Monomial]) -> bool:
    return multidegree(f.lead, images) == multidegree(f.trail, images)


def toric_kernel(
    ring: Ring,
    images: Mapping[int, Monomial],
    eliminate: Sequence[int],
    order: TermOrder,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> list[Binomial]:
    """Reduced Gröbner basis under ``order`` of the kernel of a monomial map.

    ``images[v]`` is the image of source variable ``v`` as a monomial in the
    variables ``eliminate`` (plus, possibly, source variables mapped to
    themselves). The graph ideal ``(v - images[v])`` is saturated by a
    Gröbner basis under a block order that puts ``eliminate`` first; the
    basis elements free of eliminated variables generate the kernel.
    """
    elim = set(eliminate)
    block = elimination_order(eliminate, order)
    gens = []
    for v, img in images.items():
        if v in elim:
            raise IncompatibleVariables("an eliminated variable cannot be a source variable")
        b = make_binomial(ring.var(ring.variables[v]), img, block)
        if b is not None:
            gens.append(b)
    G = buchberger(gens, block, degree_cap=degree_cap)
    kept = [g for g in G if not any(g.lead[i] or g.trail[i] for i in elim)]
    return reduced_basis(kept, order)


def gb_to_json(G: Sequence[Binomial], ring: Ring) -> list[dict]:
    return [g.to_json(ring) for g in G]

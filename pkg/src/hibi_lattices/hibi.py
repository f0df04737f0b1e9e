"""Hibi relations, fibers and indispensability, rank-lex Gröbner bases and
Rees-algebra presentations of Hibi ideals."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Sequence

import numpy as np

from .binomial import (
    DEFAULT_DEGREE_CAP,
    PRODUCT_LEX1,
    RANK_LEX,
    RANK_REVLEX,
    Binomial,
    Ring,
    TermOrder,
    Variable,
    buchberger,
    in_kernel,
    is_groebner_basis,
    make_binomial,
    multidegree,
    same_binomial_set,
    toric_kernel,
)
from .errors import InternalDisagreement, KernelMismatch, NotPosetIdeal, OracleDisagreement
from .lattice import Lattice, MeetSemilattice, _complementary_table, associated_distributive_lattice, is_conditionally_urc
from .poset import Poset, bits_of, down_set_masks


# -- rings and orders ------------------------------------------------------------------


@dataclass(frozen=True)
class HibiRing:
    """Polynomial ring over the z, x, y (and t) variables of a lattice.

    ``z[a]`` is the ring index of ``z_a`` for element id ``a``; ``x[p]`` and
    ``y[p]`` those of poset element ``p``; ``t`` the Rees variable. Lattices
    that do not come from a poset only get z variables.
    """

    ring: Ring
    z: tuple[int, ...]
    x: tuple[int, ...] = ()
    y: tuple[int, ...] = ()
    t: int | None = None
    rank: tuple[int, ...] = ()
    masks: tuple[int, ...] | None = None
    poset: Poset | None = None

    def zz(self, a: int, b: int) -> tuple:
        m = [0] * self.ring.nvars
        m[self.z[a]] += 1
        m[self.z[b]] += 1
        return tuple(m)

    def z_elements(self, m) -> list[int]:
        """Element ids of the z variables in ``m``, with multiplicity."""
        out = []
        for a, i in enumerate(self.z):
            out.extend([a] * m[i])
        return out

    def u(self, mask: int, with_t: bool = False) -> tuple:
        m = [0] * self.ring.nvars
        for p in range(self.poset.n):
            m[self.x[p] if mask >> p & 1 else self.y[p]] = 1
        if with_t:
            m[self.t] = 1
        return tuple(m)

    def images(self, rees: bool = False) -> dict[int, tuple]:
        return {self.z[a]: self.u(mask, rees) for a, mask in enumerate(self.masks)}


def hibi_ring(L: Lattice | MeetSemilattice) -> HibiRing:
    n = len(L.below)
    if getattr(L, "poset", None) is not None and L.downsets is not None:
        P = L.poset
        zkeys = ["".join("1" if m >> i & 1 else "0" for i in range(P.n)) for m in L.downsets]
        variables = (
            [Variable("x", p) for p in P.elements]
            + [Variable("y", p) for p in P.elements]
            + [Variable("z", k) for k in zkeys]
            + [Variable("t")]
        )
        r = P.n
        return HibiRing(
            Ring(tuple(variables)),
            z=tuple(range(2 * r, 2 * r + n)),
            x=tuple(range(r)),
            y=tuple(range(r, 2 * r)),
            t=2 * r + n,
            rank=tuple(L.rank),
            masks=tuple(L.downsets),
            poset=P,
        )
    return HibiRing(Ring(tuple(Variable("z", str(a)) for a in range(n))), z=tuple(range(n)), rank=tuple(L.rank))


def _z_ranking(H: HibiRing, tiebreak: Sequence[int] | None) -> list[int]:
    """z ring indices from largest to smallest variable.

    ``tiebreak`` lists element ids from smallest to largest variable and must
    refine rank; by default ties go by id (for ideal lattices: downset bit
    value ascending).
    """
    n = len(H.z)
    if tiebreak is None:
        asc = sorted(range(n), key=lambda a: (H.rank[a], a))
    else:
        asc = list(tiebreak)
        if sorted(asc) != list(range(n)):
            raise ValueError("tiebreak must list every element once")
        if any(H.rank[a] > H.rank[b] for a, b in zip(asc, asc[1:])):
            raise ValueError("tiebreak is not compatible with rank")
    return [H.z[a] for a in reversed(asc)]


def _rest(H: HibiRing, used: Sequence[int]) -> list[int]:
    s = set(used)
    return [i for i in range(H.ring.nvars) if i not in s]


def rank_lex(H: HibiRing, tiebreak: Sequence[int] | None = None) -> TermOrder:
    zr = _z_ranking(H, tiebreak)
    return TermOrder(RANK_LEX, tuple(zr + _rest(H, zr)))


def rank_revlex(H: HibiRing, tiebreak: Sequence[int] | None = None) -> TermOrder:
    zr = _z_ranking(H, tiebreak)
    return TermOrder(RANK_REVLEX, tuple(zr + _rest(H, zr)))


def product_lex1(H: HibiRing, tiebreak: Sequence[int] | None = None) -> TermOrder:
    """x_1 > ... > x_r > y_1 > ... > y_r, then z by rank-lex, then t."""
    head = list(H.x) + list(H.y) + _z_ranking(H, tiebreak)
    return TermOrder(PRODUCT_LEX1, tuple(head + _rest(H, head)))


def rank_compatible_tiebreaks(L: Lattice | MeetSemilattice):
    """Every ascending variable order of the elements that refines rank."""
    from itertools import permutations, product

    levels = {}
    for a, r in enumerate(L.rank):
        levels.setdefault(r, []).append(a)
    ordered = [levels[r] for r in sorted(levels)]
    for choice in product(*(permutations(level) for level in ordered)):
        yield [a for level in choice for a in level]


# -- Hibi relations ---------------------------------------------------------------------


@dataclass(frozen=True)
class HibiPresentation:
    lattice: Lattice
    ring: HibiRing
    order: TermOrder
    pairs: tuple[tuple[int, int], ...]
    relations: tuple[Binomial, ...]


def hibi_relation(L: Lattice, H: HibiRing, a: int, b: int, order: TermOrder) -> Binomial | None:
    return make_binomial(H.zz(a, b), H.zz(L.meet[a][b], L.join[a][b]), order)


def hibi_relations(L: Lattice, order: TermOrder | None = None, H: HibiRing | None = None) -> HibiPresentation:
    """One relation z_a z_b - z_meet z_join per incomparable pair {a, b}."""
    H = H or hibi_ring(L)
    order = order or rank_revlex(H)
    pairs = tuple(L.incomparable_pairs())
    rels = tuple(hibi_relation(L, H, a, b, order) for a, b in pairs)
    return HibiPresentation(L, H, order, pairs, rels)


def hibi_relations_form_gb(L: Lattice, order: TermOrder | None = None) -> tuple[bool, Binomial | None]:
    """Buchberger's criterion for the Hibi relations (default rank-revlex)."""
    pres = hibi_relations(L, order)
    return is_groebner_basis(pres.relations, pres.order)


# -- fibers and indispensability ------------------------------------------------------


@dataclass(frozen=True)
class Fiber:
    meet: int
    join: int
    pairs: tuple[tuple[int, int], ...]
    monomials: tuple[tuple, ...]
    multidegree: tuple | None = None


def quad_fiber(L: Lattice, a: int, b: int, H: HibiRing | None = None) -> Fiber:
    """All unordered {c, d} with c ^ d = a ^ b and c v d = a v b.

    For lattices of downsets the result is cross-checked against the
    degree-2 monomials of equal multidegree under z_c -> u_c.
    """
    H = H or hibi_ring(L)
    lo, hi = L.meet[a][b], L.join[a][b]
    pairs = tuple(
        (c, d)
        for c, d in combinations_with_replacement(range(L.size), 2)
        if L.meet[c][d] == lo and L.join[c][d] == hi
    )
    mdeg = None
    if H.poset is not None:
        images = H.images()
        mdeg = multidegree(H.zz(a, b), images)
        by_degree = tuple(
            (c, d)
            for c, d in combinations_with_replacement(range(L.size), 2)
            if multidegree(H.zz(c, d), images) == mdeg
        )
        if by_degree != pairs:
            raise OracleDisagreement(f"fiber by meet/join {pairs} differs from fiber by multidegree {by_degree}")
    return Fiber(lo, hi, pairs, tuple(H.zz(c, d) for c, d in pairs), mdeg)


class _DegreeTwoFibers:
    """Degree-2 z-monomials grouped by multidegree under z_a -> u_a."""

    def __init__(self, L: Lattice, H: HibiRing):
        images = H.images()
        self.H = H
        self.groups: dict[tuple, list[tuple]] = {}
        for c, d in combinations_with_replacement(range(L.size), 2):
            m = H.zz(c, d)
            self.groups.setdefault(multidegree(m, images), []).append(m)
        self.images = images

    def members(self, m) -> list[tuple]:
        return self.groups[multidegree(m, self.images)]


def _span_oracle_dispensable(rel: Binomial, fiber_monomials: list[tuple]) -> bool:
    """Is ``rel`` a linear combination of the other binomials of its fiber?"""
    pos = {m: k for k, m in enumerate(fiber_monomials)}
    target = frozenset((rel.lead, rel.trail))
    others = []
    for u, v in combinations(fiber_monomials, 2):
        if frozenset((u, v)) == target:
            continue
        row = np.zeros(len(fiber_monomials))
        row[pos[u]], row[pos[v]] = 1.0, -1.0
        others.append(row)
    if not others:
        return False
    goal = np.zeros(len(fiber_monomials))
    goal[pos[rel.lead]], goal[pos[rel.trail]] = 1.0, -1.0
    A = np.array(others)
    return np.linalg.matrix_rank(A) == np.linalg.matrix_rank(np.vstack([A, goal]))


def _incomparable_pair(L: Lattice, H: HibiRing, rel: Binomial) -> tuple[int, int]:
    for m in (rel.lead, rel.trail):
        els = H.z_elements(m)
        if len(els) == 2 and not L.comparable(*els):
            return tuple(sorted(els))
    raise ValueError("not a Hibi relation")


def is_indispensable(L: Lattice, rel: Binomial, H: HibiRing | None = None, _fibers: _DegreeTwoFibers | None = None) -> bool:
    """Fiber criterion (fiber of size two), checked against the span oracle."""
    H = H or hibi_ring(L)
    a, b = _incomparable_pair(L, H, rel)
    lo, hi = L.meet[a][b], L.join[a][b]
    # counts the comparable pair {lo, hi} together with the complementary sets
    fiber_size = sum(1 for c, d in combinations(range(L.size), 2) if L.meet[c][d] == lo and L.join[c][d] == hi)
    fiber_indispensable = fiber_size == 2
    if H.poset is not None:
        fibers = _fibers or _DegreeTwoFibers(L, H)
        span_dispensable = _span_oracle_dispensable(rel, fibers.members(rel.lead))
        if span_dispensable == fiber_indispensable:
            raise OracleDisagreement(
                f"fiber criterion says {'in' if fiber_indispensable else ''}dispensable for "
                f"{rel.format(H.ring)}, span oracle disagrees"
            )
    return fiber_indispensable


def all_hibi_indispensable(L: Lattice, H: HibiRing | None = None) -> tuple[bool, Binomial | None]:
    H = H or hibi_ring(L)
    pres = hibi_relations(L, H=H)
    fibers = _DegreeTwoFibers(L, H) if H.poset is not None else None
    for rel in pres.relations:
        if not is_indispensable(L, rel, H, fibers):
            return False, rel
    return True, None


# -- rank-lex Gröbner bases ---------------------------------------------------------------


@dataclass(frozen=True)
class DefenseGB:
    """Outcome of comparing the rank-lex reduced Gröbner basis with the Hibi
    relations. ``quadratic_part`` is the reduced basis truncated at degree 2."""

    equals_hibi: bool
    quadratic_gb: bool
    offending: Binomial | None
    quadratic_part: tuple[Binomial, ...]
    order: TermOrder
    ring: HibiRing


def rank_lex_gb(
    L: Lattice,
    tiebreak: Sequence[int] | None = None,
    degree_cap: int = DEFAULT_DEGREE_CAP,
    find_offending: bool = True,
) -> DefenseGB:
    """Decide whether the reduced rank-lex basis of I_L is the Hibi set.

    The ideal is generated in degree 2 and homogeneous, so its reduced basis
    in degree <= 2 is the degree-2 truncated Buchberger result ``G2``. The
    full reduced basis is quadratic iff ``G2`` already passes Buchberger's
    criterion, and equals the Hibi relations iff additionally ``G2`` is that
    set. When ``G2`` is not a basis, the offending element is taken from the
    reduced basis truncated at the degree of the first nonzero remainder.
    """
    H = hibi_ring(L)
    order = rank_lex(H, tiebreak)
    hibi = hibi_relations(L, order, H).relations
    G2 = buchberger(hibi, order, degree_cap=degree_cap, max_degree=2, verify=False)
    is_gb, remainder = is_groebner_basis(G2, order)
    equals = same_binomial_set(G2, hibi)
    offending = None
    if not equals:
        hibi_sets = {h.monomials() for h in hibi}
        extra = [g for g in G2 if g.monomials() not in hibi_sets]
        offending = extra[0] if extra else None
    elif not is_gb and find_offending:
        if remainder.degree > degree_cap:
            raise InternalDisagreement("remainder above degree cap")
        Gd = buchberger(hibi, order, degree_cap=degree_cap, max_degree=remainder.degree, verify=False)
        higher = [g for g in Gd if g.degree > 2]
        offending = min(higher, key=lambda g: (g.degree, order.key(g.lead))) if higher else remainder
    return DefenseGB(equals and is_gb, is_gb, offending, tuple(G2), order, H)


def defense_gb_check(L: Lattice, tiebreak: Sequence[int] | None = None, degree_cap: int = DEFAULT_DEGREE_CAP):
    """(reduced rank-lex basis == Hibi relations, offending basis element)."""
    res = rank_lex_gb(L, tiebreak, degree_cap)
    return res.equals_hibi, res.offending


def defense_condition_c(L: Lattice) -> tuple[bool, object]:
    """Conditionally URC, and for a < b < c with [a,b], [b,c] complemented
    and {g,h} the complementary set of [a,b], [g,c] or [h,c] is complemented."""
    ok, iv = is_conditionally_urc(L)
    if not ok:
        return False, {"not_conditionally_urc": iv}
    table = _complementary_table(L)
    for b in range(L.size):
        for a in bits_of(L.below[b] & ~(1 << b)):
            ab = table.get((a, b))
            if not ab:
                continue
            g, h = ab[0]
            for c in bits_of(L.above[b] & ~(1 << b)):
                if (b, c) in table and (g, c) not in table and (h, c) not in table:
                    return False, (a, b, c)
    return True, None


# -- Rees algebras ---------------------------------------------------------------------


@dataclass(frozen=True)
class ReesPresentation:
    ring: HibiRing
    order: TermOrder
    masks: tuple[int, ...]
    is_lattice: bool
    hibi: tuple[Binomial, ...]
    special_linear: tuple[Binomial, ...]

    @property
    def relations(self) -> tuple[Binomial, ...]:
        return self.hibi + self.special_linear


def _downset_family(S: Lattice | MeetSemilattice) -> tuple[Poset, list[int]]:
    if S.poset is not None and S.downsets is not None:
        return S.poset, list(S.downsets)
    L_hat, embedding, _ = associated_distributive_lattice(S)
    return L_hat.poset, [L_hat.downsets[e] for e in embedding]


def rees_presentation(S: Lattice | MeetSemilattice, tiebreak: Sequence[int] | None = None) -> ReesPresentation:
    """Hibi relations (pairs whose join is present) and special linear
    relations x_p z_a - y_p z_{a + p} for every cover edge of the family."""
    from .lattice import semilattice_from_downsets

    P, masks = _downset_family(S)
    family = set(masks)
    for m in masks:
        for p in bits_of(m):
            if P.strictly_above(p) & m == 0 and m & ~(1 << p) not in family:
                raise NotPosetIdeal(f"{P.labels(m & ~(1 << p))} is missing below {P.labels(m)}")
    all_downsets = down_set_masks(P)
    is_lattice = len(family) == len(all_downsets)
    if isinstance(S, Lattice) and S.poset is not None:
        base = S
    else:
        base = semilattice_from_downsets(P, masks)
    H = hibi_ring(base)
    order = product_lex1(H, tiebreak)
    index = {m: i for i, m in enumerate(base.downsets)}
    hibi = []
    for a, b in combinations(range(len(base.downsets)), 2):
        ma, mb = base.downsets[a], base.downsets[b]
        if ma & ~mb and mb & ~ma and (ma | mb) in index:
            hibi.append(make_binomial(H.zz(a, b), H.zz(index[ma & mb], index[ma | mb]), order))
    special = []
    for a1, m in enumerate(base.downsets):
        for p in range(P.n):
            if not m >> p & 1 and (m | 1 << p) in index:
                lhs = [0] * H.ring.nvars
                lhs[H.z[a1]] = 1
                lhs[H.x[p]] = 1
                rhs = [0] * H.ring.nvars
                rhs[H.z[index[m | 1 << p]]] = 1
                rhs[H.y[p]] = 1
                special.append(make_binomial(tuple(lhs), tuple(rhs), order))
    images = H.images(rees=True)
    for f in hibi + special:
        if not in_kernel(f, images):
            raise InternalDisagreement(f"{f.format(H.ring)} is not in the Rees kernel")
    return ReesPresentation(H, order, tuple(base.downsets), is_lattice, tuple(hibi), tuple(special))


@dataclass(frozen=True)
class ReesCheck:
    ok: bool
    offending: Binomial | None
    presentation: ReesPresentation
    kernel_gb: tuple[Binomial, ...]
    presentation_gb: tuple[Binomial, ...]
    generates_kernel: bool


def rees_gb_check(
    S: Lattice | MeetSemilattice,
    tiebreak: Sequence[int] | None = None,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> ReesCheck:
    """Is the reduced product-lex1 basis of J_L exactly Hibi + special linear?

    J_L is computed as a toric kernel by eliminating t; the presentation's
    own reduced basis is compared with it, and a mismatch on a full lattice
    raises KernelMismatch.
    """
    pres = rees_presentation(S, tiebreak)
    H, order = pres.ring, pres.order
    G = buchberger(pres.relations, order, degree_cap=degree_cap)
    K = toric_kernel(H.ring, H.images(rees=True), [H.t], order, degree_cap=degree_cap)
    generates = same_binomial_set(G, K)
    if pres.is_lattice and not generates:
        raise KernelMismatch("Hibi and special linear relations do not generate the Rees kernel")
    ok = same_binomial_set(K, pres.relations)
    offending = None
    if not ok:
        present = {f.monomials() for f in pres.relations}
        extra = [k for k in K if k.monomials() not in present]
        if extra:
            offending = extra[0]
        else:
            kernel = {k.monomials() for k in K}
            offending = next(f for f in pres.relations if f.monomials() not in kernel)
    return ReesCheck(ok, offending, pres, tuple(K), tuple(G), generates)


def hibi_kernel_gb(L: Lattice, order_kind: str = RANK_REVLEX, degree_cap: int = DEFAULT_DEGREE_CAP):
    """(reduced basis of <Hibi relations>, reduced basis of ker(z_a -> u_a)).

    Both under the same rank order; the kernel is computed by eliminating
    the x and y variables.
    """
    H = hibi_ring(L)
    order = rank_revlex(H) if order_kind == RANK_REVLEX else rank_lex(H)
    hibi = hibi_relations(L, order, H).relations
    G = buchberger(hibi, order, degree_cap=degree_cap)
    K = toric_kernel(H.ring, H.images(), list(H.x) + list(H.y), order, degree_cap=degree_cap)
    return G, K, H

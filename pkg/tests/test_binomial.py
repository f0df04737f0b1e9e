import random
from collections import Counter

import pytest

from hibi_lattices.binomial import (
    LEX,
    RANK_REVLEX,
    Ring,
    TermOrder,
    Variable,
    buchberger,
    compare,
    is_groebner_basis,
    make_binomial,
    normal_form,
    same_binomial_set,
    spoly,
    toric_kernel,
)
from hibi_lattices.errors import DegreeCapExceeded, IncompatibleVariables
from hibi_lattices.hibi import hibi_relations, hibi_ring, product_lex1, rank_revlex
from hibi_lattices.lattice import ideal_lattice, n5
from hibi_lattices.poset import antichain, chain


def z_ring(names):
    R = Ring(tuple(Variable("z", n) for n in names))
    order = TermOrder(LEX, tuple(range(len(names))))
    return R, order


def mono(R, *names):
    return R.monomial(Counter(Variable("z", n) for n in names))


def test_product_lex1_puts_x_above_y_above_z():
    L = ideal_lattice(chain(1))
    H = hibi_ring(L)
    order = product_lex1(H)
    lhs = [0] * H.ring.nvars
    lhs[H.x[0]] = lhs[H.z[0]] = 1
    rhs = [0] * H.ring.nvars
    rhs[H.y[0]] = rhs[H.z[1]] = 1
    assert compare(tuple(lhs), tuple(rhs), order) == 1
    assert compare(tuple(lhs), tuple(lhs), order) == 0


def test_compare_rejects_mismatched_rings():
    with pytest.raises(IncompatibleVariables):
        compare((1, 0), (1, 0, 0), TermOrder(LEX, (0, 1)))


def test_order_is_multiplicative():
    rng = random.Random(7)
    order = TermOrder(RANK_REVLEX, (0, 1, 2, 3))
    for _ in range(300):
        u, v, w = (tuple(rng.randrange(3) for _ in range(4)) for _ in range(3))
        c = compare(u, v, order)
        uw = tuple(a + b for a, b in zip(u, w))
        vw = tuple(a + b for a, b in zip(v, w))
        assert compare(uw, vw, order) == c


def test_spoly_defense_shape():
    R, order = z_ring("abcdegh")
    f = make_binomial(mono(R, "a", "b"), mono(R, "g", "h"), order)
    g = make_binomial(mono(R, "b", "c"), mono(R, "e", "d"), order)
    s = spoly(f, g, order)
    assert s.monomials() == {mono(R, "c", "g", "h"), mono(R, "a", "e", "d")}


def test_spoly_rees_shape():
    names = [("x", "p"), ("x", "q"), ("y", "p"), ("y", "q"), ("z", "a"), ("z", "b"), ("z", "c")]
    R = Ring(tuple(Variable(k, n) for k, n in names))
    order = TermOrder(LEX, tuple(range(len(names))))
    m = lambda *vs: R.monomial({Variable(k, n): 1 for k, n in vs})
    f = make_binomial(m(("x", "p"), ("z", "a")), m(("y", "p"), ("z", "b")), order)
    g = make_binomial(m(("x", "q"), ("z", "a")), m(("y", "q"), ("z", "c")), order)
    s = spoly(f, g, order)
    assert s.monomials() == {m(("x", "p"), ("y", "q"), ("z", "c")), m(("x", "q"), ("y", "p"), ("z", "b"))}


def test_spoly_coprime_is_none():
    R, order = z_ring("abcd")
    f = make_binomial(mono(R, "a", "b"), mono(R, "c"), order)
    g = make_binomial(mono(R, "c", "d"), mono(R, "d"), order)
    assert spoly(f, g, order) is None


def test_normal_form_of_member_is_zero():
    R, order = z_ring("abc")
    f = make_binomial(mono(R, "a", "b"), mono(R, "c", "c"), order)
    assert normal_form(f, [f], order) is None


def test_buchberger_on_boolean_cube_is_hibi_set():
    L = ideal_lattice(antichain(3))
    H = hibi_ring(L)
    order = rank_revlex(H)
    rels = hibi_relations(L, order, H).relations
    G = buchberger(rels, order)
    assert len(G) == 9 and same_binomial_set(G, rels)


def test_buchberger_on_pentagon_grows():
    L = n5()
    H = hibi_ring(L)
    order = rank_revlex(H)
    rels = hibi_relations(L, order, H).relations
    G = buchberger(rels, order)
    assert len(G) > len(rels)
    assert is_groebner_basis(G, order)[0]
    assert not is_groebner_basis(rels, order)[0]


def test_single_binomial_is_its_own_basis():
    R, order = z_ring("ab")
    f = make_binomial(mono(R, "a", "a"), mono(R, "b", "b"), order)
    assert buchberger([f], order) == [f]


def test_degree_cap():
    R, order = z_ring("abcd")
    f = make_binomial(mono(R, "a", "b"), mono(R, "c", "c"), order)
    g = make_binomial(mono(R, "a", "c"), mono(R, "d", "d"), order)
    with pytest.raises(DegreeCapExceeded):
        buchberger([f, g], order, degree_cap=2)


def test_toric_kernel_of_diamond_and_chain():
    L = ideal_lattice(antichain(2))
    H = hibi_ring(L)
    order = rank_revlex(H)
    K = toric_kernel(H.ring, H.images(), list(H.x) + list(H.y), order)
    assert same_binomial_set(K, hibi_relations(L, order, H).relations)
    C = ideal_lattice(chain(1))
    Hc = hibi_ring(C)
    assert toric_kernel(Hc.ring, Hc.images(), list(Hc.x) + list(Hc.y), rank_revlex(Hc)) == []


def _sympy_basis(gens, order_vars, ring_size):
    sympy = pytest.importorskip("sympy")
    syms = sympy.symbols(f"v0:{ring_size}")
    polys = []
    for g in gens:
        lead = sympy.Mul(*[syms[i] ** e for i, e in enumerate(g.lead)])
        trail = sympy.Mul(*[syms[i] ** e for i, e in enumerate(g.trail)])
        polys.append(lead - trail)
    G = sympy.groebner(polys, *[syms[i] for i in order_vars], order="lex")
    out = set()
    for p in G.exprs:
        terms = sympy.Poly(p, *syms).terms()
        assert len(terms) == 2 and sorted(c for _, c in terms) == [-1, 1]
        out.add(frozenset(tuple(m) for m, _ in terms))
    return out


@pytest.mark.parametrize("seed", range(12))
def test_buchberger_matches_sympy_on_random_binomials(seed):
    rng = random.Random(seed)
    nv = 4
    order = TermOrder(LEX, tuple(rng.sample(range(nv), nv)))
    gens = []
    while len(gens) < 3:
        u = tuple(rng.randrange(3) for _ in range(nv))
        v = tuple(rng.randrange(3) for _ in range(nv))
        b = make_binomial(u, v, order)
        if b is not None and sum(u) and sum(v):
            gens.append(b)
    try:
        G = buchberger(gens, order, degree_cap=30)
    except DegreeCapExceeded:
        pytest.skip("random ideal too large")
    assert {g.monomials() for g in G} == _sympy_basis(gens, order.ranking, nv)


def test_rees_kernel_of_v_poset_matches_sympy(v_poset):
    """Independent check of the Rees kernel basis behind the V-shaped case."""
    sympy = pytest.importorskip("sympy")
    from hibi_lattices.hibi import rees_gb_check

    L = ideal_lattice(v_poset)
    rc = rees_gb_check(L)
    H = rc.presentation.ring
    syms = sympy.symbols(f"v0:{H.ring.nvars}")
    t = syms[H.t]
    images = H.images(rees=True)
    gens = [syms[H.z[a]] - sympy.Mul(*[syms[i] ** e for i, e in enumerate(images[H.z[a]])]) for a in range(L.size)]
    ordered = [t] + [syms[i] for i in rc.presentation.order.ranking if i != H.t]
    G = sympy.groebner(gens, *ordered, order="lex")
    kernel = set()
    for p in G.exprs:
        if p.has(t):
            continue
        terms = sympy.Poly(p, *syms).terms()
        kernel.add(frozenset(tuple(m) for m, _ in terms))
    assert kernel == {k.monomials() for k in rc.kernel_gb}

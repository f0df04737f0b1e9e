from hypothesis import given, settings
from hypothesis import strategies as st

from hibi_lattices.binomial import multidegree, normal_form, spoly
from hibi_lattices.grid import grid_embedding, is_full_sublattice
from hibi_lattices.hibi import hibi_relations, hibi_ring, rank_lex
from hibi_lattices.lattice import (
    ideal_lattice,
    is_conditionally_urc,
    is_distributive,
    is_urc,
    join_irreducibles,
    lattices_isomorphic,
    neighbor_bounds,
    order_isomorphism,
)
from hibi_lattices.poset import build_poset, canonical_two_chain_cover, is_chain_cover, two_chain_cover, width_le_two


@st.composite
def posets(draw, max_n=6):
    n = draw(st.integers(0, max_n))
    labels = [f"p{i + 1}" for i in range(n)]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    perm = draw(st.permutations(range(n)))
    return build_poset(labels, [(labels[perm[i]], labels[perm[j]]) for i, j in chosen])


@settings(max_examples=150, deadline=None)
@given(posets())
def test_birkhoff_round_trip(P):
    L = ideal_lattice(P)
    Q = join_irreducibles(L)
    assert order_isomorphism(Q.below, P.below) is not None
    assert lattices_isomorphic(ideal_lattice(Q), L)


@settings(max_examples=150, deadline=None)
@given(posets())
def test_urc_implications(P):
    L = ideal_lattice(P)
    assert is_distributive(L)[0]
    if is_urc(L)[0]:
        assert is_conditionally_urc(L)[0]


@settings(max_examples=150, deadline=None)
@given(posets())
def test_neighbors_lemma(P):
    L = ideal_lattice(P)
    lower, upper, _ = neighbor_bounds(L)
    curc = is_conditionally_urc(L)[0]
    assert curc == (lower <= 2) == (upper <= 2)


@settings(max_examples=150, deadline=None)
@given(posets())
def test_dilworth_two_chains(P):
    ok = width_le_two(P)[0]
    cover = two_chain_cover(P)
    assert ok == (cover is not None) == (canonical_two_chain_cover(P) is not None)
    if cover is not None:
        assert is_chain_cover(P, cover)
        E = grid_embedding(P, canonical_two_chain_cover(P))
        assert is_full_sublattice(E)


@settings(max_examples=60, deadline=None)
@given(posets(max_n=5))
def test_binomial_closure(P):
    L = ideal_lattice(P)
    H = hibi_ring(L)
    images = H.images()
    order = rank_lex(H)
    rels = hibi_relations(L, order, H).relations
    for i, f in enumerate(rels[:12]):
        for g in rels[i + 1 : 12]:
            s = spoly(f, g, order)
            if s is None:
                continue
            assert multidegree(s.lead, images) == multidegree(s.trail, images)
            r = normal_form(s, rels, order)
            if r is not None:
                assert multidegree(r.lead, images) == multidegree(r.trail, images)
                assert order.key(r.lead) > order.key(r.trail)

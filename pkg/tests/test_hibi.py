from itertools import combinations_with_replacement, product

import pytest

from hibi_lattices.binomial import multidegree, same_binomial_set
from hibi_lattices.harness import enumerate_posets
from hibi_lattices.hibi import (
    all_hibi_indispensable,
    defense_condition_c,
    defense_gb_check,
    hibi_kernel_gb,
    hibi_relations,
    hibi_relations_form_gb,
    hibi_ring,
    is_indispensable,
    quad_fiber,
    rank_compatible_tiebreaks,
    rank_lex_gb,
    rees_gb_check,
    rees_presentation,
)
from hibi_lattices.lattice import ideal_lattice, n5, semilattice_from_downsets
from hibi_lattices.poset import antichain, chain

from conftest import element, ladder_poset


def test_relation_counts(b3):
    assert len(hibi_relations(ideal_lattice(antichain(2))).relations) == 1
    assert len(hibi_relations(b3).relations) == 9
    assert hibi_relations(ideal_lattice(chain(4))).relations == ()


def test_relations_are_in_the_kernel():
    for n in range(5):
        for P in enumerate_posets(n):
            L = ideal_lattice(P)
            H = hibi_ring(L)
            images = H.images()
            for f in hibi_relations(L, H=H).relations:
                assert multidegree(f.lead, images) == multidegree(f.trail, images)


def test_equal_multidegree_iff_same_meet_and_join():
    for n in range(4):
        for P in enumerate_posets(n):
            L = ideal_lattice(P)
            H = hibi_ring(L)
            images = H.images()
            pairs = list(combinations_with_replacement(range(L.size), 2))
            md = {p: multidegree(H.zz(*p), images) for p in pairs}
            for (a, b), (c, d) in product(pairs, repeat=2):
                same = L.meet[a][b] == L.meet[c][d] and L.join[a][b] == L.join[c][d]
                assert (md[a, b] == md[c, d]) == same


def test_injective_on_single_variables(b3):
    H = hibi_ring(b3)
    images = H.images()
    assert len({images[H.z[a]] for a in range(b3.size)}) == b3.size


def test_boolean_cube_top_fiber(b3):
    F = quad_fiber(b3, b3.bottom, b3.top)
    assert len(F.monomials) == 4
    assert len(quad_fiber(b3, b3.bottom, b3.top).pairs) == 4
    D = ideal_lattice(antichain(2))
    assert len(quad_fiber(D, 1, 2).monomials) == 2
    C = ideal_lattice(chain(3))
    assert len(quad_fiber(C, 1, 2).monomials) == 1


def test_indispensability_examples(b3, b3_poset, bowtie_ladder_poset):
    H = hibi_ring(b3)
    a, g = element(b3, b3_poset, "p1"), element(b3, b3_poset, "p2", "p3")
    rel = next(f for f in hibi_relations(b3, H=H).relations if H.zz(a, g) in f.monomials())
    assert not is_indispensable(b3, rel, H)
    ok, witness = all_hibi_indispensable(b3)
    assert not ok
    assert H.zz(b3.bottom, b3.top) in witness.monomials()
    D = ideal_lattice(antichain(2))
    assert all(is_indispensable(D, f) for f in hibi_relations(D).relations)
    L = ideal_lattice(bowtie_ladder_poset)
    assert all_hibi_indispensable(L) == (True, None)
    assert all_hibi_indispensable(ideal_lattice(chain(3))) == (True, None)


def test_hibi_relations_gb_under_revlex(b3):
    assert hibi_relations_form_gb(b3)[0]
    ok, remainder = hibi_relations_form_gb(n5())
    assert not ok and remainder is not None


def test_rank_lex_examples(grid_minus_corner_poset, bowtie_ladder_poset):
    assert defense_gb_check(ideal_lattice(ladder_poset(2, 2))) == (True, None)
    assert defense_gb_check(ideal_lattice(grid_minus_corner_poset)) == (True, None)
    L = ideal_lattice(bowtie_ladder_poset)
    ok, offending = defense_gb_check(L)
    assert not ok
    hibi = {f.monomials() for f in hibi_relations(L).relations}
    assert offending.monomials() not in hibi


def test_rank_lex_truncation_matches_full_basis(bowtie_ladder_poset):
    from hibi_lattices.binomial import buchberger
    from hibi_lattices.hibi import rank_lex

    for P in (bowtie_ladder_poset, antichain(3), ladder_poset(2, 2)):
        L = ideal_lattice(P)
        res = rank_lex_gb(L)
        H = hibi_ring(L)
        order = rank_lex(H)
        full = buchberger(hibi_relations(L, order, H).relations, order)
        hibi = hibi_relations(L, order, H).relations
        assert res.equals_hibi == same_binomial_set(full, hibi)
        assert res.quadratic_gb == all(g.degree <= 2 for g in full)


def test_tiebreaks_are_rank_compatible(b3):
    tbs = list(rank_compatible_tiebreaks(ideal_lattice(antichain(2))))
    assert len(tbs) == 2
    for tb in tbs:
        assert [ideal_lattice(antichain(2)).rank[a] for a in tb] == sorted(
            ideal_lattice(antichain(2)).rank[a] for a in tb
        )


def test_defense_condition_c(bowtie_ladder_poset, grid_minus_corner_poset):
    L = ideal_lattice(bowtie_ladder_poset)
    P = bowtie_ladder_poset
    ok, triple = defense_condition_c(L)
    assert not ok
    assert triple == (L.bottom, element(L, P, "c1", "d1"), L.top)
    assert defense_condition_c(ideal_lattice(grid_minus_corner_poset)) == (True, None)
    assert defense_condition_c(ideal_lattice(chain(3))) == (True, None)


def test_rees_presentation_counts():
    pres = rees_presentation(ideal_lattice(chain(1)))
    assert (len(pres.hibi), len(pres.special_linear)) == (0, 1)
    f = pres.special_linear[0]
    ring = pres.ring.ring
    assert {ring.format(f.lead), ring.format(f.trail)} == {"x:p1*z:0", "y:p1*z:1"}
    pres = rees_presentation(ideal_lattice(antichain(2)))
    assert (len(pres.hibi), len(pres.special_linear)) == (1, 4)
    S = semilattice_from_downsets(antichain(2), [0b00, 0b01, 0b10])
    pres = rees_presentation(S)
    assert (len(pres.hibi), len(pres.special_linear)) == (0, 2)


def test_rees_checks(bowtie, diamond_poset):
    assert rees_gb_check(ideal_lattice(diamond_poset)).ok
    rc = rees_gb_check(ideal_lattice(bowtie))
    assert not rc.ok and rc.offending is not None
    S = semilattice_from_downsets(diamond_poset, [0b00, 0b01, 0b10])
    rc = rees_gb_check(S)
    assert not rc.ok
    H = rc.presentation.ring
    lead = rc.offending.lead
    assert sum(lead[i] for i in H.x) == 1 and sum(lead[i] for i in H.y) == 1
    assert sum(lead[i] for i in H.z) == 1


def test_v_poset_rees_basis_is_hibi_plus_special_linear(v_poset):
    """The ideal lattice of the V is not URC, yet its basis has the Hibi shape."""
    from hibi_lattices.lattice import is_urc

    L = ideal_lattice(v_poset)
    rc = rees_gb_check(L)
    assert rc.ok and rc.generates_kernel
    assert not is_urc(L)[0]


@pytest.mark.parametrize("P", [antichain(2), antichain(3), chain(3), ladder_poset(2, 1)])
def test_kernel_oracle(P):
    G, K, _ = hibi_kernel_gb(ideal_lattice(P))
    assert same_binomial_set(G, K)

from itertools import combinations, product

import pytest

from hibi_lattices.errors import CycleDetected, UnknownLabel
from hibi_lattices.harness import enumerate_posets
from hibi_lattices.poset import (
    all_two_chain_covers,
    antichain,
    build_poset,
    canonical_two_chain_cover,
    chain,
    disjoint_chains,
    down_set_masks,
    is_chain_cover,
    is_chain_or_two_incomparable_chains,
    is_down_set,
    minimal_generators,
    minimum_chain_partition,
    poset_from_json,
    two_chain_cover,
    two_chain_cover_inductive,
    two_chain_cover_matching,
    width_le_two,
)


def closure_oracle(n, pairs):
    """Reflexive-transitive closure by repeated squaring of a boolean matrix."""
    R = [[i == j for j in range(n)] for i in range(n)]
    for i, j in pairs:
        R[i][j] = True
    for k, i, j in product(range(n), repeat=3):
        R[i][j] = R[i][j] or (R[i][k] and R[k][j])
    return R


def downsets_oracle(P):
    out = []
    for mask in range(1 << P.n):
        if all(not (mask >> j & 1) or all(mask >> i & 1 for i in range(P.n) if P.leq(i, j)) for j in range(P.n)):
            out.append(mask)
    return sorted(out, key=lambda m: (bin(m).count("1"), m))


def width_oracle(P):
    w = 0
    for k in range(1, P.n + 1):
        for S in combinations(range(P.n), k):
            if all(not P.comparable(i, j) for i, j in combinations(S, 2)):
                w = k
    return w


def test_antichain_and_chain_orders():
    A = build_poset(["p1", "p2", "p3"], [])
    assert not any(A.lt(i, j) for i in range(3) for j in range(3))
    C = build_poset(["p1", "p2"], [("p1", "p2")])
    assert C.lt(0, 1) and not C.lt(1, 0)


def test_bowtie_closure_matches_reachability(bowtie):
    pairs = list(bowtie.covers)
    R = closure_oracle(4, pairs)
    assert all(bowtie.leq(i, j) == R[i][j] for i in range(4) for j in range(4))
    assert width_oracle(bowtie) == 2


def test_redundant_cover_is_dropped():
    P = build_poset(list("abc"), [("a", "b"), ("b", "c"), ("a", "c")])
    assert ("a", "c") not in P.covers
    assert ("a", "c") in P.dropped_covers
    assert P.leq(0, 2)


def test_cycles_and_unknown_labels_raise():
    with pytest.raises(CycleDetected):
        build_poset(list("ab"), [("a", "b"), ("b", "a")])
    with pytest.raises(UnknownLabel):
        build_poset(["a"], [("a", "z")])


def test_json_round_trip(bowtie):
    assert poset_from_json(bowtie.to_json()).below == bowtie.below


@pytest.mark.parametrize(
    "P, count", [(antichain(3), 8), (chain(3), 4)]
)
def test_downset_counts(P, count):
    assert len(down_set_masks(P)) == count


def test_bowtie_downsets(bowtie):
    names = {"".join(bowtie.labels(m)) for m in down_set_masks(bowtie)}
    assert names == {"", "a", "b", "ab", "abc", "abd", "abcd"}


def test_downsets_match_subset_filter_on_corpus():
    for n in range(5):
        for P in enumerate_posets(n):
            assert down_set_masks(P) == downsets_oracle(P)
            assert all(is_down_set(P, m) for m in down_set_masks(P))


def test_minimal_generators(bowtie, chain3):
    assert minimal_generators(bowtie, bowtie.mask("abc")) == [bowtie.index("c")]
    for k in range(1, 4):
        assert minimal_generators(chain3, (1 << k) - 1) == [k - 1]
    A = antichain(3)
    assert minimal_generators(A, A.mask(["p1", "p2"])) == [0, 1]


def test_width_le_two(bowtie, chain3):
    ok, triple = width_le_two(antichain(3))
    assert not ok and sorted(triple) == [0, 1, 2]
    assert width_le_two(bowtie) == (True, None)
    assert width_le_two(chain3) == (True, None)


def test_two_chain_covers_on_examples(bowtie, chain3):
    cover = two_chain_cover(bowtie)
    assert is_chain_cover(bowtie, cover)
    assert sorted(map(len, (cover.chain_c, cover.chain_d))) == [2, 2]
    c = two_chain_cover(chain3)
    assert is_chain_cover(chain3, c)
    assert two_chain_cover(antichain(3)) is None


def test_three_cover_routes_agree_on_corpus():
    for n in range(6):
        for P in enumerate_posets(n):
            w = width_oracle(P) if n <= 4 else None
            ind, mat, can = two_chain_cover_inductive(P), two_chain_cover_matching(P), canonical_two_chain_cover(P)
            exists = ind is not None
            assert (mat is not None) == exists == (can is not None) == width_le_two(P)[0]
            if w is not None:
                assert exists == (w <= 2)
                assert len(minimum_chain_partition(P)) == w
            for cov in (ind, mat, can):
                if cov is not None:
                    assert is_chain_cover(P, cov)


def test_all_covers_contains_canonical(bowtie):
    covers = all_two_chain_covers(bowtie)
    assert canonical_two_chain_cover(bowtie) in covers
    assert len(covers) >= 2


def test_chain_or_two_incomparable_chains(bowtie):
    assert is_chain_or_two_incomparable_chains(chain(4))
    assert is_chain_or_two_incomparable_chains(disjoint_chains(2, 3))
    assert not is_chain_or_two_incomparable_chains(bowtie)
    assert not is_chain_or_two_incomparable_chains(antichain(3))

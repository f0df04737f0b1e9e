from __future__ import annotations

import pytest

from hibi_lattices.lattice import ideal_lattice
from hibi_lattices.poset import antichain, build_poset, chain


def ladder_poset(m: int, n: int, extra=()):
    """Chains c1<...<cm and d1<...<dn plus the extra relations ``extra``."""
    cs = [f"c{i + 1}" for i in range(m)]
    ds = [f"d{i + 1}" for i in range(n)]
    covers = list(zip(cs, cs[1:])) + list(zip(ds, ds[1:])) + list(extra)
    return build_poset(cs + ds, covers)


def element(L, P, *labels) -> int:
    """Lattice id of the downset generated by ``labels``."""
    from hibi_lattices.poset import down_closure

    return L.downsets.index(down_closure(P, P.mask(labels)))


@pytest.fixture
def bowtie():
    return build_poset(list("abcd"), [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])


@pytest.fixture
def b3_poset():
    return antichain(3)


@pytest.fixture
def b3(b3_poset):
    return ideal_lattice(b3_poset)


@pytest.fixture
def diamond_poset():
    return antichain(2)


@pytest.fixture
def grid_minus_corner_poset():
    # [2]_0 x [2]_0 without (0,2): d2 needs c1
    return ladder_poset(2, 2, [("c1", "d2")])


@pytest.fixture
def bowtie_ladder_poset():
    # [2]_0 x [2]_0 without (0,2) and (2,0)
    return ladder_poset(2, 2, [("c1", "d2"), ("d1", "c2")])


@pytest.fixture
def v_poset():
    # p2 below both p1 and p3
    return build_poset(["p1", "p2", "p3"], [("p2", "p1"), ("p2", "p3")])


@pytest.fixture
def chain3():
    return chain(3)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1])):
        terminalreporter.write_line(line)

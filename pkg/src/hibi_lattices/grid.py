"""Embeddings of ideal lattices into grids [m]_0 x [n]_0 and corner taxonomy."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import InternalDisagreement, NotACover
from .lattice import Lattice, grid_lattice, ideal_lattice, lattices_isomorphic
from .poset import ChainCover, Poset, is_chain_cover, popcount

UPPER = "upper"
LOWER = "lower"
CRITICAL = "critical"


@dataclass(frozen=True)
class GridEmbedding:
    """Image of a lattice in [m]_0 x [n]_0; ``image[a]`` is the point of id ``a``."""

    m: int
    n: int
    image: tuple[tuple[int, int], ...]
    cover: ChainCover | None = None
    lattice: Lattice | None = None

    @classmethod
    def from_points(cls, m: int, n: int, points) -> "GridEmbedding":
        return cls(m, n, tuple(sorted(map(tuple, points))))

    @property
    def points(self) -> frozenset:
        return frozenset(self.image)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "points": [list(p) for p in sorted(self.points)],
            "corners": [{"at": list(c.at), "kind": c.kind} for c in classify_corners(self)],
        }


@dataclass(frozen=True, order=True)
class Corner:
    at: tuple[int, int]
    kind: str


def grid_embedding(P: Poset, cover: ChainCover, L: Lattice | None = None) -> GridEmbedding:
    """Send each downset ``a`` to (|a ∩ C|, |a ∩ D|) with m = |C|, n = |D|.

    Injectivity and preservation of meet and join (componentwise min and
    max) are verified before returning.
    """
    if not is_chain_cover(P, cover):
        raise NotACover(f"{cover} is not a cover of {P!r} by two disjoint chains")
    L = L if L is not None else ideal_lattice(P)
    c, d = cover.mask_c, cover.mask_d
    image = tuple((popcount(a & c), popcount(a & d)) for a in L.downsets)
    if len(set(image)) != len(image):
        raise InternalDisagreement("grid embedding is not injective")
    for a, b in combinations(range(L.size), 2):
        (i, j), (k, l) = image[a], image[b]
        if image[L.meet[a][b]] != (min(i, k), min(j, l)) or image[L.join[a][b]] != (max(i, k), max(j, l)):
            raise InternalDisagreement("grid embedding does not preserve meet and join")
    return GridEmbedding(len(cover.chain_c), len(cover.chain_d), image, cover, L)


def is_full_sublattice(E: GridEmbedding) -> bool:
    """Closed under componentwise min/max and containing a saturated chain
    from (0,0) to (m,n) of length m + n."""
    pts = E.points
    for (i, j), (k, l) in combinations(pts, 2):
        if (min(i, k), min(j, l)) not in pts or (max(i, k), max(j, l)) not in pts:
            return False
    if (0, 0) not in pts:
        return False
    reach = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        i, j = frontier.pop()
        for q in ((i + 1, j), (i, j + 1)):
            if q in pts and q not in reach:
                reach.add(q)
                frontier.append(q)
    return (E.m, E.n) in reach


def classify_corners(E: GridEmbedding) -> list[Corner]:
    pts = E.points
    out = []
    for i, j in sorted(pts):
        if not all(q in pts for q in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1))):
            continue
        nw = (i - 1, j + 1) in pts
        se = (i + 1, j - 1) in pts
        if not nw and se:
            out.append(Corner((i, j), UPPER))
        elif nw and not se:
            out.append(Corner((i, j), LOWER))
        elif not nw and not se:
            out.append(Corner((i, j), CRITICAL))
    return out


def is_chain_ladder(E: GridEmbedding) -> tuple[bool, tuple[Corner, Corner] | None]:
    """Upper and lower corners pairwise comparable with distinct coordinates.

    Every classified corner takes part in the distinct-coordinate test.
    """
    corners = classify_corners(E)
    ul = [c for c in corners if c.kind in (UPPER, LOWER)]
    for x, y in combinations(ul, 2):
        (i, j), (k, l) = x.at, y.at
        if (i - k) * (j - l) < 0:
            return False, (x, y)
    for x, y in combinations(corners, 2):
        if x.at[0] == y.at[0] or x.at[1] == y.at[1]:
            return False, (x, y)
    return True, None


def is_grid_iso(L: Lattice) -> tuple[int, int] | None:
    """Extents (m, n) with m <= n if ``L`` is isomorphic to [m]_0 x [n]_0."""
    size = L.size
    height = L.rank[L.top]
    for m in range(0, height // 2 + 1):
        n = height - m
        if (m + 1) * (n + 1) == size and lattices_isomorphic(L, grid_lattice(m, n)):
            return m, n
    return None


def find_grid_embedding(L: Lattice) -> GridEmbedding | None:
    """Search for a full-sublattice embedding of ``L`` into a grid directly.

    In a full sublattice every cover is a unit step, so the bottom goes to
    (0,0) and each element sits one step above each of its lower covers;
    only join-irreducibles leave a choice. Leaves are checked for meet/join
    preservation. No chain cover of the underlying poset is consulted.
    """
    order = sorted(range(L.size), key=lambda a: (L.rank[a], a))
    phi: dict[int, tuple[int, int]] = {order[0]: (0, 0)}
    used = {(0, 0)}

    def is_hom() -> bool:
        for a, b in combinations(range(L.size), 2):
            (i, j), (k, l) = phi[a], phi[b]
            if phi[L.meet[a][b]] != (min(i, k), min(j, l)) or phi[L.join[a][b]] != (max(i, k), max(j, l)):
                return False
        return True

    def extend(k: int) -> bool:
        if k == len(order):
            return is_hom()
        a = order[k]
        lower = L.lower[a]
        i0, j0 = phi[lower[0]]
        for cand in ((i0 + 1, j0), (i0, j0 + 1)):
            if cand in used:
                continue
            if all((cand[0] - phi[b][0], cand[1] - phi[b][1]) in ((1, 0), (0, 1)) for b in lower):
                phi[a] = cand
                used.add(cand)
                if extend(k + 1):
                    return True
                used.discard(cand)
                del phi[a]
        return False

    if not extend(1):
        return None
    m, n = phi[L.top]
    E = GridEmbedding(m, n, tuple(phi[a] for a in range(L.size)), None, L)
    return E if is_full_sublattice(E) else None

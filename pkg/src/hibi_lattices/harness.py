"""Exhaustive verification of the classification theorems on small posets.

For every poset the harness computes each theorem's conditions by separate
routines, never deriving one condition from another, and records any
poset on which the conditions of one theorem disagree.
"""

from __future__ import annotations

import json
import logging
import time
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field
from multiprocessing import Pool
from typing import Callable, Iterator

from .binomial import DEFAULT_DEGREE_CAP, buchberger, same_binomial_set
from .errors import DefectSignal, HibiError, MultipleComplements, SizeExceeded
from .grid import (
    CRITICAL,
    LOWER,
    UPPER,
    classify_corners,
    find_grid_embedding,
    grid_embedding,
    is_chain_ladder,
    is_full_sublattice,
    is_grid_iso,
)
from .hibi import (
    all_hibi_indispensable,
    defense_condition_c,
    hibi_kernel_gb,
    hibi_relations,
    hibi_relations_form_gb,
    hibi_ring,
    rank_compatible_tiebreaks,
    rank_lex,
    rank_lex_gb,
    rees_gb_check,
)
from .lattice import (
    Lattice,
    _lattice_from_below,
    canonical_form,
    complement_in_interval,
    ideal_lattice,
    is_conditionally_urc,
    is_distributive,
    is_urc,
    join_irreducibles,
    lattices_isomorphic,
    neighbor_bounds,
    order_isomorphism,
)
from .poset import (
    Poset,
    all_two_chain_covers,
    bits_of,
    canonical_two_chain_cover,
    down_set_masks,
    is_chain_or_two_incomparable_chains,
    minimal_generators,
    poset_from_below,
    two_chain_cover,
    width_le_two,
)

log = logging.getLogger(__name__)

MAX_ENUMERATION_SIZE = 7
THEOREMS = ("hibi_gb", "hot", "urc", "defense", "rees")


# -- enumeration ------------------------------------------------------------------------


def _labeled_below_masks(n: int) -> Iterator[list[int]]:
    """Every labeled partial order on ``range(n)``, as below-masks.

    Each order on ``n`` elements restricts to a unique order on the first
    ``n - 1``; the last element is added with a downset ``D`` below it and an
    upset ``U`` above it such that every element of ``D`` lies below every
    element of ``U``.
    """
    if n == 0:
        yield []
        return
    new = 1 << (n - 1)
    for below in _labeled_below_masks(n - 1):
        P = poset_from_below([str(i) for i in range(n - 1)], below)
        downs = down_set_masks(P)
        full = new - 1
        for D in downs:
            need = full
            for d in bits_of(D):
                need &= P.above[d]
            for Dc in downs:
                U = full & ~Dc
                if U & D or U & ~need:
                    continue
                yield [b | new if U >> i & 1 else b for i, b in enumerate(below)] + [D | new]


def enumerate_posets(n: int, iso: bool = False) -> Iterator[Poset]:
    """All labeled posets on ``p1..pn``; with ``iso`` one per isomorphism class."""
    if n > MAX_ENUMERATION_SIZE:
        raise SizeExceeded(f"poset enumeration is capped at {MAX_ENUMERATION_SIZE} elements")
    labels = [f"p{i + 1}" for i in range(n)]
    if not iso:
        for below in _labeled_below_masks(n):
            yield poset_from_below(labels, below)
        return
    for below in _unlabeled_below_masks(n):
        yield poset_from_below(labels, below)


def _unlabeled_below_masks(n: int) -> list[list[int]]:
    if n == 0:
        return [[]]
    seen = {}
    for below in _unlabeled_below_masks(n - 1):
        P = poset_from_below([str(i) for i in range(n - 1)], below)
        downs = down_set_masks(P)
        new, full = 1 << (n - 1), (1 << (n - 1)) - 1
        for D in downs:
            need = full
            for d in bits_of(D):
                need &= P.above[d]
            for Dc in downs:
                U = full & ~Dc
                if U & D or U & ~need:
                    continue
                cand = [b | new if U >> i & 1 else b for i, b in enumerate(below)] + [D | new]
                seen.setdefault(canonical_form(cand), cand)
    return [seen[k] for k in sorted(seen)]


def enumerate_lattices(size: int) -> list[Lattice]:
    """One lattice per isomorphism class with exactly ``size`` elements."""
    if size == 1:
        return [_lattice_from_below([1])]
    out = []
    for inner in _unlabeled_below_masks(size - 2):
        k = len(inner)
        bottom_bit = 1
        below = [bottom_bit] + [(m << 1) | bottom_bit for m in inner] + [(1 << (k + 2)) - 1]
        try:
            out.append(_lattice_from_below(below))
        except HibiError:
            continue
    return out


# -- campaign configuration ------------------------------------------------------------


@dataclass
class Campaign:
    max_poset_size: int = 4
    min_poset_size: int = 1
    tiebreak_sweep: bool = False
    sweep_max_lattice: int = 7
    degree_cap: int = DEFAULT_DEGREE_CAP
    jobs: int = 1
    theorems: tuple[str, ...] = THEOREMS
    rees_max_poset_size: int = 4
    kernel_max_poset_size: int = 4
    lattice_max_size: int = 8
    iso: bool = False
    mutation: str | None = None


# -- mutations: deliberately wrong classifiers for harness self-tests -----------------


def _mut_hot_b(L, P):
    return neighbor_bounds(L)[0] <= 3


def _mut_defense_c(L, P):
    return is_conditionally_urc(L)[0]


def _mut_urc_c(L, P):
    return width_le_two(P)[0]


def _mut_hibi_gb_b(L, P):
    return width_le_two(P)[0]


MUTATIONS: dict[str, Callable] = {
    "hot.b": _mut_hot_b,
    "defense.c": _mut_defense_c,
    "urc.c": _mut_urc_c,
    "hibi_gb.b": _mut_hibi_gb_b,
}


# -- per-poset checks -----------------------------------------------------------------


def _element_ref(L: Lattice, a: int) -> dict:
    ref = {"id": a}
    if L.downsets is not None:
        ref["downset"] = L.downset_bits(a)
    return ref


def _binomial_ref(f, ring) -> str | None:
    return f.format(ring) if f is not None else None


def _hot(P: Poset, L: Lattice, H) -> tuple[dict, dict, list]:
    problems = []
    ind, witness = all_hibi_indispensable(L, H)
    curc, iv = is_conditionally_urc(L)
    downs = L.downsets
    gens = [minimal_generators(P, d) for d in downs]
    c = all(len(g) <= 2 for g in gens)
    cover = two_chain_cover(P)
    E = find_grid_embedding(L)
    cond = {"a": ind, "b": curc, "c": c, "d": cover is not None, "e": E is not None}
    wit = {
        "a": _binomial_ref(witness, H.ring),
        "b": [_element_ref(L, x) for x in iv] if iv else None,
        "c": next((P.labels(sum(1 << i for i in g)) for g in gens if len(g) > 2), None),
        "d": cover.labels(P) if cover else None,
        "e": E.to_json() if E else None,
    }
    w2, triple = width_le_two(P)
    if w2 != c:
        problems.append({"check": "width_le_two vs generators", "detail": [w2, c]})
    return cond, wit, problems


def _urc(P: Poset, L: Lattice) -> tuple[dict, dict]:
    u, iv = is_urc(L)
    shape = is_chain_or_two_incomparable_chains(P)
    grid = is_grid_iso(L)
    return {"a": u, "b": shape, "c": grid is not None}, {
        "a": [_element_ref(L, x) for x in iv] if iv else None,
        "c": list(grid) if grid else None,
    }


def _defense(P: Poset, L: Lattice, H, cfg: Campaign, hot_a: bool) -> tuple[dict, dict, list]:
    flags = []
    gb = rank_lex_gb(L, degree_cap=cfg.degree_cap)
    a = gb.equals_hibi
    # (b) indispensable and the full reduced basis quadratic, by running Buchberger to completion
    if hot_a:
        order = rank_lex(H)
        full = buchberger(hibi_relations(L, order, H).relations, order, degree_cap=cfg.degree_cap)
        b = max((g.degree for g in full), default=2) <= 2
        if b != gb.quadratic_gb:
            raise DefectSignal("truncated and full rank-lex bases disagree on quadratic generation")
    else:
        b = False
    c, cwit = defense_condition_c(L)
    cover = canonical_two_chain_cover(P)
    d, dwit = False, None
    if cover is not None:
        E = grid_embedding(P, cover, L)
        if is_full_sublattice(E):
            ladder, pair = is_chain_ladder(E)
            critical = [k for k in classify_corners(E) if k.kind == CRITICAL]
            d = ladder and not critical
            dwit = {"embedding": E.to_json(), "ladder_witness": [asdict(k) for k in pair] if pair else None}
        verdicts = set()
        kinds = set()
        for cv in all_two_chain_covers(P):
            Ecv = grid_embedding(P, cv, L)
            corners = classify_corners(Ecv)
            verdicts.add(is_chain_ladder(Ecv)[0] and not any(k.kind == CRITICAL for k in corners))
            kc = Counter(k.kind for k in corners)
            swapped = (kc[CRITICAL], kc[LOWER], kc[UPPER])
            kinds.add(min((kc[CRITICAL], kc[UPPER], kc[LOWER]), swapped))
        if len(verdicts) > 1 or len(kinds) > 1:
            flags.append({"flag": "corner classification depends on the chain cover", "verdicts": sorted(verdicts)})
    cond = {"a": a, "b": b, "c": c, "d": d}
    wit = {
        "a": _binomial_ref(gb.offending, H.ring),
        "c": [_element_ref(L, x) for x in cwit] if isinstance(cwit, tuple) else cwit,
        "d": dwit,
    }
    if cfg.tiebreak_sweep and L.size <= cfg.sweep_max_lattice:
        per = {}
        for tb in rank_compatible_tiebreaks(L):
            per[",".join(map(str, tb))] = rank_lex_gb(L, tb, cfg.degree_cap, find_offending=False).equals_hibi
        if len(set(per.values())) > 1:
            flags.append({"flag": "rank-lex tie-break changes (a)", "per_tiebreak": per})
        wit["tiebreaks_checked"] = len(per)
    return cond, wit, flags


def _structural(P: Poset, L: Lattice, conds: dict, cfg: Campaign) -> list:
    """Lemmas and invariants that are implications rather than equivalences."""
    problems = []
    Q = join_irreducibles(L)
    if order_isomorphism(Q.below, P.below) is None or not lattices_isomorphic(ideal_lattice(Q), L):
        problems.append({"check": "birkhoff round trip"})
    urc, curc = is_urc(L)[0], is_conditionally_urc(L)[0]
    dist = is_distributive(L)[0]
    if urc and not dist:
        problems.append({"check": "URC implies distributive"})
    if urc and not curc:
        problems.append({"check": "URC implies conditionally URC"})
    lo, up, _ = neighbor_bounds(L)
    if len({curc, lo <= 2, up <= 2}) > 1:
        problems.append({"check": "neighbors lemma", "detail": [curc, lo, up]})
    try:
        for hi in range(L.size):
            for lo_ in bits_of(L.below[hi]):
                for c in bits_of(L.interval_mask(lo_, hi)):
                    complement_in_interval(L, lo_, hi, c)
    except MultipleComplements as exc:
        problems.append({"check": "complement uniqueness", "detail": exc.candidates})
    w2 = width_le_two(P)[0]
    if w2 != (canonical_two_chain_cover(P) is not None):
        problems.append({"check": "dilworth colouring route"})
    if w2:
        E = grid_embedding(P, canonical_two_chain_cover(P), L)
        if not is_full_sublattice(E):
            problems.append({"check": "constructive embedding is full"})
    if P.n <= cfg.kernel_max_poset_size:
        G, K, _ = hibi_kernel_gb(L, degree_cap=cfg.degree_cap)
        if not same_binomial_set(G, K):
            problems.append({"check": "hibi ideal equals toric kernel"})
    return problems


def check_equivalences(P: Poset, cfg: Campaign | None = None) -> dict:
    """Condition vectors (and witnesses) of every theorem for one poset."""
    cfg = cfg or Campaign()
    L = ideal_lattice(P)
    H = hibi_ring(L)
    theorems, witnesses, problems, flags = {}, {}, [], []
    try:
        if "hibi_gb" in cfg.theorems:
            gb_ok, rem = hibi_relations_form_gb(L)
            theorems["hibi_gb"] = {"a": is_distributive(L)[0], "b": gb_ok}
            witnesses["hibi_gb"] = {"b": _binomial_ref(rem, H.ring)}
        hot_a = None
        if "hot" in cfg.theorems or "defense" in cfg.theorems:
            cond, wit, probs = _hot(P, L, H)
            hot_a = cond["a"]
            problems += probs
            if "hot" in cfg.theorems:
                theorems["hot"], witnesses["hot"] = cond, wit
        if "urc" in cfg.theorems:
            theorems["urc"], witnesses["urc"] = _urc(P, L)
        if "defense" in cfg.theorems:
            cond, wit, fl = _defense(P, L, H, cfg, hot_a)
            theorems["defense"], witnesses["defense"] = cond, wit
            flags += fl
        if "rees" in cfg.theorems and P.n <= cfg.rees_max_poset_size:
            rc = rees_gb_check(L, degree_cap=cfg.degree_cap)
            theorems["rees"] = {"a": is_urc(L)[0], "b": rc.ok}
            witnesses["rees"] = {"b": _binomial_ref(rc.offending, rc.presentation.ring.ring)}
        if cfg.mutation:
            name, key = cfg.mutation.split(".")
            if name in theorems:
                theorems[name][key] = bool(MUTATIONS[cfg.mutation](L, P))
        problems += _structural(P, L, theorems, cfg)
    except DefectSignal as exc:
        problems.append({"check": "defect signal", "detail": f"{type(exc).__name__}: {exc}"})
    counterexamples = [
        {"theorem": name, "conditions": cond} for name, cond in theorems.items() if len(set(cond.values())) > 1
    ]
    return {
        "poset": P.to_json(),
        "lattice_size": L.size,
        "theorems": theorems,
        "witnesses": witnesses,
        "counterexamples": counterexamples,
        "problems": problems,
        "flags": flags,
    }


def check_lattice(L: Lattice) -> dict:
    """Distributivity against Hibi relations forming a rank-revlex basis."""
    dist, wit = is_distributive(L)
    gb_ok, rem = hibi_relations_form_gb(L)
    H = hibi_ring(L)
    return {
        "lattice": L.to_json(),
        "theorems": {"hibi_gb": {"a": dist, "b": gb_ok}},
        "witnesses": {"hibi_gb": {"a": wit, "b": _binomial_ref(rem, H.ring)}},
        "counterexamples": [] if dist == gb_ok else [{"theorem": "hibi_gb", "conditions": {"a": dist, "b": gb_ok}}],
    }


# -- campaigns ----------------------------------------------------------------------------


@dataclass
class EquivalenceReport:
    config: dict
    records: list[dict]
    lattice_records: list[dict]
    counterexamples: list[dict]
    problems: list[dict]
    flags: list[dict]
    counts: dict
    timing: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.counterexamples and not self.problems

    def to_json(self, include_records: bool = False, include_timing: bool = True) -> dict:
        out = {
            "config": self.config,
            "counts": self.counts,
            "counterexamples": self.counterexamples,
            "problems": self.problems,
            "flags": self.flags,
        }
        if include_records:
            out["records"] = self.records
            out["lattice_records"] = self.lattice_records
        if include_timing:
            out["timing"] = self.timing
        return out

    def summary(self) -> str:
        lines = [f"{'n':>3} {'posets':>8} {'counterexamples':>16}"]
        for n, c in sorted(self.counts["posets_by_size"].items(), key=lambda kv: int(kv[0])):
            bad = self.counts["counterexamples_by_size"].get(n, 0)
            lines.append(f"{n:>3} {c:>8} {bad:>16}")
        verdicts = self.counts["theorem_holds"]
        for name in THEOREMS:
            if name in verdicts:
                lines.append(f"{name:<10} conditions agree on {verdicts[name][0]}/{verdicts[name][1]} posets")
        lines.append(
            f"{len(self.counterexamples)} counterexamples / {self.counts['posets']} posets; "
            f"{len(self.problems)} oracle problems; {len(self.flags)} flags; "
            f"{self.counts['lattices']} small lattices checked"
        )
        return "\n".join(lines)


def _task(args):
    P, cfg = args
    return check_equivalences(P, cfg)


def _lattice_task(L):
    return check_lattice(L)


def run_campaign(cfg: Campaign) -> EquivalenceReport:
    started = time.perf_counter()
    posets = [P for n in range(cfg.min_poset_size, cfg.max_poset_size + 1) for P in enumerate_posets(n, cfg.iso)]
    lattices = [L for k in range(1, cfg.lattice_max_size + 1) for L in enumerate_lattices(k)]
    if cfg.jobs > 1:
        with Pool(cfg.jobs) as pool:
            records = pool.map(_task, [(P, cfg) for P in posets], chunksize=8)
            lattice_records = pool.map(_lattice_task, lattices, chunksize=8)
    else:
        records = [check_equivalences(P, cfg) for P in posets]
        lattice_records = [check_lattice(L) for L in lattices]
    counterexamples, problems, flags = [], [], []
    by_size, bad_by_size = Counter(), Counter()
    holds = defaultdict(lambda: [0, 0])
    for P, rec in zip(posets, records):
        by_size[str(P.n)] += 1
        if rec["counterexamples"] or rec["problems"]:
            bad_by_size[str(P.n)] += 1
        for ce in rec["counterexamples"]:
            counterexamples.append({"poset": rec["poset"], **ce})
        for pr in rec["problems"]:
            problems.append({"poset": rec["poset"], **pr})
        for fl in rec["flags"]:
            flags.append({"poset": rec["poset"], **fl})
        for name, cond in rec["theorems"].items():
            holds[name][1] += 1
            holds[name][0] += len(set(cond.values())) == 1
    for rec in lattice_records:
        for ce in rec["counterexamples"]:
            counterexamples.append({"lattice": rec["lattice"], **ce})
    counts = {
        "posets": len(posets),
        "posets_by_size": dict(by_size),
        "counterexamples_by_size": dict(bad_by_size),
        "theorem_holds": {k: v for k, v in holds.items()},
        "lattices": len(lattices),
        "non_distributive_lattices": sum(1 for r in lattice_records if not r["theorems"]["hibi_gb"]["a"]),
    }
    return EquivalenceReport(
        config=asdict(cfg),
        records=records,
        lattice_records=lattice_records,
        counterexamples=counterexamples,
        problems=problems,
        flags=flags,
        counts=counts,
        timing={"seconds": round(time.perf_counter() - started, 3)},
    )


def report_json(report: EquivalenceReport, **kwargs) -> str:
    return json.dumps(report.to_json(**kwargs), indent=2, sort_keys=False)

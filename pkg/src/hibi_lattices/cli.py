"""Command line interface.

Exit status:

    0   success, or every reported verdict true
    1   a classification verdict is false (classify, indispensable, rees, verify)
    2   invalid input or a computation error
    64  usage error
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .binomial import DEFAULT_DEGREE_CAP, buchberger, gb_to_json
from .errors import HibiError
from .harness import Campaign, check_equivalences, enumerate_posets, report_json, run_campaign
from .hibi import (
    all_hibi_indispensable,
    hibi_relations,
    hibi_ring,
    is_indispensable,
    quad_fiber,
    rank_lex,
    rank_revlex,
    rees_gb_check,
)
from .lattice import ideal_lattice
from .poset import down_closure, poset_from_json

EXIT_OK, EXIT_FALSE, EXIT_ERROR, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _degree_cap(args) -> int:
    if args.degree_cap is not None:
        return args.degree_cap
    env = os.environ.get("HIBI_DEGREE_CAP")
    if env is None:
        return DEFAULT_DEGREE_CAP
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"HIBI_DEGREE_CAP must be an integer, got {env!r}")


def _load(args):
    text = Path(args.poset).read_text() if args.poset else args.poset_json
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise HibiError(f"poset input is not valid JSON: {exc}") from exc
    return poset_from_json(data)


def _element(L, P, token: str) -> int:
    token = token.strip()
    if token.lstrip("-").isdigit():
        a = int(token)
        if not 0 <= a < L.size:
            raise HibiError(f"lattice id {a} out of range 0..{L.size - 1}")
        return a
    if token in ("{}", ""):
        mask = 0
    else:
        mask = down_closure(P, P.mask(token.strip("{}").split("+")))
    return L.downsets.index(mask)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_classify(args) -> int:
    P = _load(args)
    cfg = Campaign(degree_cap=_degree_cap(args))
    rec = check_equivalences(P, cfg)
    lines = [f"poset {P!r}, ideal lattice of size {rec['lattice_size']}"]
    for name, cond in rec["theorems"].items():
        flags = " ".join(f"{k}={'T' if v else 'F'}" for k, v in cond.items())
        lines.append(f"  {name:<8} {flags}")
    hot = rec["theorems"].get("hot")
    if hot is not None:
        lines.append("  hibi relations " + ("indispensable" if hot["a"] else "dispensable"))
    for ce in rec["counterexamples"]:
        lines.append(f"  conditions of {ce['theorem']} disagree")
    for pr in rec["problems"]:
        lines.append(f"  oracle problem: {pr['check']}")
    _emit(args, rec, "\n".join(lines))
    verdicts = [v for cond in rec["theorems"].values() for v in cond.values()]
    return EXIT_OK if all(verdicts) and not rec["problems"] else EXIT_FALSE


def cmd_gb(args) -> int:
    P = _load(args)
    L = ideal_lattice(P)
    H = hibi_ring(L)
    order = rank_lex(H) if args.order == "rank-lex" else rank_revlex(H)
    G = buchberger(hibi_relations(L, order, H).relations, order, degree_cap=_degree_cap(args))
    payload = {"order": args.order, "size": len(G), "basis": gb_to_json(G, H.ring)}
    _emit(args, payload, "\n".join([f"{len(G)} binomials ({args.order})"] + [g.format(H.ring) for g in G]))
    return EXIT_OK


def cmd_fiber(args) -> int:
    P = _load(args)
    L = ideal_lattice(P)
    parts = args.pair.split(",")
    if len(parts) != 2:
        raise UsageError("--pair takes two elements separated by a comma")
    a, b = (_element(L, P, t) for t in parts)
    H = hibi_ring(L)
    F = quad_fiber(L, a, b, H)
    payload = {
        "meet": L.labels[F.meet],
        "join": L.labels[F.join],
        "monomials": [H.ring.as_dict(m) for m in F.monomials],
        "pairs": [[L.labels[c], L.labels[d]] for c, d in F.pairs],
    }
    text = [f"fiber of z_{L.labels[a]} z_{L.labels[b]}: {len(F.pairs)} monomials"]
    text += [f"  {L.labels[c]} * {L.labels[d]}" for c, d in F.pairs]
    _emit(args, payload, "\n".join(text))
    return EXIT_OK


def cmd_indispensable(args) -> int:
    P = _load(args)
    L = ideal_lattice(P)
    H = hibi_ring(L)
    rels = hibi_relations(L, rank_revlex(H), H).relations
    per = [{"relation": f.format(H.ring), "indispensable": is_indispensable(L, f, H)} for f in rels]
    ok, witness = all_hibi_indispensable(L, H)
    payload = {
        "indispensable": ok,
        "witness": witness.format(H.ring) if witness else None,
        "relations": per,
    }
    text = [f"hibi relations {'indispensable' if ok else 'dispensable'}"]
    text += [f"  {'+' if r['indispensable'] else '-'} {r['relation']}" for r in per]
    _emit(args, payload, "\n".join(text))
    return EXIT_OK if ok else EXIT_FALSE


def cmd_rees(args) -> int:
    P = _load(args)
    L = ideal_lattice(P)
    rc = rees_gb_check(L, degree_cap=_degree_cap(args))
    ring = rc.presentation.ring.ring
    payload = {
        "ok": rc.ok,
        "hibi": gb_to_json(rc.presentation.hibi, ring),
        "special_linear": gb_to_json(rc.presentation.special_linear, ring),
        "kernel_gb": gb_to_json(rc.kernel_gb, ring),
        "offending": rc.offending.to_json(ring) if rc.offending else None,
    }
    text = [
        f"{len(rc.presentation.hibi)} hibi + {len(rc.presentation.special_linear)} special linear relations",
        f"reduced basis ({len(rc.kernel_gb)} elements) "
        + ("is the presentation" if rc.ok else f"has extra element {rc.offending.format(ring)}"),
    ]
    _emit(args, payload, "\n".join(text))
    return EXIT_OK if rc.ok else EXIT_FALSE


def cmd_verify(args) -> int:
    cfg = Campaign(
        max_poset_size=args.max_n,
        tiebreak_sweep=args.sweep_tiebreaks,
        degree_cap=_degree_cap(args),
        jobs=args.jobs,
        lattice_max_size=args.lattice_max,
        iso=args.iso,
    )
    report = run_campaign(cfg)
    if args.json:
        print(report_json(report, include_records=args.records))
    else:
        print(report.summary())
    return EXIT_OK if report.ok else EXIT_FALSE


def cmd_enumerate(args) -> int:
    for P in enumerate_posets(args.n, iso=args.iso):
        print(json.dumps(P.to_json()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hibi", description="Hibi rings of distributive lattices.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_poset(name, func, help):
        p = sub.add_parser(name, help=help)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--poset", help="poset JSON file")
        src.add_argument("--poset-json", help="poset as an inline JSON string")
        p.add_argument("--json", action="store_true")
        p.add_argument("--degree-cap", type=int)
        p.set_defaults(func=func)
        return p

    with_poset("classify", cmd_classify, "condition vectors of every theorem")
    p = with_poset("gb", cmd_gb, "reduced Gröbner basis of the Hibi ideal")
    p.add_argument("--order", choices=("rank-lex", "rank-revlex"), default="rank-revlex")
    p = with_poset("fiber", cmd_fiber, "degree-2 fiber of z_a z_b")
    p.add_argument(
        "--pair", required=True, help="a,b as lattice ids or generators joined by '+', e.g. p1+p2,{}"
    )
    with_poset("indispensable", cmd_indispensable, "indispensability of each Hibi relation")
    with_poset("rees", cmd_rees, "Rees presentation and its product-lex Gröbner basis")

    p = sub.add_parser("verify", help="exhaustive campaign over small posets")
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--sweep-tiebreaks", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--lattice-max", type=int, default=8)
    p.add_argument("--iso", action="store_true", help="one poset per isomorphism class")
    p.add_argument("--records", action="store_true", help="include per-poset records in JSON output")
    p.add_argument("--json", action="store_true")
    p.add_argument("--degree-cap", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="stream posets as JSON lines")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--iso", action="store_true")
    p.set_defaults(func=cmd_enumerate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hibi: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HibiError, OSError, ValueError, KeyError) as exc:
        print(f"hibi: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

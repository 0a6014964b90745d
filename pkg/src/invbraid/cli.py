"""Command line: ``invbraid span|verify|forest``."""

from __future__ import annotations

import argparse
import json
import math
import re
import sys

from .coxeter import InvalidSystem, TwistedSystem, preset, system_from_json
from .engine import (
    DEFAULT_BUDGET,
    ForestFailure,
    build_forest,
    build_forests,
    extract_relations,
    minimize,
    relation_key,
)
from .involutions import (
    exceptional_relations,
    hat_braid_relations,
    twisted_involutions,
)
from .numfield import UnsupportedCoxeterEntry
from .rewriting import failing_involutions, implies, spans_involution_words

SCHEMA = "invbraid/1"

EXIT_OK, EXIT_VERIFY, EXIT_ALGO, EXIT_INPUT = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _parse_label(x: str):
    x = x.strip()
    return int(x) if re.fullmatch(r"-?\d+", x) else x


def load_system(args) -> TwistedSystem:
    if getattr(args, "system_file", None):
        with open(args.system_file) as fh:
            sys_ = system_from_json(fh.read())
    else:
        if not args.type:
            raise InputError("give --type (and --rank) or --system-file")
        name = args.type
        if name.startswith("affine-") or name.startswith("~"):
            letter = name.split("-", 1)[-1].lstrip("~")
            name = f"~{letter}"
        sys_ = preset(name, rank=args.rank, twist=args.twist or "id")
    if args.order:
        order = [_parse_label(x) for x in args.order.split(",")]
        sys_ = sys_.with_order(order)
    return sys_


def _pairs(system: TwistedSystem):
    out = []
    for a in system.order:
        for b in system.order:
            if system.rank[a] < system.rank[b] and 2 < system.m(a, b) < math.inf:
                out.append((a, b))
    return out


def _rel_list(rels, system):
    return [str(r) for r in sorted(rels, key=relation_key(system))]


def expected_perfectly_braided(system: TwistedSystem) -> bool | None:
    """The classification of perfectly braided irreducible systems of finite
    or affine type; None when the name is not recognised."""
    gens = system.generators
    if all(system.star(g) != g for g in gens):
        return True
    name = system.name.split("[")[0]
    identity = all(system.star(g) == g for g in gens)
    if identity and re.fullmatch(r"~?A\d+", name):
        return True
    if name in ("~A2", "~C2", "~G2") or name.startswith("I2("):
        return True
    if re.fullmatch(r"~?[A-HI]\d+(\(.*\))?", name):
        return False
    return None


def cmd_span(args) -> tuple[dict, int]:
    system = load_system(args)
    hat = hat_braid_relations(system)
    plus = exceptional_relations(system)
    pairs = _pairs(system)
    forests = build_forests(system, pairs, args.budget, args.jobs)
    R = set()
    summary = []
    for (s, t), f in zip(pairs, forests):
        rels = extract_relations(f)
        R |= rels
        summary.append({"pair": [s, t], "vertices": len(f.vertices), "relations": _rel_list(rels, system)})
    R_min = minimize(R, system, hat, args.depth)
    implied = all(implies(hat | plus, r, system, args.depth) for r in R_min)
    report = {
        "schema": SCHEMA,
        "command": "span",
        "system": system.to_json(),
        "name": system.name,
        "hat_B": _rel_list(hat, system),
        "hat_B_plus": _rel_list(plus, system),
        "R": _rel_list(R, system),
        "R_min": _rel_list(R_min, system),
        "forests": summary,
        "implied_by_hat_and_plus": implied,
        "verdict": "perfectly braided" if not R_min else "not perfectly braided",
    }
    return report, EXIT_OK if implied else EXIT_VERIFY


def cmd_verify(args) -> tuple[dict, int]:
    system = load_system(args)
    if not system.is_finite() and args.bound is None:
        raise InputError("infinite group: give --bound (hat-length)")
    hat = hat_braid_relations(system)
    plus = exceptional_relations(system)
    zs = twisted_involutions(system, args.bound)
    memo = {}
    bad_hat = failing_involutions(system, hat, args.bound, memo)
    bad_full = [z for z in bad_hat if not spans_involution_words(z, hat | plus, memo=memo)]
    perfectly = not bad_hat
    expected = expected_perfectly_braided(system)
    ok = not bad_full and (expected is None or expected == perfectly)
    report = {
        "schema": SCHEMA,
        "command": "verify",
        "name": system.name,
        "bound": args.bound,
        "elements": len(zs),
        "failing_under_hat_B": len(bad_hat),
        "failing_under_hat_B_and_plus": len(bad_full),
        "examples_failing_under_hat_B": [list(z.element.reduced_word()) for z in bad_hat[:5]],
        "perfectly_braided": perfectly,
        "classification_predicts": expected,
        "result": "pass" if ok else "fail",
    }
    return report, EXIT_OK if ok else EXIT_VERIFY


def cmd_forest(args) -> tuple[dict, int]:
    system = load_system(args)
    if args.pair:
        s, t = (_parse_label(x) for x in args.pair.split(","))
    else:
        pairs = _pairs(system)
        if not pairs:
            raise InputError("no pair with 2 < m < inf")
        s, t = pairs[0]
    f = build_forest(system, s, t, args.budget)
    out = f.to_json()
    out["schema"] = SCHEMA
    out["R_min"] = _rel_list(minimize(extract_relations(f), system, depth=args.depth), system)
    return out, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="invbraid", description="Braid relations for involution words.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--type", help="A, B, ..., affine-C / ~C, I2(5), 2(A2xA2)")
        sp.add_argument("--rank", type=int, help="rank n (omit when --type carries it)")
        sp.add_argument("--twist", default="id", help="id, reverse, swap, reflect, rotate or pairs like 1-3,4-5 (default id)")
        sp.add_argument("--system-file", help="JSON system with generators, m and twist")
        sp.add_argument("--order", help="comma-separated generator order override")
        sp.add_argument("--depth", type=int, default=2, help="depth of the bounded implication check (default 2)")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="descent elimination step budget (default 200)")
        sp.add_argument("--out", help="write JSON here instead of stdout")

    sp = sub.add_parser("span", help="spanning relation report")
    common(sp)
    sp.add_argument("--jobs", type=int, default=1, help="worker processes across pairs (default 1)")
    sp.set_defaults(func=cmd_span)

    sp = sub.add_parser("verify", help="brute-force spanning check")
    common(sp)
    sp.add_argument("--bound", type=int, help="hat-length bound (required for infinite groups)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("forest", help="dump one forest as JSON")
    common(sp)
    sp.add_argument("--pair", help="s,t (default: first pair with 2 < m < inf)")
    sp.set_defaults(func=cmd_forest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.func(args)
    except (InputError, InvalidSystem, UnsupportedCoxeterEntry, KeyError, ValueError) as exc:
        print(f"invbraid: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ForestFailure as exc:
        print(f"invbraid: algorithm failure: {exc}", file=sys.stderr)
        if exc.system is not None:
            print(str(exc.system), file=sys.stderr)
        return EXIT_ALGO
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

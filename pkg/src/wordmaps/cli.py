"""Command line interface.

Exit codes: 0 success, 1 invalid input, 2 budget exceeded, 3 internal
invariant violation.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .bounds import chain_growth, master_inequality, theorem_bounds
from .dsl import DEFAULT_LETTER_CAP, word_from_text
from .evaluate import DEFAULT_BUDGET, check_mixed_identity, diameter_sampled, exact_diameter, image_exhaustive
from .exceptions import BudgetExceeded, CoveringError, InternalContradiction, InvalidInput
from .interpolate import covering_number, interpolate
from .perm import parse_group
from .schreier import construct_witness, largest_feasible_d
from .validation import parse_map_table
from .words import classify, content, critical_indices, is_strong, norms, reduction_chain

EXIT_INVALID, EXIT_BUDGET, EXIT_INTERNAL = 1, 2, 3


def _word(args):
    return word_from_text(args.word, args.rank, args.degree, args.letter_cap)


def _report(args, result: dict, method: Optional[str] = None, seed=None) -> dict:
    echoed = {k: v for k, v in vars(args).items() if k not in ("func", "format") and v is not None}
    return {
        "tool": {"name": "wordmaps", "version": __version__},
        "command": args.command,
        "input": echoed,
        "seed": seed,
        "method": method,
        "result": result,
    }


def _sorted_list(s):
    return sorted(int(x) for x in s)


def cmd_analyze(args) -> dict:
    w = _word(args)
    cls = classify(w)
    nm = norms(w)
    result = {
        "normal_form": str(w),
        "length": nm.length,
        "ilengths": list(nm.ilengths),
        "infinity_norm": nm.infinity,
        "crit_norm": nm.crit,
        "J0": _sorted_list(cls.j0),
        "J+": _sorted_list(cls.jplus),
        "J-": _sorted_list(cls.jminus),
        "critical_constants": [{"j": j, "constant": str(w.constant_at(j)), "norm": w.constant_at(j).norm}
                               for j in critical_indices(w)],
        "content": str(content(w)),
        "content_trivial": content(w).is_trivial(),
        "strong": is_strong(w),
        "largest_certified_d": largest_feasible_d(w),
    }
    return _report(args, result, "definitional")


def cmd_image(args) -> dict:
    w = _word(args)
    if args.samples:
        args.seed = args.seed or 0
        rep = diameter_sampled(w, args.samples, args.seed)
        result = {"diameter": rep.diameter, "lower_bound_only": True, "sample_count": rep.sample_count,
                  "witnesses": [str(p) for p in rep.witnesses]}
        return _report(args, result, "sampled", args.seed)
    rep = image_exhaustive(w, args.budget)
    result = {
        "diameter": rep.diameter,
        "image_size": len(rep.image),
        "evaluations": rep.sample_count,
        "witnesses": [str(p) for p in rep.witnesses] if rep.witnesses else [],
    }
    if args.list_image:
        result["image"] = sorted(str(p) for p in rep.image)
    return _report(args, result, "exhaustive")


def cmd_identity(args) -> dict:
    w = _word(args)
    rep = check_mixed_identity(w, args.budget)
    result = {"mixed_identity": rep.is_identity, "evaluations": rep.evaluations}
    if not rep.is_identity:
        result["counterexample"] = [str(p) for p in rep.counterexample]
        result["value"] = str(rep.value)
    return _report(args, result, "exhaustive")


def cmd_witness(args) -> dict:
    w = _word(args)
    d = args.d if args.d is not None else largest_feasible_d(w)
    if d < 1:
        raise InvalidInput("no d >= 1 satisfies the conditions for this word")
    trace_file = open(args.trace, "w") if args.trace else None
    try:
        on_step = (lambda rec: trace_file.write(rec.to_json() + "\n")) if trace_file else None
        cert = construct_witness(w, d, seed=args.seed, on_step=on_step, debug=True)
    finally:
        if trace_file:
            trace_file.close()
    result = cert.to_dict()
    result["verified"] = cert.verify()
    return _report(args, result, "schreier-graph" if args.seed is None else "schreier-graph-random", args.seed)


def cmd_bounds(args) -> dict:
    w = _word(args)
    if args.samples:
        args.seed = args.seed or 0
        diam = diameter_sampled(w, args.samples, args.seed).diameter
        method = "sampled"
    else:
        diam = exact_diameter(w, args.budget)
        method = "exhaustive"
    result = {"diameter": diam}
    if w.length:
        result["master"] = master_inequality(w, diam, method).to_dict()
    result["theorem"] = theorem_bounds(w, diam, method).to_dict()
    return _report(args, result, method, args.seed if args.samples else None)


def cmd_chain(args) -> dict:
    w = _word(args)
    chain = reduction_chain(w)
    steps = [{"word": str(v), "length": v.length, "crit_norm": norms(v).crit, "strong": is_strong(v)} for v in chain]
    result = {"steps": steps, "m": len(chain) - 1}
    if args.diameters:
        growth = chain_growth(w, lambda v: exact_diameter(v, args.budget))
        for s, g in zip(steps, growth):
            s.update(diameter=g.diameter, growth_lhs=g.lhs, growth_rhs=g.rhs, growth_holds=g.holds)
    return _report(args, result, "exhaustive" if args.diameters else "definitional")


def _group(args):
    if not args.group:
        raise InvalidInput("--group is required")
    return parse_group(args.group)


def cmd_covering(args) -> dict:
    return _report(args, covering_number(_group(args)).to_dict(), "class-product-closure")


def cmd_interpolate(args) -> dict:
    G = _group(args)
    if args.map:
        with open(args.map) as fh:
            f = parse_map_table(fh.read(), G)
    elif args.random_map is not None:
        rng = np.random.default_rng(args.random_map)
        f = {g: G.elements[int(rng.integers(len(G)))] for g in G}
    else:
        raise InvalidInput("give --map <path> or --random-map <seed>")
    cert = interpolate(G, f)
    result = cert.to_dict(include_word=args.emit_word)
    result["verified"] = cert.verify()
    return _report(args, result, "commutator-separators", args.random_map)


# ---------------------------------------------------------------------------


def _format_text(report: dict) -> str:
    lines = []

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k, v in obj.items():
                walk(f"{prefix}.{k}" if prefix else str(k), v)
        elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
            for i, v in enumerate(obj):
                walk(f"{prefix}[{i}]", v)
        else:
            if isinstance(obj, list):
                obj = ", ".join(map(str, obj))
            lines.append(f"{prefix}: {obj}")

    walk("", report)
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wordmaps", description="Word maps with constants on symmetric groups.")
    parser.add_argument("--version", action="version", version=f"wordmaps {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, word=True):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=("json", "text"), default="json")
        if word:
            p.add_argument("word", help="word with constants, e.g. '[x1,(1 2)]^6'")
            p.add_argument("-n", "--degree", type=int, required=True)
            p.add_argument("-r", "--rank", type=int, default=1)
            p.add_argument("--letter-cap", type=int, default=DEFAULT_LETTER_CAP)
            p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        return p

    add("analyze", cmd_analyze, "norms, index classification, content, strongness")
    p = add("image", cmd_image, "exact image and diameter, or a sampled lower bound")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, help="sampling seed (default 0)")
    p.add_argument("--list-image", action="store_true")
    add("identity", cmd_identity, "exhaustive mixed-identity check")
    p = add("witness", cmd_witness, "certificate that the image has diameter >= d")
    p.add_argument("-d", type=int)
    p.add_argument("--trace", help="write one JSON line per arrow insertion")
    p.add_argument("--seed", type=int, help="random admissible targets instead of smallest")
    p = add("bounds", cmd_bounds, "diameter bounds and the critical-constant inequality")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, help="sampling seed (default 0)")
    p = add("chain", cmd_chain, "reduction chain by smallest critical constants")
    p.add_argument("--diameters", action="store_true", help="also compute exact diameters along the chain")
    p = add("covering", cmd_covering, "covering number cn(G) and covering diameter cd(G)", word=False)
    p.add_argument("--group", required=True, help="'A5', 'S3' or generators like '(1 2 3); (3 4 5)'")
    p = add("interpolate", cmd_interpolate, "compile a map G -> G into a word", word=False)
    p.add_argument("--group", required=True)
    p.add_argument("--map", help="file with lines 'g -> h' in cycle notation")
    p.add_argument("--random-map", type=int, metavar="SEED")
    p.add_argument("--emit-word", action="store_true")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InternalContradiction as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (InvalidInput, CoveringError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        print(_format_text(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())

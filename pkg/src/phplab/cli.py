"""The ``lab`` command line.

Output is JSON on stdout (``--table`` prints ``key: value`` lines instead).
Exit status: 0 on success, 1 when a check finds a property violation,
2 on usage errors, 3 when a search runs out of budget (the partial result is
still printed, flagged with ``"budget_exceeded": true``).
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .compiler import accepting_leaves, build_array_from_formula, compile_formula
from .conditions import Condition, Scale
from .errors import BudgetExceeded, LabError
from .experiments import ExperimentConfig, render, sweep
from .forcing import ForcingContext, forces
from .formula import classify
from .generators import graft_violations, random_graft_instance
from .matching import (
    brute_force_max_family,
    count_extensions,
    count_k_matchings,
    family_bound,
    fixed_holes_family,
)
from .parser import parse
from .phptree import (
    covering_witness,
    decide_condition_tree,
    leaves,
    min_leaf_count,
    pigeon_chain,
    tree_from_json,
    tree_to_json,
)
from .warray import (
    ajtai_check,
    array_from_json,
    array_size,
    array_to_json,
    brute_force_search_array,
    contradiction_check,
    lower_bound,
    search_budget,
    uniformize,
    upper_bound,
    verify_properties,
)

OK, VIOLATION, USAGE, BUDGET = 0, 1, 2, 3


class Usage(Exception):
    pass


def _cond(text: str) -> Condition:
    try:
        return Condition.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _read_json(path: str, key: str | None = None):
    if path == "-":
        doc = json.load(sys.stdin)
    else:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    # accept the full output of another lab command as well as the bare document
    if key and isinstance(doc, dict) and isinstance(doc.get(key), dict):
        doc = doc[key]
    return doc


def _scale(n: int, K: int | None) -> Scale:
    return Scale(n, n if K is None else K)


def _budget(args) -> int:
    return args.budget if getattr(args, "budget", None) else search_budget()


def _labels(family) -> list[str]:
    return [str(c) for c in family]


# tree ---------------------------------------------------------------------------


def cmd_tree(args):
    if args.action == "pigeon-chain":
        s = _scale(args.n, args.K)
        t = pigeon_chain(args.sigma, args.k, s)
        return OK, {"tree": tree_to_json(t), "leaves": _labels(leaves(t))}
    if args.action == "decide":
        s = _scale(args.n, args.K)
        t = decide_condition_tree(args.sigma, args.tau, s)
        return OK, {"tree": tree_to_json(t), "leaves": _labels(leaves(t))}
    if args.action == "leaves":
        t = tree_from_json(_read_json(args.file, "tree"))
        fam = leaves(t)
        return OK, {"count": len(fam), "leaves": _labels(fam), "antichain": fam.is_antichain()}
    if args.action == "covering":
        t = tree_from_json(_read_json(args.file, "tree"))
        s = _scale(t.scale.n, args.K if args.K is not None else t.scale.K)
        rho = covering_witness(leaves(t), s)
        out = {"covering": rho is None, "witness": None if rho is None else str(rho)}
        return (OK if rho is None else VIOLATION), out
    if args.action == "min-leaves":
        return OK, {"value": min_leaf_count(args.n, args.s, args.k)}
    if args.action == "graft-check":
        rng = random.Random(args.seed)
        failures = []
        for i in range(args.count):
            p, tau, attachments = random_graft_instance(rng, args.n_max)
            for problem in graft_violations(p, tau, attachments):
                failures.append({"instance": i, "problem": problem})
        return (OK if not failures else VIOLATION), {"instances": args.count, "violations": failures}
    raise Usage(f"unknown tree action {args.action}")


# force / compile ----------------------------------------------------------------


def cmd_force(args):
    s = Scale(args.n, args.k_cap)
    phi = parse(args.formula)
    ctx = ForcingContext.tracing(s) if args.trace else ForcingContext(s)
    result = forces(args.sigma, phi, ctx)
    out = {"result": result, "shape": classify(phi).label}
    if args.trace:
        out["clause_trace"] = [list(step) for step in ctx.trace]
    return OK, out


def cmd_compile(args):
    s = _scale(args.n, args.K)
    phi = parse(args.formula)
    t = compile_formula(phi, args.sigma, s)
    return OK, {
        "tree": tree_to_json(t),
        "leaves": sum(1 for _ in t.walk()),
        "accepting": _labels(accepting_leaves(t)),
    }


# family -------------------------------------------------------------------------


def cmd_family(args):
    d, c, k = args.d, args.c, args.k
    if args.action == "bound":
        return OK, {"value": family_bound(d, k), "witness": _labels(fixed_holes_family(d, k, max(c, k)).members)}
    if args.action == "count":
        return OK, {"value": count_k_matchings(d, c, k), "extensions": count_extensions(d, c, k)}
    if args.action == "search":
        try:
            size, fam = brute_force_max_family(d, c, k, budget=_budget(args))
        except BudgetExceeded as exc:
            return BUDGET, {"budget_exceeded": True, "partial": exc.partial, "error": str(exc)}
        bound = family_bound(d, k)
        out = {"max": size, "value": size, "bound": bound, "witness": _labels(fam.members)}
        return (OK if size <= bound else VIOLATION), out
    raise Usage(f"unknown family action {args.action}")


# array --------------------------------------------------------------------------


def cmd_array(args):
    a = args.action
    if a in ("verify", "size", "uniformize"):
        A = array_from_json(_read_json(args.file, "array"), K=args.K)
        if a == "verify":
            report = verify_properties(A)
            return (OK if report.ok else VIOLATION), report.to_json()
        if a == "size":
            N, rows, cols = array_size(A)
            return OK, {"N": N, "row_sums": rows, "col_sums": cols}
        B = uniformize(A, pseudo=args.pseudo)
        return OK, {"array": array_to_json(B), "N": array_size(B)[0]}
    if a == "search":
        s = _scale(args.n, args.K)
        try:
            found = brute_force_search_array(s, args.m, args.k, args.sigma, budget=_budget(args))
        except BudgetExceeded as exc:
            return BUDGET, {"budget_exceeded": True, "partial": exc.partial, "error": str(exc)}
        return OK, {"found": found is not None, "array": None if found is None else array_to_json(found)}
    if a == "bounds":
        kp = args.k if args.k_prime is None else args.k_prime
        lo = lower_bound(args.n, args.s, kp, args.m)
        hi = upper_bound(args.n, args.s, args.k, args.m)
        return OK, {"lower": lo, "upper": hi, "lower_exceeds_upper": lo > hi}
    if a == "contradiction":
        flag, ratio = contradiction_check(args.n, args.s, args.k)
        return OK, {"contradiction": flag, "ratio": str(ratio)}
    if a == "ajtai":
        flag, lhs, rhs = ajtai_check(args.n, args.s, args.k, args.eps)
        return OK, {"contradiction": flag, "lhs": str(lhs), "rhs": str(rhs)}
    if a == "from-formula":
        s = _scale(args.n, args.K)
        phi = parse(args.formula, free=("x", "y"))
        A = build_array_from_formula(phi, args.m, args.sigma, s)
        report = verify_properties(A)
        return OK, {"array": array_to_json(A), "properties": report.to_json()}
    raise Usage(f"unknown array action {a}")


# sweep --------------------------------------------------------------------------


def cmd_sweep(args):
    config = ExperimentConfig.load(args.config) if args.config else ExperimentConfig(budget_nodes=search_budget())
    overrides = {key: getattr(args, key) for key in ("n", "K", "s", "k", "m", "seed", "budget_nodes", "format")}
    if args.search:
        overrides["search"] = True
    config = ExperimentConfig.from_mapping(overrides, config)
    text = render(config, sweep(config))
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return OK, text


# parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lab", description="Finite pigeonhole forcing laboratory.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--json", action="store_true", help="JSON output (the default)")
    out.add_argument("--table", action="store_true", help="human-readable key: value output")
    sub = p.add_subparsers(dest="command", required=True)

    tree = sub.add_parser("tree", help="PHP decision trees")
    tsub = tree.add_subparsers(dest="action", required=True)
    t = tsub.add_parser("pigeon-chain", parents=[out])
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--K", type=int)
    t.add_argument("--sigma", type=_cond, default=Condition())
    t.add_argument("--k", type=int, required=True)
    t = tsub.add_parser("decide", parents=[out])
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--K", type=int)
    t.add_argument("--sigma", type=_cond, default=Condition())
    t.add_argument("--tau", type=_cond, required=True)
    for name in ("leaves", "covering"):
        t = tsub.add_parser(name, parents=[out])
        t.add_argument("--file", required=True, help="tree JSON, or - for stdin")
        if name == "covering":
            t.add_argument("--K", type=int, help="size cap for the checked conditions")
    t = tsub.add_parser("min-leaves", parents=[out])
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--s", type=int, default=0)
    t.add_argument("--k", type=int, required=True)
    t = tsub.add_parser("graft-check", parents=[out])
    t.add_argument("--count", type=int, default=100)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--n-max", type=int, default=6)

    force = sub.add_parser("force", help="the forcing relation")
    fsub = force.add_subparsers(dest="action", required=True)
    f = fsub.add_parser("eval", parents=[out])
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--k-cap", type=int, required=True)
    f.add_argument("--sigma", type=_cond, default=Condition())
    f.add_argument("--formula", required=True)
    f.add_argument("--trace", action="store_true")

    c = sub.add_parser("compile", parents=[out], help="compile a formula into a marked tree")
    c.add_argument("--formula", required=True)
    c.add_argument("--sigma", type=_cond, default=Condition())
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--K", type=int)

    fam = sub.add_parser("family", help="k-matching families")
    famsub = fam.add_subparsers(dest="action", required=True)
    for name in ("bound", "count", "search"):
        f = famsub.add_parser(name, parents=[out])
        f.add_argument("--d", type=int, required=True)
        f.add_argument("--c", type=int, required=True)
        f.add_argument("--k", type=int, required=True)
        if name == "search":
            f.add_argument("--budget", type=int)

    arr = sub.add_parser("array", help="WPHP arrays")
    asub = arr.add_subparsers(dest="action", required=True)
    for name in ("verify", "size", "uniformize"):
        a = asub.add_parser(name, parents=[out])
        a.add_argument("--file", required=True, help="array JSON, or - for stdin")
        a.add_argument("--K", type=int, help="size cap if the document has none")
        if name == "uniformize":
            a.add_argument("--pseudo", action="store_true", help="only require row-local properties")
    a = asub.add_parser("search", parents=[out])
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--K", type=int)
    a.add_argument("--m", type=int, default=1)
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--sigma", type=_cond, default=Condition())
    a.add_argument("--budget", type=int)
    a = asub.add_parser("bounds", parents=[out])
    for name in ("n", "k"):
        a.add_argument(f"--{name}", type=int, required=True)
    a.add_argument("--s", type=int, default=0)
    a.add_argument("--m", type=int, default=1)
    a.add_argument("--k-prime", type=int, help="uniform depth for the lower bound (default: k)")
    a = asub.add_parser("contradiction", parents=[out])
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--s", type=int, default=0)
    a.add_argument("--k", type=int, required=True)
    a = asub.add_parser("ajtai", parents=[out])
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--s", type=int, default=0)
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--eps", type=_frac, required=True)
    a = asub.add_parser("from-formula", parents=[out])
    a.add_argument("--formula", required=True, help="formula with free variables x, y")
    a.add_argument("--m", type=int, default=1)
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--K", type=int)
    a.add_argument("--sigma", type=_cond, default=Condition())

    sw = sub.add_parser("sweep", help="parameter sweep over array bounds")
    sw.add_argument("--config", help="flat key = value config file")
    for name in ("n", "K", "s", "k", "m"):
        sw.add_argument(f"--{name}", help="range such as 8..12 or 1,2")
    sw.add_argument("--seed", type=int)
    sw.add_argument("--budget-nodes", type=int)
    sw.add_argument("--search", action="store_true", help="run the exhaustive array search")
    sw.add_argument("--format", choices=("json", "csv"))
    sw.add_argument("--output", help="also write the report to this file")
    return p


COMMANDS = {
    "tree": cmd_tree,
    "force": cmd_force,
    "compile": cmd_compile,
    "family": cmd_family,
    "array": cmd_array,
    "sweep": cmd_sweep,
}


def _emit(payload, table: bool, stream):
    if isinstance(payload, str):
        stream.write(payload)
        return
    if table:
        for key, value in payload.items():
            if not isinstance(value, str):
                value = json.dumps(value)
            stream.write(f"{key}: {value}\n")
    else:
        stream.write(json.dumps(payload, indent=2) + "\n")


def _resolved(args) -> dict:
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in ("json", "table"):
            continue
        out[key] = value if isinstance(value, (int, str, bool, type(None))) else str(value)
    return out


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code, payload = COMMANDS[args.command](args)
    except (Usage, LabError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        stderr.write(f"lab: error: {exc}\n")
        return USAGE
    if isinstance(payload, dict):
        payload = {**payload, "config": _resolved(args)}
    _emit(payload, getattr(args, "table", False), stdout)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

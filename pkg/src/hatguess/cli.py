"""Command line entry point: ``hatguess {exact,search,simulate,plan,verify}``.

Machine-readable output goes to stdout, progress and summaries to stderr.
Exit status is 0 on success, 1 when a check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import exact, verify
from . import montecarlo as mc
from .plan import generate_plan, validate_plan
from .strategies import PRESETS, preset, strategy_from_spec

EXACT_SCHEMA = "hatguess.exact/1"
SEARCH_SCHEMA = "hatguess.search/1"
RUN_SCHEMA = "hatguess.run/1"


def load_strategy(text: str, n: int | None = None):
    """A preset name or a path to a JSON strategy spec."""
    if text in PRESETS:
        return preset(text, n)
    path = Path(text)
    if path.is_file():
        return strategy_from_spec(json.loads(path.read_text()))
    raise ValueError(f"{text!r} is neither a preset ({', '.join(PRESETS)}) nor a JSON file")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from e


def cmd_exact(args) -> int:
    rule = load_strategy(args.strategy, args.n)
    dist = exact.exact_distribution(rule, args.n)
    mean = dist.mean()
    if args.out == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["zbar", "prob_numerator", "prob_denominator"])
        w.writerows(dist.to_rows())
    else:
        doc = {"schema": EXACT_SCHEMA, "strategy": rule.to_spec(), "n": args.n,
               "pmf": [{"zbar": v, "num": p, "den": q} for v, p, q in dist.to_rows()],
               "mean": str(mean), "p_all_correct": str(dist.prob(1))}
        json.dump(doc, sys.stdout, sort_keys=True, indent=1)
        sys.stdout.write("\n")
    print(f"mean = {mean}, P(all correct) = {dist.prob(1)}", file=sys.stderr)
    return 0


def cmd_search(args) -> int:
    best, table = exact.search_strategy_space(args.n, args.objective)
    doc = {"schema": SEARCH_SCHEMA, "n": args.n, "objective": args.objective, "optimum": str(best),
           "witness": [list(t) for t in table.tables]}
    json.dump(doc, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _one_run(payload):
    spec, N, seed, run, k_min, want_csv = payload
    rule = strategy_from_spec(spec)
    traj, hats = mc.simulate_run(rule, N, mc.run_seed(seed, run), return_hats=True)
    rep = mc.run_report(rule, traj, hats, run, k_min)
    rep["schema"], rep["seed"] = RUN_SCHEMA, seed
    return rep, mc.checkpoints_csv(traj) if want_csv else None


def cmd_simulate(args) -> int:
    rule = load_strategy(args.strategy)
    spec = rule.to_spec()
    if args.checkpoints:
        Path(args.checkpoints).mkdir(parents=True, exist_ok=True)
    jobs = [(spec, args.N, args.seed, run, args.k_min, bool(args.checkpoints)) for run in range(args.runs)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_one_run, jobs))
    else:
        results = [_one_run(j) for j in jobs]
    ok = True
    for rep, table in results:
        sys.stdout.write(json.dumps(rep, sort_keys=True) + "\n")
        ok &= rep["ok"]
        if table is not None:
            (Path(args.checkpoints) / f"run{rep['run']:05d}.csv").write_text(table)
    print(f"{args.runs} runs, sure checks {'passed' if ok else 'FAILED'}", file=sys.stderr)
    return 0 if ok else 1


def cmd_plan(args) -> int:
    plan = generate_plan(args.u, args.teams, ell=args.ell, eps_scale=args.eps_scale)
    doc = plan.to_dict()
    status = 0
    if args.validate:
        rep = validate_plan(plan)
        doc["validation"] = rep.to_dict()
        status = 0 if rep.passed else 1
        print(f"plan validation: {'passed' if rep.passed else 'FAILED'}", file=sys.stderr)
    json.dump(doc, sys.stdout, sort_keys=True, indent=1)
    sys.stdout.write("\n")
    return status


def cmd_verify(args) -> int:
    ids = verify.SUITES[args.suite] if not args.criterion else tuple(args.criterion)
    results = verify.run_criteria(ids, args.seed)
    sys.stdout.write(verify.report_json(results, args.suite, args.seed))
    for r in results:
        print(r.line(), file=sys.stderr)
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hatguess", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("exact", help="exact law of the correct fraction for n players")
    e.add_argument("--strategy", required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--out", choices=("csv", "json"), default="json")
    e.set_defaults(func=cmd_exact)

    s = sub.add_parser("search", help="exhaustive optimum over all binary strategies")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--objective", choices=(exact.MAX_ALL_CORRECT, exact.MAX_GUARANTEED),
                   default=exact.MAX_ALL_CORRECT)
    s.set_defaults(func=cmd_search)

    m = sub.add_parser("simulate", help="Monte Carlo runs, one JSON line per run")
    m.add_argument("--strategy", required=True)
    m.add_argument("--N", type=int, default=10**5)
    m.add_argument("--runs", type=int, default=10)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--k-min", type=int, default=mc.DEFAULT_K_MIN)
    m.add_argument("--checkpoints", metavar="DIR", help="write per-run checkpoint CSVs here")
    m.add_argument("--jobs", type=int, default=1)
    m.set_defaults(func=cmd_simulate)

    pl = sub.add_parser("plan", help="generate a team plan as JSON")
    pl.add_argument("--u", type=_fraction, required=True)
    pl.add_argument("--ell", type=_fraction)
    pl.add_argument("--teams", type=int, default=12)
    pl.add_argument("--eps-scale", type=int, default=1)
    pl.add_argument("--validate", action="store_true")
    pl.set_defaults(func=cmd_plan)

    v = sub.add_parser("verify", help="run acceptance checks")
    v.add_argument("--suite", choices=sorted(verify.SUITES), default="all")
    v.add_argument("--criterion", type=int, action="append", choices=sorted(verify.CRITERIA))
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, exact.SizeGuardError, mc.HorizonError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

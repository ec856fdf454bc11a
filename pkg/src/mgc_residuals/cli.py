"""
Command-line front end.

Exit status: 0 on success, 2 on usage errors, 1 on computational errors.
Diagnostics go to stderr as ``error[<code>]: <message>``.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import qbd
from .approx import classic_bundle, relative_error
from .catalog import CVS, FAMILY_MU1, dist_catalog
from .cox2 import Cox2Params, fit_from_moments, moments_from_params
from .errors import ParameterError, QueueModelError
from .model import ModelSpec
from .reproduce import (FIGURES, Reproducer, ScenarioRow, published_checks, point_rows,
                        table_rows, write_csv)
from .sim import METRICS, SimConfig, estimate


class UsageError(Exception):
    code = "usage"


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mgc-residuals",
                                 description="Exact, simulated and approximate M/Cox2/c measures.")
    sub = ap.add_subparsers(dest="command", required=True)

    def model_args(p):
        load = p.add_mutually_exclusive_group(required=True)
        load.add_argument("--rho", type=float)
        load.add_argument("--lambda", dest="lam", type=float)
        p.add_argument("--servers", type=int, required=True)
        p.add_argument("--dist", help="JSON file {mu1, mu2, q1_exit}")
        p.add_argument("--family", choices=sorted(FAMILY_MU1))
        p.add_argument("--cv", type=float, help="catalog cv, with --family")

    def output_args(p):
        p.add_argument("--out", help="CSV output path (default: stdout)")
        p.add_argument("--json", action="store_true", help="print a JSON document instead of CSV")

    def sim_args(p):
        d = SimConfig()
        p.add_argument("--reps", type=int, default=d.replications)
        p.add_argument("--arrivals", type=int, default=d.arrivals_per_rep)
        p.add_argument("--warmup", type=int, default=d.warmup_arrivals)
        p.add_argument("--seed", type=int, default=d.master_seed)

    p = sub.add_parser("fit", help="fit a Cox-2 law to (mean, cv) with fixed stage-1 rate")
    p.add_argument("--mean", type=float, required=True)
    p.add_argument("--cv", type=float, required=True)
    p.add_argument("--mu1", type=float, required=True)
    p.add_argument("--json", action="store_true")

    for name, text in (("exact", "matrix-geometric solution"),
                       ("approx", "classical approximations and their errors")):
        p = sub.add_parser(name, help=text)
        model_args(p)
        output_args(p)

    p = sub.add_parser("sim", help="discrete-event simulation with 95%% CIs")
    model_args(p)
    sim_args(p)
    output_args(p)

    p = sub.add_parser("reproduce", help="regenerate a figure or table")
    p.add_argument("--figure", required=True, help=f"one of {', '.join(FIGURES)}, or 'all'")
    p.add_argument("--no-sim", action="store_true", help="skip simulation rows")
    sim_args(p)
    output_args(p)

    p = sub.add_parser("catalog", help="print the Cox-2 catalog")
    p.add_argument("--family", choices=sorted(FAMILY_MU1))
    output_args(p)
    return ap


def _service(args) -> tuple:
    if args.dist and args.family:
        raise UsageError("--dist and --family are mutually exclusive")
    if args.dist:
        return "custom", None, Cox2Params.load(args.dist)
    if args.family:
        if args.cv is None:
            raise UsageError("--family requires --cv")
        cv = int(args.cv) if float(args.cv).is_integer() else args.cv
        if cv not in CVS:
            raise UsageError(f"cv {args.cv} not in catalog {CVS}")
        return args.family, cv, dist_catalog(args.family, cv)
    raise UsageError("one of --dist or --family is required")


def _model(args) -> tuple:
    family, cv, service = _service(args)
    if args.rho is not None:
        model = ModelSpec.from_rho(args.rho, args.servers, service)
    else:
        model = ModelSpec(lam=args.lam, c=args.servers, service=service)
    if cv is None:
        cv = model.moments.cv
    return family, cv, model


def _emit(args, rows, doc, out) -> None:
    if args.json:
        json.dump(doc, out, indent=2, sort_keys=True)
        out.write("\n")
    elif args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, out)


def _sim_config(args) -> SimConfig:
    return SimConfig(replications=args.reps, arrivals_per_rep=args.arrivals,
                     warmup_arrivals=args.warmup, master_seed=args.seed)


def _sid(family, model):
    return f"{family}-c{model.c}-lam{model.lam:.6g}"


def run(argv, out=sys.stdout, err=sys.stderr) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args, out, err)
    except (UsageError, ParameterError) as exc:
        code = getattr(exc, "code", "usage")
        err.write(f"error[{code}]: {exc}\n")
        return 2
    except QueueModelError as exc:
        err.write(f"error[{exc.code}]: {exc}\n")
        return 1
    except OSError as exc:
        err.write(f"error[io]: {exc}\n")
        return 1


def _dispatch(args, out, err) -> int:
    cmd = args.command
    if cmd == "fit":
        p = fit_from_moments(args.mean, args.cv, args.mu1)
        doc = p.to_dict()
        if args.json:
            mom = moments_from_params(p)
            doc["moments"] = {"m": mom.m, "cv": mom.cv, "skewness": mom.skewness,
                              "ex_kurtosis": mom.ex_kurtosis}
        json.dump(doc, out, indent=2, sort_keys=True)
        out.write("\n")
        return 0

    if cmd == "catalog":
        rows = []
        for t, fam in (("t1", "I"), ("t2", "II"), ("t3", "III")):
            if args.family in (None, fam):
                rows += table_rows(t)
        doc = [{"family": r.family, "cv": r.cv, **dist_catalog(r.family, r.cv).to_dict()}
               for r in rows if r.metric == "mu1"]
        _emit(args, rows, doc, out)
        return 0

    if cmd == "reproduce":
        fig = args.figure.lower()
        if fig != "all" and fig not in FIGURES:
            raise UsageError(f"unknown figure {args.figure!r}; valid ids: {', '.join(FIGURES)}, all")
        rep = Reproducer(None if args.no_sim else _sim_config(args))
        rows = rep.all() if fig == "all" else rep.figure(fig)
        doc = [r.__dict__ for r in rows]
        _emit(args, rows, doc, out)
        for check in published_checks():
            err.write(check.line() + "\n")
        return 0

    family, cv, model = _model(args)
    sid = _sid(family, model)
    if cmd == "exact":
        perf = qbd.solve(model)
        rows = [r for r in point_rows(model, family, cv, sid, exact=perf) if r.method == "exact"]
        doc = {"lambda": model.lam, "c": model.c, **perf.as_dict()}
    elif cmd == "sim":
        est = estimate(model, _sim_config(args))
        rows = []
        for k in METRICS:
            rows.append(ScenarioRow(sid, family, cv, model.c, round(model.rho, 12), model.lam,
                                    "sim", k, est[k].mean, est[k].half_width, args.seed))
        doc = {"lambda": model.lam, "c": model.c, "rho": model.rho, "seed": args.seed,
               "replications": est.replications,
               **{k: {"mean": est[k].mean, "ci_half_width": est[k].half_width, "n": est[k].n}
                  for k in METRICS}}
    else:  # approx
        perf = qbd.solve(model)
        rows = [r for r in point_rows(model, family, cv, sid, exact=perf) if r.method != "exact"]
        b = classic_bundle(model)
        doc = {"lambda": model.lam, "c": model.c, "rho": model.rho,
               "min_tr_eq2": b.min_tr_eq2, "pi_wait_mmc": b.pi_wait_mmc,
               "ew_eq1": b.ew_eq1, "eq_approx": b.eq_approx,
               "rel_err_pct": {
                   "min_tr": 100 * relative_error(b.min_tr_eq2, perf.min_tr),
                   "pi_wait": 100 * relative_error(b.pi_wait_mmc, perf.pi_wait),
                   "ew": 100 * relative_error(b.ew_eq1, perf.ew),
                   "eq": 100 * relative_error(b.eq_approx, perf.eq)}}
    _emit(args, rows, doc, out)
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

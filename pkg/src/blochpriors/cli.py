"""Command-line front end.

Exit codes: 0 on success, 1 on computational failure (support mismatch,
non-convergence, ...), 2 on usage errors (argparse).  Text output shows
6 significant figures; JSON carries full precision.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import experiments, infotheory
from .errors import BlochPriorsError
from .infotheory import NATS_TO_BITS, PosteriorSide, Variant
from .measurement import parse_record
from .priors import (DEFAULT_TRUNCATION_RADIUS, PRIOR_LABELS, BlochPoint,
                     make_prior)
from .quadrature import QuadratureConfig

__all__ = ["main"]


def _record(text: str):
    try:
        return parse_record(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _add_common(sub, priors=(), record=False, variant=False):
    for flag in priors:
        sub.add_argument(f"--{flag}", required=True, choices=PRIOR_LABELS,
                         help="prior label")
    if record:
        sub.add_argument("--record", type=_record, default=parse_record(""),
                         help="record spec 'X+:1,...' or alias balanced6[^k]")
    if variant:
        sub.add_argument("--variant", choices=("paper", "clarke"),
                         default="paper", help="decision-rule variant")
    sub.add_argument("--R", type=float, default=None,
                     help="support radius (default 1 for sld/km/mc/ld, "
                          "1-1e-10 for p0/p1/p2)")
    sub.add_argument("--rel-tol", type=float, default=1e-8)
    sub.add_argument("--abs-tol", type=float, default=1e-12)
    sub.add_argument("--max-evals", type=int, default=500_000)
    sub.add_argument("--format", choices=("text", "csv", "json"),
                     default="text")
    sub.add_argument("--units", choices=("nats", "bits"), default="nats")


def _cfg(args) -> QuadratureConfig:
    return QuadratureConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol,
                            max_evaluations=args.max_evals)


def _scale(args) -> float:
    return NATS_TO_BITS if args.units == "bits" else 1.0


def _emit_scalar(args, name: str, value: float) -> None:
    if args.format == "json":
        print(json.dumps({name: value, "units": args.units}))
    elif args.format == "csv":
        print(f"{name},units")
        print(f"{value!r},{args.units}")
    else:
        print(f"{value:.6g}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blochpriors",
        description="Bloch-ball priors from monotone metrics: Bayesian "
                    "updating and comparative noninformativity.")
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("priors", help="list built-in priors")
    _add_common(sp)

    sp = subs.add_parser("eval", help="evaluate a prior density at a point")
    _add_common(sp, priors=("p",))
    sp.add_argument("--x", type=float, default=0.0)
    sp.add_argument("--y", type=float, default=0.0)
    sp.add_argument("--z", type=float, default=0.0)
    sp.add_argument("--convention", choices=("spherical", "cartesian"),
                    default="cartesian")

    sp = subs.add_parser("kl", help="relative entropy D(p || q)")
    _add_common(sp, priors=("p", "q"))

    sp = subs.add_parser("compare",
                         help="noninformativity verdict for a prior pair")
    _add_common(sp, priors=("p", "q"), record=True, variant=True)

    sp = subs.add_parser("gain", help="information gain of a record")
    _add_common(sp, priors=("p",), record=True)

    sp = subs.add_parser("sweep", help="divergence under repeated records")
    _add_common(sp, priors=("p", "q"), record=True)
    sp.add_argument("--k-max", type=int, default=4)

    sp = subs.add_parser("search",
                         help="record minimizing a divergence objective")
    _add_common(sp, priors=("p", "q"))
    sp.add_argument("--max-total", type=int, default=6)
    sp.add_argument("--constraint", choices=("balanced-axes", "any"),
                    default="balanced-axes")
    sp.add_argument("--objective",
                    choices=("posterior-vs-prior", "prior-vs-posterior"),
                    default="posterior-vs-prior")

    sp = subs.add_parser("reproduce", help="recompute the published table")
    _add_common(sp)
    sp.add_argument("--table", choices=("all", "s21", "s22", "s23", "s3"),
                    default="all")
    return parser


def _run(args) -> int:
    cfg = _cfg(args)
    scale = _scale(args)

    def prior(label):
        return make_prior(label, R=args.R, cfg=cfg)

    if args.command == "priors":
        rows = []
        for label in PRIOR_LABELS:
            R = args.R
            if R is None:
                R = 1.0 if label in ("sld", "km", "mc", "ld") \
                    else DEFAULT_TRUNCATION_RADIUS
            p = make_prior(label, R=R, cfg=cfg)
            rows.append({"label": label, "support_radius": R,
                         "normalization": p.normalization})
        if args.format == "json":
            print(json.dumps(rows))
        elif args.format == "csv":
            print("label,support_radius,normalization")
            for r in rows:
                print(f"{r['label']},{r['support_radius']!r},"
                      f"{r['normalization']!r}")
        else:
            for r in rows:
                print(f"{r['label']:>4}  R={r['support_radius']:<14g}"
                      f"  c={r['normalization']:.6g}")
        return 0

    if args.command == "eval":
        p = prior(args.p)
        pt = BlochPoint(args.x, args.y, args.z)
        _emit_scalar(args, "density", p.density_at(pt, args.convention))
        return 0

    if args.command == "kl":
        value = infotheory.relative_entropy(prior(args.p), prior(args.q), cfg)
        _emit_scalar(args, "relative_entropy", value * scale)
        return 0

    if args.command == "compare":
        variant = Variant.PAPER if args.variant == "paper" else Variant.CLARKE
        report = infotheory.noninformativity_verdict(
            prior(args.p), prior(args.q), args.record, variant, cfg)
        doc = report.to_dict()
        for key in ("d_pq", "d_qp", "d_p_post_q", "d_q_post_p"):
            doc[key] *= scale
        doc["units"] = args.units
        if args.format == "json":
            print(json.dumps(doc))
        elif args.format == "csv":
            keys = list(doc)
            keys.remove("tolerances")
            print(",".join(keys))
            print(",".join(str(doc[k]) for k in keys))
        else:
            print(f"pair:       {doc['pair']}")
            print(f"record:     {doc['record']}")
            print(f"variant:    {doc['variant']}")
            print(f"D(p||q):    {doc['d_pq']:.6g} {args.units}")
            print(f"D(q||p):    {doc['d_qp']:.6g} {args.units}")
            print(f"posterior side 1: {doc['d_p_post_q']:.6g} {args.units}")
            print(f"posterior side 2: {doc['d_q_post_p']:.6g} {args.units}")
            print(f"verdict:    {doc['verdict']}")
        return 0

    if args.command == "gain":
        value = infotheory.information_gain(prior(args.p), args.record, cfg)
        _emit_scalar(args, "information_gain", value * scale)
        return 0

    if args.command == "sweep":
        base = args.record if args.record.counts else parse_record("balanced6")
        result = experiments.repeat_sweep(prior(args.p), prior(args.q),
                                          base, args.k_max, cfg)
        stats = [v * scale for v in result.statistics]
        if args.format == "json":
            print(json.dumps({"k_values": list(result.k_values),
                              "statistics": stats,
                              "argmin_k": result.argmin_k,
                              "units": args.units}))
        elif args.format == "csv":
            print("k,statistic")
            for k, v in zip(result.k_values, stats):
                print(f"{k},{v!r}")
        else:
            for k, v in zip(result.k_values, stats):
                mark = "  <- min" if k == result.argmin_k else ""
                print(f"k={k}: {v:.6g} {args.units}{mark}")
        return 0

    if args.command == "search":
        rec, value = experiments.search_min_record(
            prior(args.p), prior(args.q), args.max_total,
            constraint=args.constraint, objective=args.objective, cfg=cfg)
        value *= scale
        if args.format == "json":
            print(json.dumps({"record": rec.to_spec_string(),
                              "value": value, "units": args.units}))
        elif args.format == "csv":
            print("record,value,units")
            print(f"\"{rec.to_spec_string()}\",{value!r},{args.units}")
        else:
            print(f"record: {rec.to_spec_string()}")
            print(f"value:  {value:.6g} {args.units}")
        return 0

    if args.command == "reproduce":
        rows = experiments.reproduce(args.table, cfg)
        if args.format == "json":
            print(experiments.rows_to_json(rows))
        elif args.format == "csv":
            sys.stdout.write(experiments.rows_to_csv(rows))
        else:
            for r in rows:
                status = "pass" if r.passed else "FAIL"
                print(f"{status}  {r.quantity_id:<32} "
                      f"published={r.paper_value:.6g} "
                      f"computed={r.computed_value:.6g} "
                      f"rel={r.rel_diff:.2e} [{r.tolerance_class}]")
        return 0

    raise AssertionError("unreachable")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except BlochPriorsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

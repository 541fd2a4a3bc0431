"""Command-line front end.

Data goes to stdout (or --out), logs to stderr. Exit codes: 0 success,
1 gap-sim hypotheses not met, 2 degenerate fiber, 3 incomplete
factorization, 4 memory budget exceeded, 5 malformed lattice file,
6 inconsistent stabilizer classes.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from hyperpencil import gap, survey
from hyperpencil.config import (
    LatticeFormatError,
    format_coefficients,
    load_lattice,
    load_pencil,
    load_search_defaults,
)
from hyperpencil.exact import format_fraction
from hyperpencil.factor import factorize
from hyperpencil.pencil import DegenerateFiberError, delta, fiber_params, integral_disc
from hyperpencil.rank import IncompleteBadPrimesError, rank_bound, rank_report_dict
from hyperpencil.search import (
    SearchConfig,
    enumerate_points,
    points_to_csv,
    search_summary,
)

log = logging.getLogger("hyperpencil")

EXIT_GAP_UNMET = 1
EXIT_DEGENERATE = 2
EXIT_INCOMPLETE = 3
EXIT_MEMORY = 4
EXIT_MALFORMED = 5
EXIT_STABILIZER = 6


def _rational(text: str) -> Fraction:
    return Fraction(text.strip())


def _positive_rational(text: str) -> Fraction:
    value = _rational(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive rational, got {text}")
    return value


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _factor_pairs(n: int) -> list[list[int]]:
    return [list(pf) for pf in factorize(abs(n)).factors] if n else []


def _height(args, default: int) -> int:
    if args.height is not None:
        return args.height
    if args.pencil not in ("paper-example",):
        return load_search_defaults(args.pencil).get("height", default)
    return default


def cmd_disc(args) -> int:
    spec = load_pencil(args.pencil)
    dq = spec.disc_Q
    out = {
        "Q": format_coefficients(spec.Q),
        "d": spec.d,
        "genus": spec.g,
        "q": spec.q,
        "disc": format_fraction(dq),
        "sign": (dq > 0) - (dq < 0),
        "numerator_factorization": _factor_pairs(dq.numerator),
        "denominator_factorization": _factor_pairs(dq.denominator),
    }
    if args.s is not None:
        fp = fiber_params(spec, args.s.numerator, args.s.denominator)
        nd = integral_disc(spec, fp)
        out["s"] = format_fraction(fp.s)
        out["delta"] = format_fraction(delta(spec, fp))
        out["integral_disc"] = str(nd)
        out["integral_disc_factorization"] = _factor_pairs(nd)
    _emit(args, json.dumps(out, indent=1))
    return 0


def cmd_fiber(args) -> int:
    spec = load_pencil(args.pencil)
    s = args.s
    H = _height(args, 100)
    if args.rank_only:
        fp = fiber_params(spec, s.numerator, s.denominator)
        deg_k = survey.resolve_deg_k(spec, args.deg_k)
        rb = rank_bound(spec, fp, deg_k, args.pid_correction)
        _emit(args, json.dumps(rank_report_dict(rb, float(args.c))))
        return 0
    report = survey.fiber_report(spec, s.numerator, s.denominator, H, float(args.c),
                                 args.deg_k, args.pid_correction,
                                 use_sieve=not args.no_sieve, jobs=args.jobs)
    if args.points_csv:
        fp = fiber_params(spec, s.numerator, s.denominator)
        pts = enumerate_points(spec, fp, SearchConfig(H, use_sieve=not args.no_sieve),
                               jobs=args.jobs)
        with open(args.points_csv, "w", encoding="utf-8") as fh:
            fh.write(points_to_csv(pts))
        log.info("search summary: %s", json.dumps(search_summary(spec, fp, H, pts)))
    if args.format == "csv":
        _emit(args, survey.reports_to_csv([report]))
    else:
        _emit(args, json.dumps(report.to_dict()))
    return 0


def cmd_survey(args) -> int:
    spec = load_pencil(args.pencil)
    res = survey.survey(spec, args.s_from, args.s_to, _height(args, 50), float(args.c),
                        args.deg_k, args.pid_correction, use_sieve=not args.no_sieve,
                        jobs=args.jobs)
    summary = res.summary()
    if args.format == "json":
        lines = [json.dumps(r.to_dict()) for r in res.reports]
        lines.append(json.dumps({"summary": summary}))
        _emit(args, "\n".join(lines))
    else:
        _emit(args, survey.reports_to_csv(res.reports))
        log.info("summary: %s", json.dumps(summary))
    return 0


def cmd_omega_stats(args) -> int:
    spec = load_pencil(args.pencil)
    stats = survey.omega_stats(spec, args.s_to, args.max_n)
    _emit(args, json.dumps(stats.to_dict(), indent=1))
    return 0


def cmd_low_omega(args) -> int:
    spec = load_pencil(args.pencil)
    stats = survey.low_omega_stats(spec, args.s_to, args.t, args.s_from, args.max_n)
    out = {"t": args.t, "range": list(stats.range), "hits": stats.hits,
           "hit_count": len(stats.hits)}
    out.update(stats.extra)
    _emit(args, json.dumps(out))
    return 0


def cmd_density(args) -> int:
    spec = load_pencil(args.pencil)
    stats = survey.density(spec, args.s_to, float(args.A), _height(args, 50),
                           float(args.c), args.s_from, args.deg_k,
                           use_sieve=not args.no_sieve, jobs=args.jobs)
    _emit(args, json.dumps(stats.to_dict(), indent=1))
    return 0


def cmd_gap_sim(args) -> int:
    try:
        lat, vectors, classes, params = load_lattice(args.lattice)
    except LatticeFormatError as exc:
        log.error("%s", exc)
        return EXIT_MALFORMED
    overrides = {k: v for k, v in (("c", args.c_base), ("deg_C", args.deg_c),
                                   ("kappa", args.kappa), ("c3", args.c3),
                                   ("c2_ball", args.c2_ball)) if v is not None}
    base = params.to_dict() if params else {}
    base.update({k: str(v) if isinstance(v, Fraction) else v for k, v in overrides.items()})
    params = gap.GapParams(**{k: (int(v) if k == "deg_C" else Fraction(v))
                              for k, v in base.items()})
    try:
        trace = gap.vojta_mumford_chain(lat, vectors, classes, params)
    except gap.InconsistentStabilizerError as exc:
        log.error("%s", exc)
        return EXIT_STABILIZER
    except ValueError as exc:
        log.error("malformed instance: %s", exc)
        return EXIT_MALFORMED
    out = trace.to_dict()
    out["params"] = params.to_dict()
    out["total_bound"] = gap.total_bound(params, lat.rho)
    _emit(args, json.dumps(out, indent=1))
    return 0 if trace.hypotheses_hold and trace.bound_holds else EXIT_GAP_UNMET


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pencil", default="paper-example",
                        help="preset name or config file with a [pencil] section")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out", help="write data here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    def fiber_flags(p, height_default=None):
        p.add_argument("--height", type=int, default=height_default)
        p.add_argument("--c", type=_positive_rational, default=Fraction(1))
        p.add_argument("--deg-k", type=int, default=None)
        p.add_argument("--pid-correction", type=int, default=0)
        p.add_argument("--no-sieve", action="store_true",
                       help="check every candidate exactly, without residue filtering")

    parser = argparse.ArgumentParser(prog="hyperpencil", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("disc", parents=[common], help="discriminant of Q and of a fiber")
    p.add_argument("--s", type=_rational)
    p.set_defaults(func=cmd_disc)

    p = sub.add_parser("fiber", parents=[common], help="report for one fiber")
    p.add_argument("--s", type=_rational, required=True)
    fiber_flags(p)
    p.add_argument("--rank-only", action="store_true")
    p.add_argument("--points-csv", help="also write the points found as CSV")
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("survey", parents=[common], help="reports over a range of integer s")
    p.add_argument("--s-from", type=int, default=1)
    p.add_argument("--s-to", type=int, required=True)
    fiber_flags(p)
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("omega-stats", parents=[common], help="omega(n) statistics")
    p.add_argument("--s-to", type=int, required=True)
    p.add_argument("--max-n", type=int, default=survey.DEFAULT_MAX_SIEVE)
    p.set_defaults(func=cmd_omega_stats)

    p = sub.add_parser("low-omega", parents=[common], help="fibers with few prime factors")
    p.add_argument("--s-from", type=int, default=1)
    p.add_argument("--s-to", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--max-n", type=int, default=survey.DEFAULT_MAX_SIEVE)
    p.set_defaults(func=cmd_low_omega)

    p = sub.add_parser("density", parents=[common], help="share of fibers with few points")
    p.add_argument("--s-from", type=int, default=survey.DEFAULT_DENSITY_START)
    p.add_argument("--s-to", type=int, required=True)
    p.add_argument("--A", type=_positive_rational, default=Fraction(1))
    fiber_flags(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("gap-sim", parents=[common], help="run the counting chain on a lattice")
    p.add_argument("lattice", help="lattice instance JSON file")
    p.add_argument("--c", dest="c_base", type=_positive_rational)
    p.add_argument("--deg-c", type=int)
    p.add_argument("--kappa", type=_positive_rational)
    p.add_argument("--c3", type=_positive_rational)
    p.add_argument("--c2-ball", type=_positive_rational)
    p.set_defaults(func=cmd_gap_sim)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s",
                        force=True)
    if args.format is None:
        args.format = "csv" if args.command == "survey" else "json"
    try:
        return args.func(args)
    except DegenerateFiberError as exc:
        log.error("degenerate fiber: %s", exc)
        return EXIT_DEGENERATE
    except IncompleteBadPrimesError as exc:
        log.error("%s", exc)
        sys.stdout.write(json.dumps({"error": "incomplete factorization",
                                     "partial_bad_primes": exc.partial,
                                     "cofactor": str(exc.cofactor)}) + "\n")
        return EXIT_INCOMPLETE
    except survey.MemoryBudgetError as exc:
        log.error("%s", exc)
        return EXIT_MEMORY


if __name__ == "__main__":
    sys.exit(main())

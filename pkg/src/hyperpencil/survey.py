"""Experiment drivers: per-fiber reports, range surveys and omega statistics."""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

import numpy as np

from hyperpencil import kernels
from hyperpencil.exact import rational_roots
from hyperpencil.factor import factorize
from hyperpencil.pencil import (
    DegenerateFiberError,
    PencilSpec,
    fiber_params,
    integral_disc,
)
from hyperpencil.rank import COUNT_BOUND_NOTE, count_bound, detect_split, rank_bound
from hyperpencil.search import SearchConfig, enumerate_points, points_at_infinity

log = logging.getLogger(__name__)

DEFAULT_MAX_SIEVE = 50_000_000
DEFAULT_DENSITY_START = 16


class MemoryBudgetError(MemoryError):
    pass


@dataclass(frozen=True)
class CountReport:
    a: int
    b: int
    H_star: int
    height_bound: int
    genus: int
    affine_count: int
    weierstrass_count: int
    infinity_count: int
    bad_primes: tuple[int, ...]
    omega_disc: int
    deg_k: int
    pid_correction: int
    rank_bound: int
    count_bound: float
    c: float
    elapsed: float = field(compare=False, default=0.0)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["bad_primes"] = list(self.bad_primes)
        out["count_bound_note"] = COUNT_BOUND_NOTE
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "CountReport":
        kw = {f.name: data[f.name] for f in fields(cls)}
        kw["bad_primes"] = tuple(kw["bad_primes"])
        return cls(**kw)


CSV_FIELDS = tuple(f.name for f in fields(CountReport))


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in reports:
        row = []
        for name in CSV_FIELDS:
            v = getattr(r, name)
            if name == "bad_primes":
                v = ";".join(map(str, v))
            elif isinstance(v, float):
                v = repr(v)
            row.append(v)
        writer.writerow(row)
    return buf.getvalue()


def reports_from_csv(text: str) -> list[CountReport]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        kw = {}
        for f in fields(CountReport):
            raw = row[f.name]
            if f.name == "bad_primes":
                kw[f.name] = tuple(int(p) for p in raw.split(";") if p)
            elif f.name in ("count_bound", "c", "elapsed"):
                kw[f.name] = float(raw)
            else:
                kw[f.name] = int(raw)
        out.append(CountReport(**kw))
    return out


def resolve_deg_k(spec: PencilSpec, deg_k: Optional[int]) -> int:
    if deg_k is not None:
        return deg_k
    split = detect_split(spec)
    if split is None:
        raise ValueError("Q does not split over Q; pass [k:Q] explicitly")
    return split


def fiber_report(
    spec: PencilSpec,
    a: int,
    b: int = 1,
    H: int = 100,
    c: float = 1.0,
    deg_k: Optional[int] = None,
    pid_correction: int = 0,
    use_sieve: bool = True,
    jobs: int = 1,
) -> CountReport:
    """Rank bound, count bound and exhaustive affine count for one fiber."""
    start = time.perf_counter()
    fp = fiber_params(spec, a, b)
    rb = rank_bound(spec, fp, resolve_deg_k(spec, deg_k), pid_correction)
    points = enumerate_points(spec, fp, SearchConfig(H, use_sieve=use_sieve), jobs=jobs)
    return CountReport(
        a=fp.a, b=fp.b, H_star=fp.H_star, height_bound=H, genus=spec.g,
        affine_count=len(points),
        weierstrass_count=sum(p.is_weierstrass for p in points),
        infinity_count=points_at_infinity(spec),
        bad_primes=rb.bad_primes, omega_disc=rb.omega_disc, deg_k=rb.deg_k,
        pid_correction=rb.pid_correction, rank_bound=rb.rank_bound,
        count_bound=count_bound(fp, c), c=float(c),
        elapsed=time.perf_counter() - start,
    )


def _survey_one(args):
    spec, s, H, c, deg_k, pid_correction, use_sieve = args
    try:
        return fiber_report(spec, s, 1, H, c, deg_k, pid_correction, use_sieve)
    except DegenerateFiberError:
        return None
    except ArithmeticError as exc:
        return exc


@dataclass
class SurveyResult:
    reports: list[CountReport]
    skipped: list[int]
    failed: list[tuple[int, str]]

    def summary(self) -> dict:
        return {
            "fibers": len(self.reports),
            "skipped_degenerate": self.skipped,
            "failed": [list(f) for f in self.failed],
            "max_affine_count": max((r.affine_count for r in self.reports), default=0),
            "max_rank_bound": max((r.rank_bound for r in self.reports), default=0),
        }


def survey(spec: PencilSpec, s_from: int, s_to: int, H: int = 50, c: float = 1.0,
           deg_k: Optional[int] = None, pid_correction: int = 0,
           use_sieve: bool = True, jobs: int = 1) -> SurveyResult:
    """Reports for every integer s in [s_from, s_to], in increasing order.

    Degenerate fibers are skipped; per-fiber arithmetic failures are logged
    and the survey continues.
    """
    deg_k = resolve_deg_k(spec, deg_k)
    values = list(range(s_from, s_to + 1))
    tasks = [(spec, s, H, c, deg_k, pid_correction, use_sieve) for s in values]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_survey_one, tasks, chunksize=8))
    else:
        results = [_survey_one(t) for t in tasks]
    out = SurveyResult([], [], [])
    for s, r in zip(values, results):
        if r is None:
            log.info("skipping degenerate fiber s=%d", s)
            out.skipped.append(s)
        elif isinstance(r, Exception):
            log.warning("fiber s=%d failed: %s", s, r)
            out.failed.append((s, str(r)))
        else:
            out.reports.append(r)
    return out


# --- omega statistics ---------------------------------------------------------

@dataclass
class SurveyStats:
    range: tuple[int, int]
    samples: int
    mean: float
    variance: float
    max: int
    histogram: dict[int, int]
    hits: list[int] = field(default_factory=list)
    density: Optional[float] = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["range"] = list(self.range)
        out["histogram"] = {str(k): v for k, v in sorted(self.histogram.items())}
        return out


def _stats(values: np.ndarray, lo: int, hi: int) -> SurveyStats:
    if values.size == 0:
        return SurveyStats((lo, hi), 0, 0.0, 0.0, 0, {})
    counts = np.bincount(values)
    hist = {int(k): int(v) for k, v in enumerate(counts) if v}
    return SurveyStats((lo, hi), int(values.size), float(values.mean()),
                       float(values.var()), int(values.max()), hist)


def omega_values(n: int, max_n: int = DEFAULT_MAX_SIEVE) -> np.ndarray:
    """omega(k) for 0 <= k <= n by sieve."""
    if n > max_n:
        raise MemoryBudgetError(f"sieve length {n} exceeds budget {max_n}")
    return kernels.omega_sieve(n)


def integer_roots(spec: PencilSpec) -> Optional[list[int]]:
    """Roots of Q as integers when Q splits with integer roots, else None."""
    roots = rational_roots(spec.Q)
    if len(roots) == spec.Q.degree and all(r.denominator == 1 for r in roots):
        return [int(r) for r in roots]
    return None


def product_omegas(spec: PencilSpec, s_from: int, s_to: int,
                   max_n: int = DEFAULT_MAX_SIEVE) -> tuple[np.ndarray, np.ndarray]:
    """(s values, omega of the fiber product) over non-degenerate integers.

    With integer roots a_i the product is prod (s - a_i); otherwise omega is
    taken of the normalized discriminant (bq)^(2d-2) Delta(s).
    """
    roots = integer_roots(spec)
    if roots is None:
        s_vals, om = [], []
        for s in range(s_from, s_to + 1):
            try:
                fp = fiber_params(spec, s)
            except DegenerateFiberError:
                continue
            s_vals.append(s)
            om.append(factorize(abs(integral_disc(spec, fp))).omega)
        return np.asarray(s_vals, dtype=np.int64), np.asarray(om, dtype=np.int64)
    s_vals = np.arange(s_from, s_to + 1, dtype=np.int64)
    s_vals = s_vals[~np.isin(s_vals, roots)]
    if s_vals.size == 0:
        return s_vals, np.zeros(0, dtype=np.int64)
    limit = int(max(np.abs(s_vals.min() - max(roots)), np.abs(s_vals.max() - min(roots)), 2))
    if limit > max_n:
        raise MemoryBudgetError(f"sieve length {limit} exceeds budget {max_n}")
    return s_vals, kernels.product_omega(s_vals, np.asarray(roots, dtype=np.int64), limit)


def omega_stats(spec: PencilSpec, s_to: int, max_n: int = DEFAULT_MAX_SIEVE) -> SurveyStats:
    """omega(n) statistics for 1 <= n <= s_to, plus the fiber-product omegas."""
    om = omega_values(s_to, max_n)[1:]
    stats = _stats(om, 1, s_to)
    stats.extra["loglog"] = math.log(math.log(s_to)) if s_to >= 3 else None
    if integer_roots(spec) is not None:
        s_vals, pom = product_omegas(spec, 1, s_to, max_n)
        ps = _stats(pom, 1, s_to)
        stats.extra["product"] = {"samples": ps.samples, "mean": ps.mean,
                                  "variance": ps.variance, "max": ps.max,
                                  "histogram": ps.to_dict()["histogram"]}
    return stats


def low_omega(spec: PencilSpec, s_to: int, t: int, s_from: int = 1,
              max_n: int = DEFAULT_MAX_SIEVE) -> list[int]:
    """Non-degenerate integers s in [s_from, s_to] whose product has omega <= t."""
    s_vals, om = product_omegas(spec, s_from, s_to, max_n)
    return s_vals[om <= t].tolist()


def low_omega_stats(spec: PencilSpec, s_to: int, t: int, s_from: int = 1,
                    max_n: int = DEFAULT_MAX_SIEVE) -> SurveyStats:
    s_vals, om = product_omegas(spec, s_from, s_to, max_n)
    stats = _stats(om, s_from, s_to)
    stats.hits = s_vals[om <= t].tolist()
    if om.size:
        k = int(np.argmin(om))
        stats.extra["min_omega"] = int(om[k])
        stats.extra["argmin"] = int(s_vals[k])
    return stats


def density(spec: PencilSpec, s_to: int, A: float, H: int = 50, c: float = 1.0,
            s_from: int = DEFAULT_DENSITY_START, deg_k: Optional[int] = None,
            use_sieve: bool = True, jobs: int = 1) -> SurveyStats:
    """Share of non-degenerate s in [s_from, s_to] with affine count <= (log s)^A.

    Counts come from a height-H search, so they are lower bounds on the true
    counts; the result is an empirical, H-truncated surrogate.
    """
    if A < 1:
        raise ValueError("A must be >= 1")
    lo = max(s_from, 2)
    res = survey(spec, lo, s_to, H, c, deg_k=deg_k, use_sieve=use_sieve, jobs=jobs)
    counts = np.asarray([r.affine_count for r in res.reports], dtype=np.int64)
    ok = [r.affine_count <= math.log(r.a) ** A for r in res.reports]
    under_count_bound = [r.affine_count <= r.count_bound for r in res.reports]
    stats = _stats(counts, lo, s_to)
    n = len(ok)
    stats.density = sum(ok) / n if n else 1.0
    stats.extra.update({
        "A": A,
        "H": H,
        "zero_sample": n == 0,
        "h_truncated": True,
        "note": "affine counts are from a height-bounded search and are lower bounds",
        "fraction_under_count_bound": sum(under_count_bound) / n if n else 1.0,
        "c": c,
        "skipped_degenerate": res.skipped,
    })
    return stats

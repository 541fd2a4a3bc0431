"""Exhaustive search for affine rational points of bounded x-height on a fiber.

A candidate x = u/w (gcd(u, w) = 1, w >= 1, max(|u|, w) <= H) gives a point
iff the integer

    T(u, w) = bq * w^(d mod 2) * sum_i g_i u^i w^(d - i)

is a perfect square, where g_i are the coefficients of (bx - a) * qQ(x).
Since T is an integer polynomial in (u, w), T mod m depends only on
(u mod m, w mod m); the residue filter tabulates which classes can be
squares mod m and rejects the rest before the exact check.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from hyperpencil import kernels
from hyperpencil.exact import (
    RatPoly,
    as_fraction,
    is_square_rational,
    poly_eval,
    rational_roots,
)
from hyperpencil.factor import small_primes
from hyperpencil.pencil import FiberParams, PencilSpec, fiber_poly

POWER_OF_TWO_MODULUS = 64
DEFAULT_SIEVE_COUNT = 8
STRIP_WIDTH = 512


@dataclass(frozen=True, order=True)
class PointRecord:
    x: Fraction
    y: Fraction
    is_weierstrass: bool = field(compare=False)
    x_height: int = field(compare=False)


@dataclass(frozen=True)
class SearchConfig:
    height_bound: int
    sieve_primes: Optional[tuple[int, ...]] = None
    use_sieve: bool = True
    count_negatives: bool = True

    def __post_init__(self):
        if self.height_bound < 0:
            raise ValueError("height bound must be nonnegative")


@dataclass(frozen=True)
class ResidueFilter:
    moduli: np.ndarray
    offsets: np.ndarray
    tables: np.ndarray

    def table(self, m: int) -> np.ndarray:
        k = int(np.flatnonzero(self.moduli == m)[0])
        off = int(self.offsets[k])
        return self.tables[off : off + m * m].reshape(m, m)

    def admits(self, u: int, w: int) -> bool:
        for m, off in zip(self.moduli, self.offsets):
            if not self.tables[off + (u % m) * m + (w % m)]:
                return False
        return True


# --- integer model of the fiber ------------------------------------------

def cleared_form(spec: PencilSpec, fp: FiberParams) -> tuple[list[int], int, int]:
    """(coefficients of (bx - a)qQ(x), multiplier bq, degree d)."""
    qQ = spec.Q * spec.q
    g = RatPoly([-fp.a, fp.b]) * qQ
    coeffs = [int(c) for c in g.coeffs]
    return coeffs, fp.b * spec.q, spec.d


def square_test_value(coeffs: Sequence[int], mult: int, d: int, u: int, w: int) -> int:
    """T(u, w); x = u/w is the x-coordinate of a point iff T is a square."""
    acc = 0
    wp = 1
    for c in reversed(coeffs):
        # Horner in u with powers of w
        acc = acc * u + c * wp
        wp *= w
    # acc = sum c_i u^i w^(d - i) once all d + 1 coefficients are consumed
    return mult * acc * (w if d % 2 else 1)


def _y_from_square(t: int, mult: int, d: int, w: int) -> Fraction:
    # f(u/w) = T / (bq)^2 / w^(d + d mod 2)
    return Fraction(math.isqrt(t), mult * w ** ((d + d % 2) // 2))


def default_sieve_primes(spec: PencilSpec, fp: FiberParams,
                         count: int = DEFAULT_SIEVE_COUNT) -> tuple[int, ...]:
    bad = 2 * fp.b * spec.q
    out = []
    for p in small_primes(1000)[1:]:
        p = int(p)
        if bad % p:
            out.append(p)
            if len(out) == count:
                break
    return tuple(out)


def _squares_mod(m: int) -> np.ndarray:
    sq = np.zeros(m, dtype=bool)
    sq[(np.arange(m, dtype=np.int64) ** 2) % m] = True
    return sq


def residue_filter(spec: PencilSpec, fp: FiberParams,
                   primes: Optional[Iterable[int]] = None,
                   power_of_two: bool = True) -> ResidueFilter:
    """Tables of (u mod m, w mod m) classes for which T(u, w) can be a square mod m.

    Filter primes must not divide 2bq. A modulus-64 table handles the
    power-of-two residue test.
    """
    coeffs, mult, d = cleared_form(spec, fp)
    primes = tuple(default_sieve_primes(spec, fp) if primes is None else primes)
    for p in primes:
        if (2 * fp.b * spec.q) % p == 0:
            raise ValueError(f"sieve prime {p} divides 2bq")
    moduli = ([POWER_OF_TWO_MODULUS] if power_of_two else []) + list(primes)
    tables, offsets, off = [], [], 0
    for m in moduli:
        sq = _squares_mod(m)
        r = np.arange(m, dtype=np.int64)
        u, w = r[:, None], r[None, :]
        acc = np.zeros((m, m), dtype=np.int64)
        wp = np.ones_like(w)
        for c in reversed(coeffs):
            acc = (acc * u + (c % m) * wp) % m
            wp = (wp * w) % m
        t = (mult % m) * acc % m
        if d % 2:
            t = t * w % m
        tables.append(sq[t].ravel())
        offsets.append(off)
        off += m * m
    return ResidueFilter(
        moduli=np.asarray(moduli, dtype=np.int64),
        offsets=np.asarray(offsets, dtype=np.int64),
        tables=np.concatenate(tables) if tables else np.zeros(0, dtype=bool),
    )


def _records_for(x: Fraction, y: Fraction, count_negatives: bool) -> list[PointRecord]:
    h = max(abs(x.numerator), x.denominator)
    if y == 0:
        return [PointRecord(x, y, True, h)]
    recs = [PointRecord(x, y, False, h)]
    if count_negatives:
        recs.insert(0, PointRecord(x, -y, False, h))
    return recs


def _sieved_strip(args) -> list[tuple[int, int, Fraction]]:
    coeffs, mult, d, u_lo, u_hi, H, filt = args
    mask = kernels.survivor_mask(u_lo, u_hi, H, filt.moduli, filt.offsets, filt.tables)
    found = []
    ws, js = np.nonzero(mask)
    for i, j in zip(ws.tolist(), js.tolist()):
        w, u = i + 1, u_lo + j
        t = square_test_value(coeffs, mult, d, u, w)
        if t >= 0:
            r = math.isqrt(t)
            if r * r == t:
                found.append((w, u, _y_from_square(t, mult, d, w)))
    return found


def _brute_strip(args) -> list[tuple[int, int, Fraction]]:
    f, u_lo, u_hi, H = args
    found = []
    for w in range(1, H + 1):
        for u in range(u_lo, u_hi):
            if math.gcd(u, w) != 1:
                continue
            y = is_square_rational(poly_eval(f, Fraction(u, w)))
            if y is not None:
                found.append((w, u, y))
    return found


def _strips(H: int, width: int = STRIP_WIDTH) -> list[tuple[int, int]]:
    return [(lo, min(lo + width, H + 1)) for lo in range(-H, H + 1, width)]


def enumerate_points(spec: PencilSpec, fp: FiberParams, cfg: SearchConfig,
                     jobs: int = 1) -> list[PointRecord]:
    """All affine rational points with x-height <= H, in (w, u, y) order.

    With ``cfg.use_sieve`` False every candidate is checked with exact
    rational arithmetic and no filtering (the reference path).
    """
    H = cfg.height_bound
    if H < 1:
        return []
    if cfg.use_sieve:
        coeffs, mult, d = cleared_form(spec, fp)
        filt = residue_filter(spec, fp, cfg.sieve_primes)
        tasks = [(coeffs, mult, d, lo, hi, H, filt) for lo, hi in _strips(H)]
        worker = _sieved_strip
    else:
        f = fiber_poly(spec, fp)
        tasks = [(f, lo, hi, H) for lo, hi in _strips(H)]
        worker = _brute_strip
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(worker, tasks))
    else:
        chunks = [worker(t) for t in tasks]
    hits = sorted(h for chunk in chunks for h in chunk)
    records = []
    for w, u, y in hits:
        x = Fraction(u, w)
        assert verify_point(spec, fp, x, y)
        records.extend(_records_for(x, y, cfg.count_negatives))
    return records


def points_at_infinity(spec: PencilSpec) -> int:
    if spec.d % 2:
        return 1
    return 2 if is_square_rational(spec.Q.lc) not in (None, Fraction(0)) else 0


def weierstrass_points(spec: PencilSpec, fp: FiberParams) -> list[Fraction]:
    """Rational roots of (x - s)Q(x), sorted; always contains s."""
    return sorted(set(rational_roots(spec.Q)) | {fp.s})


def verify_point(spec: PencilSpec, fp: FiberParams, x, y) -> bool:
    x, y = as_fraction(x), as_fraction(y)
    return y * y == (x - fp.s) * poly_eval(spec.Q, x)


# --- output ----------------------------------------------------------------

CSV_COLUMNS = ("x_num", "x_den", "y_num", "y_den", "is_weierstrass")


def points_to_csv(records: Iterable[PointRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([r.x.numerator, r.x.denominator, r.y.numerator,
                         r.y.denominator, int(r.is_weierstrass)])
    return buf.getvalue()


def points_from_csv(text: str) -> list[PointRecord]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        x = Fraction(int(row["x_num"]), int(row["x_den"]))
        y = Fraction(int(row["y_num"]), int(row["y_den"]))
        out.append(PointRecord(x, y, bool(int(row["is_weierstrass"])),
                               max(abs(x.numerator), x.denominator)))
    return out


def search_summary(spec: PencilSpec, fp: FiberParams, H: int,
                   records: Sequence[PointRecord]) -> dict:
    return {
        "a": fp.a,
        "b": fp.b,
        "H": H,
        "affine_count": len(records),
        "weierstrass_count": sum(r.is_weierstrass for r in records),
        "infinity_count": points_at_infinity(spec),
    }


def summary_json(summary: dict) -> str:
    return json.dumps(summary, sort_keys=False)

"""Euclidean counting machinery on an abstract Mordell-Weil lattice.

Vectors are coordinate tuples of Fractions; the Gram matrix supplies the
height pairing. Every geometric predicate (coverage, separation, cone
membership, annulus and gap conditions) is decided exactly on squared
quantities with sign guards. Only the closed-form cardinality bounds are
evaluated in high precision.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Optional, Sequence

from hyperpencil.exact import as_fraction, format_fraction

Vector = tuple[Fraction, ...]

BOUND_DIGITS = 60
# The large-point threshold uses deg(C)^20, taken verbatim.
LARGE_POINT_DEG_EXPONENT = 20


class InconsistentStabilizerError(ValueError):
    """A stabilizer class is larger than deg(C)^2."""


class NotPositiveDefiniteError(ValueError):
    pass


@dataclass(frozen=True)
class GramLattice:
    rho: int
    gram: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.gram) != self.rho or any(len(row) != self.rho for row in self.gram):
            raise ValueError(f"gram matrix must be {self.rho}x{self.rho}")
        for i in range(self.rho):
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValueError("gram matrix must be symmetric")
        if any(m <= 0 for m in leading_minors(self.gram)):
            raise NotPositiveDefiniteError("gram matrix is not positive definite")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "GramLattice":
        gram = tuple(tuple(as_fraction(v) for v in row) for row in rows)
        return cls(len(gram), gram)

    @classmethod
    def identity(cls, rho: int) -> "GramLattice":
        return cls.from_rows([[int(i == j) for j in range(rho)] for i in range(rho)])

    def vector(self, coords: Sequence) -> Vector:
        v = tuple(as_fraction(c) for c in coords)
        if len(v) != self.rho:
            raise ValueError(f"expected a vector of length {self.rho}, got {len(v)}")
        return v


def leading_minors(gram: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Leading principal minors via fraction Gaussian elimination (no pivoting)."""
    n = len(gram)
    a = [list(row) for row in gram]
    minors = []
    det = Fraction(1)
    for k in range(n):
        if a[k][k] == 0:
            # a zero pivot means the k-th leading minor vanishes
            minors.append(Fraction(0))
            minors.extend([Fraction(0)] * (n - k - 1))
            return minors
        det *= a[k][k]
        minors.append(det)
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return minors


def inner(lat: GramLattice, u: Sequence, v: Sequence) -> Fraction:
    if len(u) != lat.rho or len(v) != lat.rho:
        raise ValueError("dimension mismatch")
    total = Fraction(0)
    for i, ui in enumerate(u):
        if ui:
            row = lat.gram[i]
            total += ui * sum((row[j] * vj for j, vj in enumerate(v) if vj), Fraction(0))
    return total


def norm_sq(lat: GramLattice, u: Sequence) -> Fraction:
    return inner(lat, u, u)


def dist_sq(lat: GramLattice, u: Sequence, v: Sequence) -> Fraction:
    diff = tuple(a - b for a, b in zip(u, v))
    return norm_sq(lat, diff)


def greedy_order(lat: GramLattice, vectors: Sequence[Vector]) -> list[int]:
    """Indices by decreasing norm_sq, ties broken by lexicographic coordinates."""
    norms = [norm_sq(lat, v) for v in vectors]
    return sorted(range(len(vectors)), key=lambda i: (-norms[i], vectors[i]))


# --- high-precision closed-form bounds --------------------------------------

def _dec(x: Fraction) -> Decimal:
    return Decimal(x.numerator) / Decimal(x.denominator)


def packing_bound(R_sq: Fraction, r_sq: Fraction, rho: int) -> Decimal:
    """(1 + 2R/r)^rho to BOUND_DIGITS significant digits."""
    with localcontext() as ctx:
        ctx.prec = BOUND_DIGITS
        ratio = (_dec(Fraction(R_sq)) / _dec(Fraction(r_sq))).sqrt()
        return (1 + 2 * ratio) ** rho


def within_guarded(count: int, bound: Decimal) -> bool:
    """count <= bound with a one-ulp upward guard on the bound."""
    with localcontext() as ctx:
        ctx.prec = BOUND_DIGITS
        return Decimal(count) <= bound.next_plus()


def _le_sqrt_form(k: int, a: Fraction, b: Fraction, m: Fraction) -> bool:
    # k <= a + b*sqrt(m) with b >= 0, m >= 0
    lhs = k - a
    return lhs <= 0 or lhs * lhs <= b * b * m


def cone_count_bound(c1, rho: int) -> int:
    """floor((1 + sqrt(8 c1))^rho), exactly."""
    m = 8 * as_fraction(c1)
    a, b = Fraction(1), Fraction(0)
    for _ in range(rho):
        a, b = a + b * m, a + b
    with localcontext() as ctx:
        ctx.prec = BOUND_DIGITS
        k = int((_dec(a) + _dec(b) * _dec(m).sqrt()).to_integral_value(rounding="ROUND_FLOOR"))
    while not _le_sqrt_form(k, a, b, m):
        k -= 1
    while _le_sqrt_form(k + 1, a, b, m):
        k += 1
    return k


# --- ball covering ----------------------------------------------------------

@dataclass(frozen=True)
class BallCover:
    centers: tuple[int, ...]
    assignment: tuple[int, ...]
    R_sq: Fraction
    r_sq: Fraction

    def bound(self, rho: int) -> Decimal:
        if not self.centers:
            return Decimal(0)
        return packing_bound(self.R_sq, self.r_sq, rho) if self.R_sq else Decimal(1)


def ball_cover(lat: GramLattice, M: Sequence[Vector], r_sq) -> BallCover:
    """Greedy maximal r-separated subset of M that covers M with r-balls.

    ``centers`` and ``assignment`` hold indices into M; every point is
    assigned to the first-chosen center within distance r.
    """
    r_sq = as_fraction(r_sq)
    if r_sq <= 0:
        raise ValueError("r^2 must be positive")
    M = [lat.vector(v) for v in M]
    R_sq = max((norm_sq(lat, v) for v in M), default=Fraction(0))
    centers: list[int] = []
    assignment = [-1] * len(M)
    for i in greedy_order(lat, M):
        for c in centers:
            if dist_sq(lat, M[i], M[c]) <= r_sq:
                assignment[i] = c
                break
        else:
            centers.append(i)
            assignment[i] = i
    return BallCover(tuple(centers), tuple(assignment), R_sq, r_sq)


# --- cone covering ----------------------------------------------------------

def same_cone(lat: GramLattice, u: Vector, v: Vector, c1) -> bool:
    """<u,v> >= (1 - 1/c1)|u||v|, decided exactly."""
    c1 = as_fraction(c1)
    ip = inner(lat, u, v)
    rhs_sq = (1 - 1 / c1) ** 2 * norm_sq(lat, u) * norm_sq(lat, v)
    return ip >= 0 and ip * ip >= rhs_sq


def _near_leader(lat, u, nu, leader, nl, t) -> bool:
    # |u/|u| - L/|L||^2 <= 1/(2 c1)  <=>  <u,L> >= t |u||L|, t = 1 - 1/(4 c1) > 0
    ip = inner(lat, u, leader)
    return ip >= 0 and ip * ip >= t * t * nu * nl


@dataclass(frozen=True)
class ConeAssignment:
    groups: tuple[tuple[int, ...], ...]
    leaders: tuple[int, ...]
    zero_group: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.groups)


def cone_assign(lat: GramLattice, vectors: Sequence[Vector], c1) -> ConeAssignment:
    """Partition vectors into cones of pairwise cosine >= 1 - 1/c1.

    Leaders form a maximal 1/sqrt(2 c1)-separated set of directions; each
    vector joins the first leader within that angular distance. Zero
    vectors form one extra group of their own.
    """
    c1 = as_fraction(c1)
    if c1 < 1:
        raise ValueError("c1 must be >= 1")
    t = 1 - 1 / (4 * c1)
    vectors = [lat.vector(v) for v in vectors]
    norms = [norm_sq(lat, v) for v in vectors]
    leaders: list[int] = []
    members: dict[int, list[int]] = {}
    zero: list[int] = []
    for i in greedy_order(lat, vectors):
        if norms[i] == 0:
            zero.append(i)
            continue
        for L in leaders:
            if _near_leader(lat, vectors[i], norms[i], vectors[L], norms[L], t):
                members[L].append(i)
                break
        else:
            leaders.append(i)
            members[i] = [i]
    groups = [tuple(members[L]) for L in leaders]
    if zero:
        groups.append(tuple(zero))
    return ConeAssignment(tuple(groups), tuple(leaders), tuple(zero))


# --- the Vojta-Mumford chain ------------------------------------------------

@dataclass(frozen=True)
class GapParams:
    c: Fraction = Fraction(1)
    deg_C: int = 1
    kappa: Fraction = Fraction(1)
    c3: Fraction = Fraction(1)
    c2_ball: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("c", "kappa", "c3", "c2_ball"):
            value = as_fraction(getattr(self, name))
            if value < 1:
                raise ValueError(f"{name} must be >= 1")
            object.__setattr__(self, name, value)
        if self.deg_C < 1:
            raise ValueError("deg_C must be a positive integer")

    @property
    def c1(self) -> Fraction:
        return self.c * self.deg_C**2

    @property
    def c2(self) -> Fraction:
        return self.c * self.deg_C**6

    @property
    def large_threshold(self) -> Fraction:
        return self.c * self.deg_C**LARGE_POINT_DEG_EXPONENT * self.kappa

    def to_dict(self) -> dict:
        return {"c": format_fraction(self.c), "deg_C": self.deg_C,
                "kappa": format_fraction(self.kappa), "c3": format_fraction(self.c3),
                "c2_ball": format_fraction(self.c2_ball)}


def certified_bound(params: GapParams, rho: int) -> Fraction:
    """deg^2 * floor((1 + sqrt(8 c1))^rho) * max{2, c c2 deg + 1}."""
    d = params.deg_C
    return d * d * cone_count_bound(params.c1, rho) * max(
        Fraction(2), params.c * params.c2 * d + 1)


@dataclass
class ChainTrace:
    rho: int
    N: int
    N_prime: int
    N_double_prime: int
    cone_count: int
    cone_count_bound: int
    certified_bound: Fraction
    cone_sizes: list[int] = field(default_factory=list)
    steps: list[dict] = field(default_factory=list)
    flags: dict[str, bool] = field(default_factory=dict)

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.flags.values())

    @property
    def bound_holds(self) -> bool:
        return self.N <= self.certified_bound

    def to_dict(self) -> dict:
        return {
            "rho": self.rho,
            "N": self.N,
            "N_prime": self.N_prime,
            "N_double_prime": self.N_double_prime,
            "cone_count": self.cone_count,
            "cone_count_bound": self.cone_count_bound,
            "cone_sizes": self.cone_sizes,
            "certified_bound": format_fraction(self.certified_bound),
            "bound_holds": self.bound_holds,
            "flags": self.flags,
            "steps": self.steps,
        }


def _check_classes(n: int, classes: Optional[Sequence[Sequence[int]]], cap: int):
    if classes is None:
        return [[i] for i in range(n)]
    seen = sorted(i for cls in classes for i in cls)
    if seen != list(range(n)):
        raise ValueError("stabilizer classes must partition the point indices")
    for cls in classes:
        if len(cls) > cap:
            raise InconsistentStabilizerError(
                f"stabilizer class of size {len(cls)} exceeds deg(C)^2 = {cap}")
    return [list(cls) for cls in classes]


def vojta_mumford_chain(
    lat: GramLattice,
    points: Sequence[Vector],
    stab_classes: Optional[Sequence[Sequence[int]]],
    params: GapParams,
) -> ChainTrace:
    """Run the large-point counting argument on a concrete point set.

    Steps: keep points with |P|^2 > c deg^20 kappa (N); keep one point per
    stabilizer class (N'); split into cones; in each cone check the
    annulus |P_1| <= |P_i| <= c2 |P_1| and that consecutive norms differ by
    more than |P|/(c deg). When all checks pass, N <= certified bound.
    """
    points = [lat.vector(p) for p in points]
    d = params.deg_C
    classes = _check_classes(len(points), stab_classes, d * d)
    norms = [norm_sq(lat, p) for p in points]
    thr = params.large_threshold
    large = {i for i, nsq in enumerate(norms) if nsq > thr}
    N = len(large)

    reps = []
    for cls in classes:
        inside = [i for i in cls if i in large]
        if inside:
            reps.append(min(inside, key=lambda i: (norms[i], i)))
    reps.sort()
    N_prime = len(reps)

    cones = cone_assign(lat, [points[i] for i in reps], params.c1) if reps else None
    groups = [[reps[j] for j in g] for g in cones.groups] if cones else []
    bound_cones = cone_count_bound(params.c1, lat.rho)

    c2 = params.c2
    gap_factor_sq = (1 + 1 / (params.c * d)) ** 2
    vojta, mumford = [], []
    for g in groups:
        ordered = sorted(g, key=lambda i: (norms[i], points[i]))
        ns = [norms[i] for i in ordered]
        vojta.append(ns[-1] <= c2 * c2 * ns[0])
        mumford.append(all(b > a * gap_factor_sq for a, b in zip(ns, ns[1:])))
    sizes = [len(g) for g in groups]
    N_dp = max(sizes, default=0)
    B = certified_bound(params, lat.rho)

    flags = {
        "stabilizer_consistent": True,
        "cone_count_within_bound": len(groups) <= bound_cones,
        "vojta_annulus": all(vojta),
        "mumford_gap": all(mumford),
    }
    steps = [
        {"step": "large_point_filter", "threshold": format_fraction(thr),
         "input": len(points), "N": N},
        {"step": "stabilizer_thinning", "classes": len(classes), "N_prime": N_prime,
         "ok": N <= d * d * N_prime},
        {"step": "cone_pigeonhole", "cone_count": len(groups), "bound": bound_cones,
         "cone_sizes": sizes, "ok": flags["cone_count_within_bound"]},
        {"step": "vojta_annulus", "c2": format_fraction(c2), "per_cone": vojta,
         "ok": flags["vojta_annulus"]},
        {"step": "mumford_gap", "per_cone": mumford, "N_double_prime": N_dp,
         "ok": flags["mumford_gap"]},
    ]
    trace = ChainTrace(rho=lat.rho, N=N, N_prime=N_prime, N_double_prime=N_dp,
                       cone_count=len(groups), cone_count_bound=bound_cones,
                       certified_bound=B, cone_sizes=sizes, steps=steps, flags=flags)
    if trace.hypotheses_hold and not trace.bound_holds:
        raise AssertionError(f"N = {N} exceeds certified bound {B} with all hypotheses met")
    return trace


def synthetic_chain_instance(
    lat: GramLattice,
    params: GapParams,
    rng: random.Random,
    class_size: Optional[int] = None,
) -> tuple[list[Vector], list[list[int]]]:
    """Points satisfying every chain hypothesis, plus stabilizer classes.

    Two opposite rays through a random direction carry geometric norm
    progressions with ratio just above 1 + 1/(c deg), as long as they stay
    inside the Vojta annulus. Each point is repeated (same image in the
    real span) to fill a stabilizer class of ``class_size`` members.
    """
    d = params.deg_C
    class_size = class_size or rng.randint(1, d * d)
    while True:
        v = tuple(Fraction(rng.randint(-5, 5)) for _ in range(lat.rho))
        if any(v):
            break
    nv = norm_sq(lat, v)
    step = 1 + 1 / (params.c * d) + Fraction(1, rng.randint(8, 64))
    t1 = Fraction(1)
    while t1 * t1 * nv <= params.large_threshold:
        t1 *= 2
    scales = [t1]
    while scales[-1] * step <= params.c2 * t1:
        scales.append(scales[-1] * step)
    points, classes = [], []
    for sign in (1, -1):
        for s in scales:
            vec = tuple(sign * s * x for x in v)
            cls = []
            for _ in range(class_size):
                cls.append(len(points))
                points.append(vec)
            classes.append(cls)
    return points, classes


# --- large/small point combination ------------------------------------------

def _small_points(params: GapParams, rho: int, h_scale) -> Decimal:
    h = Fraction(1) if h_scale is None else as_fraction(h_scale)
    if h <= 0:
        raise ValueError("height scale must be positive")
    # R^2 = c1 h and r^2 = h / c3; the ratio is formed exactly so h cancels
    ratio_sq = (params.c1 * h) / (h / params.c3)
    return _dec(params.c2_ball) * (1 + 2 * _dec(ratio_sq).sqrt()) ** rho


def small_point_bound(params: GapParams, rho: int, h_scale=None) -> float:
    """c2_ball * (1 + 2 R/r)^rho for the ball-covering of the small points."""
    with localcontext() as ctx:
        ctx.prec = BOUND_DIGITS
        return float(_small_points(params, rho, h_scale))


def total_bound(params: GapParams, rho: int, h_scale=None) -> float:
    """c1^rho large points plus the small-point bound."""
    with localcontext() as ctx:
        ctx.prec = BOUND_DIGITS
        return float(_dec(params.c1) ** rho + _small_points(params, rho, h_scale))

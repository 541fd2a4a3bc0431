"""Bad primes, the Mordell-Weil rank upper bound, and the point-count bound shape."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

from hyperpencil.exact import rational_roots
from hyperpencil.factor import (
    DEFAULT_RHO_BUDGET,
    DEFAULT_TRIAL_BOUND,
    IncompleteFactorizationError,
    factorize,
)
from hyperpencil.pencil import FiberParams, PencilSpec, integral_disc

COUNT_BOUND_NOTE = "up to the ineffective constant c"


class IncompleteBadPrimesError(ArithmeticError):
    """Factoring the normalized discriminant ran out of budget.

    ``partial`` is the sorted set of bad primes found before giving up.
    """

    def __init__(self, partial: list[int], cofactor: int):
        super().__init__(f"incomplete factorization, unsplit cofactor {cofactor}")
        self.partial = partial
        self.cofactor = cofactor


@dataclass(frozen=True)
class RankBoundReport:
    fiber: FiberParams
    genus: int
    bad_primes: tuple[int, ...]
    omega_disc: int
    deg_k: int
    pid_correction: int
    p_prime_count: int
    rank_bound: int
    conditional: bool = field(default=False)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["fiber"] = {"a": self.fiber.a, "b": self.fiber.b}
        out["bad_primes"] = list(self.bad_primes)
        return out


def _prime_set(n: int, trial_bound: int, rho_budget: int) -> tuple[list[int], int]:
    f = factorize(abs(n), trial_bound=trial_bound, rho_budget=rho_budget)
    return f.primes, f.omega


def bad_primes(
    spec: PencilSpec,
    fp: FiberParams,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
    rho_budget: int = DEFAULT_RHO_BUDGET,
) -> list[int]:
    """Primes dividing 2bq or (bq)^(2d-2) Delta(s), sorted."""
    return _bad_primes_and_omega(spec, fp, trial_bound, rho_budget)[0]


def _bad_primes_and_omega(spec, fp, trial_bound, rho_budget):
    primes = set(factorize(2 * fp.b * spec.q).primes)
    try:
        disc_primes, omega_disc = _prime_set(integral_disc(spec, fp), trial_bound, rho_budget)
    except IncompleteFactorizationError as exc:
        partial = sorted(primes | {p for p, _ in exc.partial})
        raise IncompleteBadPrimesError(partial, exc.cofactor) from exc
    return sorted(primes | set(disc_primes)), omega_disc


def rank_bound_value(genus: int, deg_k: int, n_bad: int, pid_correction: int = 0) -> int:
    """2g([k:Q] - 1 + #P') with #P' taken at its upper bound [k:Q]#P + correction."""
    return 2 * genus * (deg_k - 1 + deg_k * n_bad + pid_correction)


def rank_bound(
    spec: PencilSpec,
    fp: FiberParams,
    deg_k: int = 1,
    pid_correction: int = 0,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
    rho_budget: int = DEFAULT_RHO_BUDGET,
) -> RankBoundReport:
    if deg_k < 1:
        raise ValueError("deg_k must be >= 1")
    if pid_correction < 0:
        raise ValueError("pid_correction must be >= 0")
    primes, omega_disc = _bad_primes_and_omega(spec, fp, trial_bound, rho_budget)
    p_prime = deg_k * len(primes) + pid_correction
    return RankBoundReport(
        fiber=fp,
        genus=spec.g,
        bad_primes=tuple(primes),
        omega_disc=omega_disc,
        deg_k=deg_k,
        pid_correction=pid_correction,
        p_prime_count=p_prime,
        rank_bound=rank_bound_value(spec.g, deg_k, len(primes), pid_correction),
        # over Q the ring of P-integers is always a PID
        conditional=deg_k > 1,
    )


def count_bound_exponent(H_star: int, c: float) -> float:
    """log of H*^(c / log log H*)."""
    log_h = math.log(H_star)
    return c * log_h / math.log(log_h)


def count_bound(fp_or_height, c: float = 1.0) -> float:
    """H*(s)^(c / log log H*(s)); returns inf if the float range overflows."""
    if c <= 0:
        raise ValueError("c must be positive")
    H = fp_or_height.H_star if isinstance(fp_or_height, FiberParams) else int(fp_or_height)
    if H < 3:
        raise ValueError("H* is at least 3 by definition")
    try:
        return math.exp(count_bound_exponent(H, c))
    except OverflowError:
        return math.inf


def detect_split(spec: PencilSpec) -> Optional[int]:
    """1 when Q splits over Q into distinct linear factors, else None."""
    if len(rational_roots(spec.Q)) == spec.Q.degree:
        return 1
    return None


RANK_JSON_FIELDS = ("a", "b", "H_star", "bad_primes", "omega_disc", "deg_k",
                    "pid_correction", "rank_bound", "count_bound", "c")


def rank_report_dict(report: RankBoundReport, c: float = 1.0) -> dict:
    """The per-fiber JSON record; keys are exactly RANK_JSON_FIELDS."""
    fp = report.fiber
    return {
        "a": fp.a,
        "b": fp.b,
        "H_star": fp.H_star,
        "bad_primes": list(report.bad_primes),
        "omega_disc": report.omega_disc,
        "deg_k": report.deg_k,
        "pid_correction": report.pid_correction,
        "rank_bound": report.rank_bound,
        "count_bound": count_bound(fp, c),
        "c": float(c),
    }

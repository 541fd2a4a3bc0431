"""The hyperelliptic family y^2 = (x - s) Q(x) and its per-fiber invariants."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from hyperpencil.exact import (
    RatPoly,
    as_fraction,
    discriminant,
    is_squarefree,
    poly_eval,
)

PAPER_EXAMPLE_ROOTS = (0, 2, 6, 8, 12, 20)


class InvalidPencilError(ValueError):
    pass


class GenusTooSmallError(InvalidPencilError):
    pass


class DegenerateFiberError(ValueError):
    """The parameter s is a root of Q, so (x - s)Q(x) is not squarefree."""


@dataclass(frozen=True)
class PencilSpec:
    Q: RatPoly
    q: int
    d: int
    g: int
    disc_Q: Fraction

    @property
    def fiber_degree(self) -> int:
        return self.d


@dataclass(frozen=True)
class FiberParams:
    a: int
    b: int

    @property
    def s(self) -> Fraction:
        return Fraction(self.a, self.b)

    @property
    def H_star(self) -> int:
        return max(3, abs(self.a), self.b)


def genus_for_degree(d: int) -> int:
    return (d - 2) // 2 if d % 2 == 0 else (d - 1) // 2


def new_pencil(Q: RatPoly) -> PencilSpec:
    """Validate Q and derive q, the curve degree d and the genus g.

    Raises
    ------
    GenusTooSmallError
        If deg Q < 4.
    InvalidPencilError
        If Q is not squarefree.
    """
    if Q.is_zero() or Q.degree < 4:
        deg = "zero" if Q.is_zero() else Q.degree
        raise GenusTooSmallError(f"Q must have degree >= 4 (got {deg})")
    if not is_squarefree(Q):
        raise InvalidPencilError("Q must be squarefree")
    d = Q.degree + 1
    return PencilSpec(Q=Q, q=Q.denominator_lcm(), d=d, g=genus_for_degree(d),
                      disc_Q=discriminant(Q))


def paper_example() -> PencilSpec:
    """Q = x(x-2)(x-6)(x-8)(x-12)(x-20)."""
    return new_pencil(RatPoly.from_roots(PAPER_EXAMPLE_ROOTS))


def fiber_params(spec: PencilSpec, a: int, b: int = 1) -> FiberParams:
    if b < 1:
        raise ValueError(f"denominator must be positive, got {b}")
    g = math.gcd(a, b)
    a, b = a // g, b // g
    if poly_eval(spec.Q, Fraction(a, b)) == 0:
        raise DegenerateFiberError(f"Q({a}/{b}) = 0")
    return FiberParams(a, b)


def fiber_from_rational(spec: PencilSpec, s) -> FiberParams:
    s = as_fraction(s)
    return fiber_params(spec, s.numerator, s.denominator)


def fiber_poly(spec: PencilSpec, fp: FiberParams) -> RatPoly:
    """(x - s) Q(x)."""
    return RatPoly([-fp.s, 1]) * spec.Q


def delta(spec: PencilSpec, fp: FiberParams) -> Fraction:
    """Discriminant of (x - s)Q(x) via disc(Q) * Q(s)^2."""
    return spec.disc_Q * poly_eval(spec.Q, fp.s) ** 2


def delta_via_resultant(spec: PencilSpec, fp: FiberParams) -> Fraction:
    """Same quantity through the resultant of the fiber polynomial; slow path."""
    return discriminant(fiber_poly(spec, fp))


def integral_disc(spec: PencilSpec, fp: FiberParams) -> int:
    """(bq)^(2d-2) * Delta(a/b), which is always an integer."""
    value = (fp.b * spec.q) ** (2 * spec.d - 2) * delta(spec, fp)
    if value.denominator != 1:
        raise ArithmeticError(f"normalized discriminant {value} is not integral")
    return value.numerator

"""Exact univariate polynomial algebra over the rationals.

Rationals are :class:`fractions.Fraction` (always reduced, positive
denominator, zero is ``0/1``). Polynomials are immutable :class:`RatPoly`
values with coefficients stored lowest degree first; the zero polynomial
has no coefficients.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Optional, Sequence, Union

Rational = Union[int, Fraction]


class DegenerateInputError(ValueError):
    """Raised when an operation is undefined for its input (zero/constant)."""


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions and ``"num/den"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_fraction(value: Fraction) -> str:
    """Canonical ``num/den`` string (denominator always written)."""
    return f"{value.numerator}/{value.denominator}"


class RatPoly:
    """Immutable polynomial in one variable with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [as_fraction(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("RatPoly is immutable")

    def __reduce__(self):
        return (RatPoly, (self.coeffs,))

    @classmethod
    def from_roots(cls, roots: Iterable[Rational], lead: Rational = 1) -> "RatPoly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-as_fraction(r), 1])
        return p

    @classmethod
    def x(cls) -> "RatPoly":
        return cls([0, 1])

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if not self.coeffs:
            raise DegenerateInputError("degree of the zero polynomial is undefined")
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        if not self.coeffs:
            raise DegenerateInputError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RatPoly([{', '.join(format_fraction(c) for c in self.coeffs)}])"

    def __add__(self, other: "RatPoly") -> "RatPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RatPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "RatPoly":
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __mul__(self, other) -> "RatPoly":
        if not isinstance(other, RatPoly):
            k = as_fraction(other)
            return RatPoly(c * k for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def derivative(self) -> "RatPoly":
        return RatPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def __call__(self, x: Rational) -> Fraction:
        return poly_eval(self, x)

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quo = [Fraction(0)] * max(len(rem) - dq, 0)
        lc = other.lc
        for k in range(len(rem) - 1, dq - 1, -1):
            t = rem[k] / lc
            if t:
                quo[k - dq] = t
                for i, c in enumerate(other.coeffs):
                    rem[k - dq + i] -= t * c
        return RatPoly(quo), RatPoly(rem[:dq])

    def monic(self) -> "RatPoly":
        return self * (1 / self.lc)

    def denominator_lcm(self) -> int:
        """Smallest positive q with q*P in Z[x]."""
        return reduce(lambda a, c: a * c.denominator // math.gcd(a, c.denominator),
                      self.coeffs, 1)

    def integer_coeffs(self) -> list[int]:
        q = self.denominator_lcm()
        return [int(c * q) for c in self.coeffs]


def poly_eval(p: RatPoly, x: Rational) -> Fraction:
    """Horner evaluation; the zero polynomial evaluates to 0."""
    x = as_fraction(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_gcd(p: RatPoly, q: RatPoly) -> RatPoly:
    """Monic gcd over Q (zero if both inputs are zero)."""
    while not q.is_zero():
        p, q = q, p.divmod(q)[1]
    return p if p.is_zero() else p.monic()


# --- integer polynomial helpers for the subresultant sequence -------------

def _content(a: Sequence[int]) -> int:
    return reduce(math.gcd, a, 0)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b over Z."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [c * lb for c in r]
        for i, c in enumerate(b):
            r[shift + i] -= lr * c
        r.pop()
        _trim(r)
        e -= 1
    return [c * lb**e for c in r]


def _resultant_zz(a: list[int], b: list[int]) -> int:
    """Subresultant PRS resultant of two nonzero integer polynomials."""
    da, db = len(a) - 1, len(b) - 1
    if da == 0:
        return a[0] ** db
    if db == 0:
        return b[0] ** da
    ca, cb = _content(a), _content(b)
    a = [c // ca for c in a]
    b = [c // cb for c in b]
    t = ca**db * cb**da
    s = 1
    if da < db:
        a, b = b, a
        if da % 2 and db % 2:
            s = -s
    g = h = Fraction(1)
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = _prem(a, b)
        a = b
        div = g * h**delta
        b = [Fraction(c) / div for c in r]
        assert all(c.denominator == 1 for c in b)
        b = _trim([int(c) for c in b])
        if not b:
            return 0
        g = Fraction(a[-1])
        h = h ** (1 - delta) * g**delta
        if len(b) == 1:
            da = len(a) - 1
            h = h ** (1 - da) * Fraction(b[0]) ** da
            assert h.denominator == 1
            return s * t * int(h)


def resultant(p: RatPoly, q: RatPoly) -> Fraction:
    """Res(P, Q) = lc(P)^deg(Q) * prod Q(alpha) over the roots alpha of P.

    Denominators are cleared first and the resultant of the integer
    polynomials is computed with the subresultant pseudo-remainder sequence.
    If exactly one argument is zero the result is 0.
    """
    if p.is_zero() and q.is_zero():
        raise DegenerateInputError("resultant of two zero polynomials")
    if p.is_zero() or q.is_zero():
        return Fraction(0)
    dp, dq = p.denominator_lcm(), q.denominator_lcm()
    r = _resultant_zz(p.integer_coeffs(), q.integer_coeffs())
    # Res(dp*P, dq*Q) = dp^deg Q * dq^deg P * Res(P, Q)
    return Fraction(r, dp ** q.degree * dq ** p.degree)


def discriminant(p: RatPoly) -> Fraction:
    if p.is_zero() or p.degree < 1:
        raise DegenerateInputError("discriminant needs degree >= 1")
    d = p.degree
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * resultant(p, p.derivative()) / p.lc


def is_squarefree(p: RatPoly) -> bool:
    return poly_gcd(p, p.derivative()).degree == 0


def _divisors(n: int) -> list[int]:
    from hyperpencil.factor import factorize

    divs = [1]
    for prime, exp in factorize(abs(n)).factors:
        divs = [d * prime**k for d in divs for k in range(exp + 1)]
    return sorted(divs)


def rational_roots(p: RatPoly) -> list[Fraction]:
    """Distinct rational roots, sorted ascending."""
    if p.is_zero():
        raise DegenerateInputError("the zero polynomial has every rational root")
    coeffs = p.integer_coeffs()
    roots = []
    # strip the root at zero
    k = 0
    while coeffs[k] == 0:
        k += 1
    if k:
        roots.append(Fraction(0))
    coeffs = coeffs[k:]
    if len(coeffs) > 1:
        g = _content(coeffs)
        coeffs = [c // g for c in coeffs]
        reduced = RatPoly(coeffs)
        for num in _divisors(coeffs[0]):
            for den in _divisors(coeffs[-1]):
                if math.gcd(num, den) != 1:
                    continue
                for cand in (Fraction(num, den), Fraction(-num, den)):
                    if poly_eval(reduced, cand) == 0:
                        roots.append(cand)
    return sorted(set(roots))


def is_square_rational(r: Rational) -> Optional[Fraction]:
    """Nonnegative rational square root of ``r``, or None if there is none."""
    r = as_fraction(r)
    if r < 0:
        return None
    n, d = r.numerator, r.denominator
    sn, sd = math.isqrt(n), math.isqrt(d)
    if sn * sn == n and sd * sd == d:
        return Fraction(sn, sd)
    return None

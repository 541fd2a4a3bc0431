"""Integer primality and factorization.

Primality is deterministic Miller-Rabin below 3.3e24 and Baillie-PSW plus
extra Miller-Rabin rounds above. Factorization is trial division to a
configurable bound followed by Pollard-rho (Brent variant, fixed seeds).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

DEFAULT_TRIAL_BOUND = 10**6
DEFAULT_RHO_BUDGET = 2_000_000

# Deterministic for n < 3.317e24 (Sorenson & Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981
_EXTRA_BASES = (43, 47, 53, 59, 61, 67, 71)


class IncompleteFactorizationError(ArithmeticError):
    """Raised when Pollard-rho exhausts its iteration budget.

    ``partial`` holds the prime factors found so far and ``cofactor`` the
    composite part left unsplit.
    """

    def __init__(self, n: int, partial: list[tuple[int, int]], cofactor: int):
        super().__init__(f"could not finish factoring {n}: composite cofactor {cofactor}")
        self.n = n
        self.partial = partial
        self.cofactor = cofactor


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...] = field(default=())

    @property
    def omega(self) -> int:
        return len(self.factors)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def product(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas_probable_prime(n: int) -> bool:
    # Selfridge method A parameters
    d = 5
    while True:
        j = _jacobi(d, n)
        if j == -1:
            break
        if j == 0 and abs(d) != n:
            return False
        d = -d - 2 if d > 0 else -d + 2
        if d == 13 and math.isqrt(n) ** 2 == n:
            return False
    p, q = 1, (1 - d) // 4
    k, s = n + 1, 0
    while k % 2 == 0:
        k //= 2
        s += 1

    def half(v: int) -> int:
        return (v + n if v % 2 else v) // 2 % n

    # binary ladder for U_k, V_k
    u, v, qk = 1, p, q % n
    for bit in bin(k)[3:]:
        u, v = u * v % n, (v * v - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            u, v = half(p * u + v), half(d * u + p * v)
            qk = qk * q % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if v == 0:
            return True
    return False


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < _MR_DETERMINISTIC_LIMIT:
        return all(_strong_probable_prime(n, a) for a in _MR_BASES)
    if not _strong_probable_prime(n, 2) or not _strong_lucas_probable_prime(n):
        return False
    return all(_strong_probable_prime(n, a) for a in _MR_BASES[1:] + _EXTRA_BASES)


@lru_cache(maxsize=4)
def small_primes(bound: int) -> np.ndarray:
    """Primes <= bound by the sieve of Eratosthenes."""
    if bound < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(bound + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(bound) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


@lru_cache(maxsize=4)
def _prime_blocks(bound: int, size: int = 128) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Primes <= bound in blocks, each paired with the product of its members."""
    primes = small_primes(bound).tolist()
    blocks = []
    for i in range(0, len(primes), size):
        block = tuple(primes[i : i + size])
        blocks.append((block, math.prod(block)))
    return tuple(blocks)


def _brent(n: int, budget: int) -> tuple[int, int]:
    """One nontrivial factor of odd composite n; returns (factor, iterations)."""
    used = 0
    for c in range(1, 64):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            used += r
            r *= 2
            if used > budget:
                return 0, used
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g, used
    return 0, used


def factorize(
    n: int,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
    rho_budget: int = DEFAULT_RHO_BUDGET,
) -> Factorization:
    """Complete prime factorization of a positive integer.

    Raises
    ------
    IncompleteFactorizationError
        If a composite cofactor survives ``rho_budget`` Pollard-rho steps.
    """
    if n < 1:
        raise ValueError(f"factorize expects a positive integer, got {n}")
    original = n
    found: dict[int, int] = {}
    for block, block_product in _prime_blocks(trial_bound):
        if block[0] * block[0] > n:
            break
        if math.gcd(n, block_product) == 1:
            continue
        for p in block:
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                found[p] = e
    if n > 1 and (n <= trial_bound * trial_bound or is_prime(n)):
        found[n] = found.get(n, 0) + 1
        n = 1

    stack = [n] if n > 1 else []
    spent = 0
    while stack:
        m = stack.pop()
        if is_prime(m):
            found[m] = found.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        f, used = _brent(m, rho_budget - spent)
        spent += used
        if not f:
            partial = sorted(found.items())
            raise IncompleteFactorizationError(original, partial, m)
        stack += [f, m // f]
    return Factorization(original, tuple(sorted(found.items())))


def omega(n: int) -> int:
    """Number of distinct prime divisors of |n| (omega(0) is undefined)."""
    if n == 0:
        raise ValueError("omega(0) is undefined")
    return factorize(abs(n)).omega

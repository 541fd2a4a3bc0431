"""numba-compiled kernels. Same signatures and results as the numpy versions."""

import numpy as np
from numba import njit


@njit(cache=True)
def _gcd(a, b):
    a = abs(a)
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _survivor_mask(u_lo, u_hi, w_hi, moduli, offsets, tables):
    width = u_hi - u_lo
    mask = np.zeros((w_hi, width), dtype=np.bool_)
    nm = moduli.shape[0]
    for i in range(w_hi):
        w = i + 1
        for j in range(width):
            u = u_lo + j
            if _gcd(u, w) != 1:
                continue
            ok = True
            for k in range(nm):
                m = moduli[k]
                if not tables[offsets[k] + (u % m) * m + (w % m)]:
                    ok = False
                    break
            mask[i, j] = ok
    return mask


def survivor_mask(u_lo, u_hi, w_hi, moduli, offsets, tables):
    return _survivor_mask(
        np.int64(u_lo), np.int64(u_hi), np.int64(w_hi),
        np.asarray(moduli, dtype=np.int64), np.asarray(offsets, dtype=np.int64),
        np.asarray(tables, dtype=np.bool_),
    )


@njit(cache=True)
def _spf_sieve(n):
    spf = np.zeros(n + 1, dtype=np.int64)
    primes = np.zeros(n + 1, dtype=np.int64)
    count = 0
    for i in range(2, n + 1):
        if spf[i] == 0:
            spf[i] = i
            primes[count] = i
            count += 1
        for k in range(count):
            p = primes[k]
            if p > spf[i] or p * i > n:
                break
            spf[p * i] = p
    return spf


def spf_sieve(n):
    return _spf_sieve(np.int64(n))


@njit(cache=True)
def _omega_from_spf(spf):
    n = spf.shape[0] - 1
    omega = np.zeros(n + 1, dtype=np.int64)
    for k in range(2, n + 1):
        p = spf[k]
        rest = k // p
        omega[k] = omega[rest] + (1 if spf[rest] != p else 0)
    return omega


def omega_sieve(n):
    return _omega_from_spf(_spf_sieve(np.int64(n)))


@njit(cache=True)
def _product_omega(s_values, roots, spf):
    out = np.zeros(s_values.shape[0], dtype=np.int64)
    seen = np.zeros(64 * roots.shape[0], dtype=np.int64)
    for i in range(s_values.shape[0]):
        count = 0
        for j in range(roots.shape[0]):
            v = abs(s_values[i] - roots[j])
            while v > 1:
                p = spf[v]
                while v % p == 0:
                    v //= p
                new = True
                for k in range(count):
                    if seen[k] == p:
                        new = False
                        break
                if new:
                    seen[count] = p
                    count += 1
        out[i] = count
    return out


def product_omega(s_values, roots, limit):
    spf = _spf_sieve(np.int64(limit))
    return _product_omega(
        np.asarray(s_values, dtype=np.int64), np.asarray(roots, dtype=np.int64), spf
    )

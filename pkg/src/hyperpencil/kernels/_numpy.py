"""Pure-numpy kernels. Same signatures and results as the numba versions."""

import numpy as np


def survivor_mask(u_lo, u_hi, w_hi, moduli, offsets, tables):
    """Candidates x = u/w surviving coprimality and every residue table.

    Returns a bool array of shape (w_hi, u_hi - u_lo); row i is w = i + 1.
    """
    u = np.arange(u_lo, u_hi, dtype=np.int64)[None, :]
    w = np.arange(1, w_hi + 1, dtype=np.int64)[:, None]
    mask = np.gcd(u, w) == 1
    for m, off in zip(moduli, offsets):
        idx = off + (u % m) * m + (w % m)
        mask &= tables[idx]
    return mask


def spf_sieve(n):
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if spf[p] == 0:
            block = spf[p::p]
            block[block == 0] = p
    return spf


def omega_sieve(n):
    """omega[k] = number of distinct primes dividing k, for 0 <= k <= n."""
    omega = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if omega[p] == 0:
            omega[p::p] += 1
    return omega


def product_omega(s_values, roots, limit):
    """omega(prod_i (s - roots[i])) for each s; no s may equal a root.

    ``limit`` must bound every |s - roots[i]|.
    """
    s_values = np.asarray(s_values, dtype=np.int64)
    if s_values.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    # count over the whole span [s0, s1], then pick out the requested s
    s0 = int(s_values.min())
    span = np.zeros(int(s_values.max()) - s0 + 1, dtype=np.int64)
    residues_all = np.asarray(roots, dtype=np.int64)
    is_comp = np.zeros(limit + 1, dtype=bool)
    for p in range(2, limit + 1):
        if is_comp[p]:
            continue
        is_comp[p * p :: p] = True
        # distinct residues mod p hit disjoint progressions
        for r in np.unique(residues_all % p):
            span[(int(r) - s0) % p :: p] += 1
    return span[s_values - s0]

import numpy as np
import pytest

from hyperpencil import kernels
from hyperpencil.pencil import fiber_params
from hyperpencil.search import residue_filter
from oracles import trial_division


def test_omega_matches_trial_division(impl):
    om = impl.omega_sieve(1000)
    assert om[1] == 0
    for n in range(2, 1001):
        assert om[n] == len(trial_division(n)), n


def test_spf_sieve(impl):
    spf = impl.spf_sieve(500)
    for n in range(2, 501):
        assert spf[n] == trial_division(n)[0][0]


def test_product_omega_matches_direct(impl):
    roots = np.array([0, 2, 6, 8, 12, 20])
    s = np.array([s for s in range(21, 400)] + [-5, -100], dtype=np.int64)
    got = impl.product_omega(s, roots, 500)
    for si, g in zip(s.tolist(), got.tolist()):
        primes = set()
        for r in roots.tolist():
            primes |= {p for p, _ in trial_division(abs(si - r))}
        assert g == len(primes)


@pytest.mark.skipif(kernels.numba_impl is None, reason="numba not installed")
def test_backends_agree_on_survivor_mask(sextic):
    filt = residue_filter(sextic, fiber_params(sextic, 7))
    args = (-300, 212, 300, filt.moduli, filt.offsets, filt.tables)
    a = kernels.numpy_impl.survivor_mask(*args)
    b = kernels.numba_impl.survivor_mask(*args)
    assert a.shape == (300, 512)
    assert np.array_equal(a, b)


@pytest.mark.skipif(kernels.numba_impl is None, reason="numba not installed")
def test_backends_agree_on_sieves():
    n = 20000
    assert np.array_equal(kernels.numpy_impl.omega_sieve(n), kernels.numba_impl.omega_sieve(n))
    assert np.array_equal(kernels.numpy_impl.spf_sieve(n), kernels.numba_impl.spf_sieve(n))
    s = np.arange(21, 5000)
    roots = np.array([0, 2, 6, 8, 12, 20])
    assert np.array_equal(kernels.numpy_impl.product_omega(s, roots, 5000),
                          kernels.numba_impl.product_omega(s, roots, 5000))


def test_survivor_mask_coprimality(impl):
    empty = np.zeros(0, dtype=np.int64)
    mask = impl.survivor_mask(-3, 4, 4, empty, empty, np.zeros(0, dtype=bool))
    for i in range(4):
        for j, u in enumerate(range(-3, 4)):
            assert mask[i, j] == (np.gcd(u, i + 1) == 1)


def test_env_flag_selects_numpy(monkeypatch):
    import importlib

    monkeypatch.setenv(kernels.ENV_FLAG, "1")
    try:
        mod = importlib.reload(kernels)
        assert mod.BACKEND_NAME == "numpy"
    finally:
        monkeypatch.delenv(kernels.ENV_FLAG)
        importlib.reload(kernels)

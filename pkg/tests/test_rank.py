import math

import pytest

from hyperpencil.exact import RatPoly
from hyperpencil.factor import factorize
from hyperpencil.pencil import DegenerateFiberError, fiber_params, new_pencil
from hyperpencil.rank import (
    RANK_JSON_FIELDS,
    IncompleteBadPrimesError,
    bad_primes,
    count_bound,
    detect_split,
    rank_bound,
    rank_bound_value,
    rank_report_dict,
)
from oracles import trial_division

ROOTS = [0, 2, 6, 8, 12, 20]


def _fibers(spec, values):
    for s in values:
        try:
            yield s, fiber_params(spec, s)
        except DegenerateFiberError:
            pass


def test_bad_primes_at_one(sextic):
    fp = fiber_params(sextic, 1)
    assert bad_primes(sextic, fp) == [2, 3, 5, 7, 11, 19]
    n = 2**48 * 3**14 * 5**4 * 7**2 * (5 * 7 * 11 * 19) ** 2
    assert [p for p, _ in trial_division(n)] == [2, 3, 5, 7, 11, 19]


def test_rank_bound_at_one(sextic):
    rep = rank_bound(sextic, fiber_params(sextic, 1))
    assert rep.rank_bound == 36 and rep.omega_disc == 6
    assert rep.rank_bound <= 6 * rep.omega_disc
    assert not rep.conditional


def test_rank_bound_formula():
    assert rank_bound_value(3, 1, 1, 0) == 6
    assert rank_bound_value(2, 1, 1) == 4
    assert rank_bound_value(3, 2, 4, 1) == 2 * 3 * (2 - 1 + 8 + 1)


def test_rank_bound_conditional_flag(sextic):
    rep = rank_bound(sextic, fiber_params(sextic, 1), deg_k=2, pid_correction=1)
    assert rep.conditional and rep.p_prime_count == 2 * 6 + 1
    with pytest.raises(ValueError):
        rank_bound(sextic, fiber_params(sextic, 1), deg_k=0)
    with pytest.raises(ValueError):
        rank_bound(sextic, fiber_params(sextic, 1), pid_correction=-1)


def test_rank_bound_monotone():
    for n_bad in range(1, 6):
        for deg_k in range(1, 4):
            for corr in range(3):
                base = rank_bound_value(3, deg_k, n_bad, corr)
                assert base <= rank_bound_value(3, deg_k + 1, n_bad, corr)
                assert base <= rank_bound_value(3, deg_k, n_bad + 1, corr)
                assert base <= rank_bound_value(3, deg_k, n_bad, corr + 1)


def test_bad_primes_contain_two_and_stay_in_product_primes(sextic):
    for s, fp in _fibers(sextic, range(-60, 400)):
        primes = bad_primes(sextic, fp)
        assert 2 in primes
        prod = math.prod(s - a for a in ROOTS)
        allowed = {2, 3, 5, 7} | {p for p, _ in trial_division(abs(prod))}
        assert set(primes) <= allowed
        rep = rank_bound(sextic, fp)
        assert rep.rank_bound <= 6 * (len({p for p, _ in trial_division(abs(prod))}) + 4)


def test_bad_primes_rational_fiber():
    spec = new_pencil(RatPoly(["1/2", "0", "1/3", "0", "5/4"]))
    fp = fiber_params(spec, 5, 7)
    primes = bad_primes(spec, fp)
    assert {2, 3, 7} <= set(primes)
    nd = (7 * 12) ** (2 * spec.d - 2) * spec.disc_Q * spec.Q(fp.s) ** 2
    assert set(primes) == {p for p, _ in trial_division(2 * 7 * 12)} | set(factorize(abs(int(nd))).primes)


def test_bad_primes_growth_regression(sextic):
    # #P / (log H / log log H) stays under a fixed constant up to H* = 10^6
    worst = 0.0
    for s, fp in _fibers(sextic, list(range(3, 2000)) + list(range(10**6 - 2000, 10**6))):
        h = fp.H_star
        worst = max(worst, len(bad_primes(sextic, fp)) / (math.log(h) / math.log(math.log(h))))
    assert worst < 8.0


def test_incomplete_factorization_reports_partial(sextic):
    fp = fiber_params(sextic, 4_294_967_291 * 4_294_967_279 + 1)
    try:
        rank_bound(sextic, fp, trial_bound=10, rho_budget=1)
    except IncompleteBadPrimesError as exc:
        assert 2 in exc.partial
    else:
        pytest.skip("cofactor happened to split within budget")


def test_count_bound():
    assert count_bound(3, 1.0) == pytest.approx(3 ** (1 / math.log(math.log(3))))
    assert math.isfinite(count_bound(3, 1.0))
    with pytest.raises(ValueError):
        count_bound(3, 0)


def test_count_bound_at_e_to_e():
    # log log H = 1 makes the bound e^(c e); checked through the exponent
    from hyperpencil.rank import count_bound_exponent
    assert count_bound_exponent(math.exp(math.e), 1.5) == pytest.approx(1.5 * math.e)


def test_count_bound_monotone_from_16():
    values = [count_bound(h, 1.0) for h in range(16, 20000)]
    assert all(a <= b for a, b in zip(values, values[1:]))
    # below e^e it decreases
    assert count_bound(3, 1.0) > count_bound(10, 1.0)


def test_detect_split(sextic):
    assert detect_split(sextic) == 1
    assert detect_split(new_pencil(RatPoly([1, 0, 0, 0, 1]))) is None
    assert detect_split(new_pencil(RatPoly.from_roots([]) * RatPoly([-2, 0, 1]) * RatPoly([-3, 0, 1]))) is None


def test_rank_report_json_fields(sextic):
    rep = rank_bound(sextic, fiber_params(sextic, 1))
    out = rank_report_dict(rep, 1.0)
    assert tuple(out) == RANK_JSON_FIELDS
    assert out["bad_primes"] == [2, 3, 5, 7, 11, 19] and out["rank_bound"] == 36

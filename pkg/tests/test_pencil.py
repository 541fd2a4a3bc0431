import random
from fractions import Fraction

import pytest

from hyperpencil.config import dump_pencil, format_coefficients, load_pencil, parse_coefficients
from hyperpencil.exact import RatPoly, discriminant
from hyperpencil.pencil import (
    DegenerateFiberError,
    GenusTooSmallError,
    InvalidPencilError,
    delta,
    delta_via_resultant,
    fiber_params,
    fiber_poly,
    integral_disc,
    new_pencil,
)
from oracles import root_product_disc
from conftest import random_squarefree_pencil

ROOTS = [0, 2, 6, 8, 12, 20]
DISC_CONST = 2**48 * 3**14 * 5**4 * 7**2


def test_preset_pencil_invariants(sextic):
    assert (sextic.d, sextic.g, sextic.q) == (7, 3, 1)
    assert sextic.disc_Q == DISC_CONST


def test_quartic_pencil(quartic):
    assert (quartic.d, quartic.g, quartic.q) == (5, 2, 1)


def test_rejects_bad_pencils():
    with pytest.raises(GenusTooSmallError):
        new_pencil(RatPoly([0, 0, 1]))
    with pytest.raises(InvalidPencilError):
        new_pencil(RatPoly.from_roots([1, 1, 2, 3, 4]))


@pytest.mark.parametrize("deg,genus", [(4, 2), (5, 2), (6, 3), (7, 3), (8, 4)])
def test_genus_formula(deg, genus):
    spec = new_pencil(RatPoly.from_roots(range(1, deg + 1)))
    assert spec.g == genus and spec.d == deg + 1


def test_q_clears_denominators():
    spec = new_pencil(RatPoly(["1/2", "0", "1/3", "0", "5/4"]))
    assert spec.q == 12


def test_fiber_params(sextic):
    assert fiber_params(sextic, 1, 1).H_star == 3
    assert fiber_params(sextic, 3, 2).H_star == 3
    fp = fiber_params(sextic, 6, 4)
    assert (fp.a, fp.b) == (3, 2)
    with pytest.raises(DegenerateFiberError):
        fiber_params(sextic, 2, 1)
    with pytest.raises(ValueError):
        fiber_params(sextic, 1, 0)


def test_fiber_poly(quartic, sextic):
    assert fiber_poly(quartic, fiber_params(quartic, 0)) == RatPoly([0, -1, 0, 0, 0, 1])
    assert fiber_poly(quartic, fiber_params(quartic, 1, 2)) == \
        RatPoly(["1/2", "-1", "0", "0", "-1/2", "1"])
    assert fiber_poly(sextic, fiber_params(sextic, 1)) == RatPoly.from_roots([1] + ROOTS)


@pytest.mark.parametrize("s", [1, 3, -7, 25, Fraction(5, 3), Fraction(-11, 7)])
def test_delta_exponent_pattern_by_root_oracle(sextic, s):
    """Every factor (s - a_i) appears squared, including (s - 12)."""
    brute = root_product_disc([s] + ROOTS)
    squared = DISC_CONST
    for a in ROOTS:
        squared *= (Fraction(s) - a) ** 2
    fp = fiber_params(sextic, Fraction(s).numerator, Fraction(s).denominator)
    assert delta(sextic, fp) == brute == squared
    # the form with (s - 12) to the first power does not match
    assert squared / (Fraction(s) - 12) != brute


def test_delta_quartic_half(quartic):
    fp = fiber_params(quartic, 1, 2)
    assert delta(quartic, fp) == delta_via_resultant(quartic, fp)
    assert delta(quartic, fp) == discriminant(quartic.Q) * quartic.Q(Fraction(1, 2)) ** 2


def test_delta_two_paths_random_pencils():
    rng = random.Random(11)
    for _ in range(5):
        spec = random_squarefree_pencil(rng, rng.choice([4, 5, 6]))
        for _ in range(40):
            try:
                fp = fiber_params(spec, rng.randint(-50, 50), rng.randint(1, 9))
            except DegenerateFiberError:
                continue
            assert delta(spec, fp) == delta_via_resultant(spec, fp)
            nd = integral_disc(spec, fp)
            assert isinstance(nd, int) and nd != 0
            assert fp.H_star >= 3


def test_integral_disc_examples(sextic, quartic):
    assert integral_disc(sextic, fiber_params(sextic, 1)) == \
        DISC_CONST * (1 * 1 * 25 * 49 * 121 * 361)
    fp = fiber_params(quartic, 1, 2)
    assert integral_disc(quartic, fp) == 2**8 * delta(quartic, fp)
    fp = fiber_params(sextic, 5)
    assert integral_disc(sextic, fp) == delta(sextic, fp)


def test_pencil_config_round_trip(tmp_path, sextic):
    spec = new_pencil(RatPoly(["-1/3", "7/2", "0", "-5/9", "11/4", "3/7"]))
    for s in (spec, sextic):
        path = tmp_path / "pencil.ini"
        path.write_text(dump_pencil(s))
        loaded = load_pencil(str(path))
        assert loaded.Q.coeffs == s.Q.coeffs
        assert format_coefficients(loaded.Q) == format_coefficients(s.Q)
        assert path.read_text() == dump_pencil(loaded)


def test_parse_coefficients():
    assert parse_coefficients("1/2, -3/1,\n 0/1, 4") == RatPoly(["1/2", -3, 0, 4])
    assert load_pencil("paper-example").Q == RatPoly.from_roots(ROOTS)

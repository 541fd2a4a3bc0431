import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hyperpencil import kernels
from hyperpencil.exact import RatPoly
from hyperpencil.pencil import new_pencil, paper_example

KERNEL_IMPLS = [kernels.numpy_impl] + ([kernels.numba_impl] if kernels.numba_impl else [])


@pytest.fixture(scope="session")
def sextic():
    return paper_example()


@pytest.fixture(scope="session")
def quartic():
    """Q = x^4 - 1, the curve y^2 = x^5 - x at s = 0."""
    return new_pencil(RatPoly([-1, 0, 0, 0, 1]))


@pytest.fixture(params=KERNEL_IMPLS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def impl(request):
    return request.param


def random_squarefree_pencil(rng: random.Random, degree: int):
    while True:
        coeffs = [f"{rng.randint(-9, 9)}/{rng.randint(1, 4)}" for _ in range(degree)]
        coeffs.append(f"{rng.choice([-3, -2, -1, 1, 2, 3])}/{rng.randint(1, 3)}")
        try:
            return new_pencil(RatPoly(coeffs))
        except ValueError:
            continue


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)

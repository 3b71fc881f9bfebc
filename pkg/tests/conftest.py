import numpy as np
import pytest

from seasonal_ruin import build_model, pmf_from_table, pmf_poisson


def ex1():
    return build_model([pmf_poisson(0.3), pmf_poisson(1.4)])


def ex2():
    return build_model([pmf_poisson(1 / 2), pmf_poisson(2 / 3), pmf_poisson(4 / 5)])


def ex3():
    return build_model([pmf_from_table([0.8, 0.2]), pmf_from_table([0.2, 0.8]),
                        pmf_from_table([0.8, 0.2])])


def ex4():
    return build_model([pmf_poisson(k / (k + 1)) for k in range(1, 11)])


GOLDEN = {"ex1": ex1, "ex2": ex2, "ex3": ex3, "ex4": ex4}


@pytest.fixture(params=sorted(GOLDEN))
def golden(request):
    return GOLDEN[request.param]()


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)

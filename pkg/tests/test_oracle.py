import numpy as np
import pytest

from seasonal_ruin import (
    InvalidArgument,
    NetProfitViolation,
    OracleTooLarge,
    build_model,
    enum_survival_exact,
    homogeneous_finite_ruin,
    homogeneous_ultimate_ruin,
    mc_survival,
    mc_survival_ultimate,
    pmf_from_table,
    pmf_poisson,
    point_mass,
    survival_finite,
    survival_ultimate,
)
from conftest import ex1, ex3, ex4

LATTICE = pmf_from_table([0.5, 0, 0.5])


def test_homogeneous_finite_examples():
    assert all(homogeneous_finite_ruin(point_mass(0), u, t) == 0 for u in range(3) for t in (1, 4))
    assert homogeneous_finite_ruin(LATTICE, 0, 1) == 0.5
    # ruin at step 1 w.p. 1/2, else surplus 1 and ruin at step 2 w.p. 1/2
    assert homogeneous_finite_ruin(LATTICE, 0, 2) == pytest.approx(0.75, abs=1e-15)
    with pytest.raises(InvalidArgument):
        homogeneous_finite_ruin(LATTICE, 0, 0)


def test_homogeneous_finite_matches_dp(rng):
    for _ in range(20):
        pmf = pmf_from_table(rng.random(int(rng.integers(1, 6))))
        ft = survival_finite(build_model([pmf]), 6, 8)
        for u in range(7):
            for t in (1, 2, 5, 8):
                assert abs(1 - homogeneous_finite_ruin(pmf, u, t) - ft[u, t]) < 1e-12


def test_homogeneous_ultimate_examples():
    pmf = pmf_from_table([0.5, 0.3, 0.15, 0.05])
    assert homogeneous_ultimate_ruin(pmf, 3)[0] == pytest.approx(pmf.mean)
    assert not homogeneous_ultimate_ruin(point_mass(0), 5).any()
    assert homogeneous_ultimate_ruin(pmf_poisson(0.5), 0)[0] == pytest.approx(0.5, abs=1e-13)
    psi = homogeneous_ultimate_ruin(pmf_from_table([0.6, 0, 0.4]), 2)
    assert psi[1] == pytest.approx(2 / 3, abs=1e-15)
    with pytest.raises(NetProfitViolation):
        homogeneous_ultimate_ruin(pmf_poisson(1.0), 3)


def test_homogeneous_ultimate_matches_long_horizon(rng):
    for _ in range(5):
        w = rng.random(4)
        w[0] += 4.0  # keeps E Z < 1
        pmf = pmf_from_table(w)
        psi = homogeneous_ultimate_ruin(pmf, 6)
        ft = survival_finite(build_model([pmf]), 6, 4000)[:, -1]
        assert np.max(np.abs(1 - psi - ft)) < 1e-9


def test_enum_examples():
    m = ex3()
    assert abs(enum_survival_exact(m, 1, 3) - survival_finite(m, 1, 3)[1, 3]) < 1e-14
    m = ex1()
    assert enum_survival_exact(m, 0, 1) == pytest.approx(m.claims[0].z0, abs=1e-15)
    assert enum_survival_exact(m, 4, 0) == 1.0
    small = build_model([pmf_from_table(c.probs[:4]) for c in ex4().claims])
    assert abs(enum_survival_exact(small, 1, 5) - survival_finite(small, 1, 5)[1, 5]) < 1e-12
    with pytest.raises(OracleTooLarge):
        enum_survival_exact(ex4(), 0, 10)


def test_mc_basics():
    m = ex4()
    est = mc_survival(m, 10_000, 10, 1000, seed=1)
    assert est.point == 1.0 and est.half_width_95 == 0.0
    a = mc_survival(m, 2, 7, 3000, seed=9)
    assert a == mc_survival(m, 2, 7, 3000, seed=9)
    assert a.point == mc_survival(m, 2, 7, 3000, seed=9, chunk=101).point
    assert a.point != mc_survival(m, 2, 7, 3000, seed=10).point
    # the first paths do not depend on how many paths follow
    one = mc_survival(m, 0, 10, 1, seed=3).point
    assert one == mc_survival(m, 0, 10, 1, seed=3, chunk=1).point
    with pytest.raises(InvalidArgument):
        mc_survival(m, 0, 10, 0, seed=3)


def test_mc_coverage_over_seeds():
    m = ex4()
    exact = survival_finite(m, 0, 10)[0, 10]
    hits = sum(mc_survival(m, 0, 10, 20_000, seed=s).covers(exact, scale=3) for s in range(100))
    assert hits >= 99


def test_mc_example1_long_horizon():
    m = ex1()
    est = mc_survival(m, 0, 500, 1_000_000, seed=2024)
    ft = survival_finite(m, 0, 500)[0, 500]
    assert abs(ft - 0.2023378868) < 1e-5
    assert est.covers(ft, scale=3)


def test_mc_ultimate_proxy():
    m = ex1()
    phi = survival_ultimate(m, 1).phi[1]
    est = mc_survival_ultimate(m, 1, 200_000, seed=5)
    assert abs(est.point - phi) <= 3 * est.half_width_95 + 1e-4
    with pytest.raises(OracleTooLarge):
        mc_survival_ultimate(m, 1, 10, seed=5, bound=1e-30, t_cap=64)

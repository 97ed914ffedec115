import math

import numpy as np
import pytest

from subopt.apps.chebyshev import alternation_check, cheby_objective, get_target, golden_max, inner_max

SIN2X, SIN_INTERVAL = get_target("sin2x")


def test_inner_max_monotone_error():
    x, v = inner_max([1.0, 0.0], lambda x: 0.0 * x, (0.0, 1.0))
    assert x == pytest.approx(1.0) and v == pytest.approx(1.0)


def test_inner_max_vertex():
    # p_c(x) = x^2 - 0.6x - 0.91, target 0: |e| = -(x-0.3)^2 + 1 on [0,1].
    x, v = inner_max([1.0, -0.6, 0.09 - 1.0], lambda x: 0.0 * x, (0.0, 1.0))
    assert abs(x - 0.3) <= 1e-8 and v == pytest.approx(1.0)


def test_inner_max_sine():
    _, v = inner_max([0.0], SIN2X, SIN_INTERVAL)
    assert abs(v - 1.0) <= 1e-10


def test_golden_max_peak():
    x, v = golden_max(lambda t: -(t - 0.25) ** 2, 0.0, 1.0, 1e-10)
    assert abs(x - 0.25) < 1e-6 and v <= 0


def test_zero_target():
    oracle = cheby_objective(lambda x: 0.0 * x, (-1.0, 1.0), 2)
    assert oracle.value(np.zeros(3)) == 0.0
    g = oracle.subgradient(np.zeros(3))
    assert g[-1] == 1.0


def test_degree_zero_sine():
    oracle = cheby_objective(SIN2X, SIN_INTERVAL, 0)
    assert oracle.value(np.zeros(1)) == pytest.approx(1.0, abs=1e-10)
    x, _ = oracle.locate(np.zeros(1))
    assert min(abs(x - t) for t in (math.pi / 4, -3 * math.pi / 4, -math.pi / 4, 3 * math.pi / 4)) < 1e-4


def test_published_cubic():
    # Four-digit coefficients sit slightly off the optimum, so h is a little
    # above the optimal 0.8718.
    oracle = cheby_objective(SIN2X, SIN_INTERVAL, 3)
    assert oracle.value(np.array([-0.0472, 0.0, 0.1923, 0.0])) == pytest.approx(0.87374, abs=1e-5)


def test_subgradient_matches_finite_differences():
    oracle = cheby_objective(SIN2X, SIN_INTERVAL, 2)
    c = np.array([0.05, -0.1, 0.2])
    fd = [(oracle.value(c + 1e-7 * e) - oracle.value(c - 1e-7 * e)) / 2e-7 for e in np.eye(3)]
    np.testing.assert_allclose(oracle.subgradient(c), fd, rtol=1e-4)


def test_finer_grid_never_finds_less():
    rng = np.random.default_rng(4)
    for _ in range(10):
        c = rng.uniform(-0.2, 0.2, 4)
        coarse = cheby_objective(SIN2X, SIN_INTERVAL, 3, grid_size=200, refine_tol=1e-14).value(c)
        fine = cheby_objective(SIN2X, SIN_INTERVAL, 3, grid_size=4000, refine_tol=1e-14).value(c)
        assert coarse <= fine + 1e-12


def test_alternation_counts():
    assert alternation_check([0.0, 0.0, 0.0], SIN2X, SIN_INTERVAL).count >= 4
    assert alternation_check([0.5], lambda x: 0.0 * x, (0.0, 1.0)).count == 1


def test_bad_inputs():
    with pytest.raises(ValueError):
        cheby_objective(SIN2X, (1.0, -1.0), 2)
    with pytest.raises(ValueError), np.errstate(divide="ignore"):
        cheby_objective(lambda x: 1.0 / x, (-1.0, 1.0), 1, grid_size=3)
    with pytest.raises(ValueError):
        inner_max([0.0], SIN2X, SIN_INTERVAL, grid_size=1)
    with pytest.raises(KeyError):
        get_target("cosh")

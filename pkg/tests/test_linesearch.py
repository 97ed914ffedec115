import numpy as np
import pytest

from subopt.core import FunctionOracle, LineSearchStalled, SolverParams
from subopt.linesearch import Descent, NullStep, bar_t_schedule, next_trial, two_point_line_search

PARAMS = SolverParams()


def oracle_1d(value, grad):
    return FunctionOracle(lambda x: value(x[0]), lambda x: np.array([grad(x[0])]), 1)


@pytest.mark.parametrize("i, expected", [(0, 1.0), (25, 0.075), (50, 0.005625)])
def test_bar_t_schedule(i, expected):
    assert bar_t_schedule(0.075, 25, i) == pytest.approx(expected, rel=1e-12)


def test_bar_t_schedule_rejects_bad_t0():
    with pytest.raises(ValueError):
        bar_t_schedule(1.0, 25, 3)


def test_next_trial():
    assert next_trial(0.0, 0.1, 0.25) == pytest.approx(0.05)
    assert next_trial(0.02, 0.08, 0.25) == pytest.approx(0.05)
    t = next_trial(0.05, 0.05 + 1e-15, 0.25)
    assert np.isfinite(t) and 0.05 <= t <= 0.05 + 1e-15


def test_quadratic_takes_unit_step():
    out = two_point_line_search(oracle_1d(lambda x: x * x, lambda x: 2 * x), 0.1, np.array([2.0]),
                                np.array([4.0]), PARAMS)
    assert isinstance(out, Descent)
    assert out.step == 1.0 and out.f_point == 1.0
    np.testing.assert_array_equal(out.point, [1.0])


def test_abs_near_kink_gives_null_step():
    out = two_point_line_search(oracle_1d(abs, lambda x: 1.0 if x >= 0 else -1.0), 0.1, np.array([1e-3]),
                                np.array([1.0]), PARAMS)
    assert isinstance(out, NullStep)
    np.testing.assert_array_equal(out.subgradient, [-1.0])
    assert 0 < out.trial <= 0.1


def test_linear_objective_descends_at_unit_step():
    c = np.array([1.0, -2.0, 0.5])
    oracle = FunctionOracle(lambda x: float(c @ x), lambda x: c, 3)
    out = two_point_line_search(oracle, 0.1, np.zeros(3), c, PARAMS)
    assert isinstance(out, Descent) and out.step == 1.0


def test_brackets_shrink_and_nest():
    # f falls linearly up to 0.6 and rises steeply after, so long descent
    # steps fail until the schedule brings them below the kink.
    oracle = oracle_1d(lambda x: -x if x < 0.6 else 10 * (x - 0.6) - 0.6,
                       lambda x: -1.0 if x < 0.6 else 10.0)
    out = two_point_line_search(oracle, 0.5, np.array([0.0]), np.array([-1.0]), PARAMS, record_brackets=True)
    assert isinstance(out, Descent) and out.iterations > 5
    assert out.step >= PARAMS.tbar(0.5) and out.f_point <= -PARAMS.beta1 * out.step
    widths = [hi - lo for lo, hi in out.brackets]
    for (lo0, hi0), (lo1, hi1), w0, w1 in zip(out.brackets[1:], out.brackets[2:], widths[1:], widths[2:]):
        assert w1 <= (1 - PARAMS.zeta) * w0 and lo0 <= lo1 and hi1 <= hi0


def test_stall_when_oracle_lies():
    # The reported subgradient points the wrong way, so neither test can pass.
    oracle = oracle_1d(lambda x: 0.0, lambda x: 1.0)
    with pytest.raises(LineSearchStalled) as info:
        two_point_line_search(oracle, 0.1, np.array([0.0]), np.array([1.0]),
                              SolverParams(max_linesearch_iters=30))
    assert info.value.iterations == 30


def test_input_checks():
    oracle = oracle_1d(abs, lambda x: 1.0)
    with pytest.raises(ValueError):
        two_point_line_search(oracle, 0.1, np.array([1.0]), np.array([0.0]), PARAMS)
    with pytest.raises(ValueError):
        two_point_line_search(oracle, 1.5, np.array([1.0]), np.array([1.0]), PARAMS)

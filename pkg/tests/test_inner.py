import numpy as np
import pytest

from subopt.core import FunctionOracle, IterCapReached, RunReport, SolverParams
from subopt.inner import CSVTrace, _dg_sp, dg_sp, reset_bundle
from subopt.linesearch import NullStep
from subopt.minnorm import Bundle, MinNormSolution, distance_to_hull
from subopt.problems import make_problem

PARAMS = SolverParams()


def sphere(n):
    return FunctionOracle(lambda x: float(x @ x), lambda x: 2 * x, n)


def l1_pair():
    return FunctionOracle(lambda x: float(np.abs(x).sum()), lambda x: np.where(x >= 0, 1.0, -1.0), 2)


def test_returns_immediately_when_already_stationary():
    x0 = np.array([0.1, -0.1, 0.05])
    report = RunReport()
    x = dg_sp(sphere(3), x0, 0.1, 2 * np.linalg.norm(x0) * 2, PARAMS, report)
    np.testing.assert_array_equal(x, x0)
    assert report.inner_iters == 0


def test_l1_reduces_value():
    oracle = l1_pair()
    x0 = np.array([1.0, -2.0])
    x = dg_sp(oracle, x0, 0.1, 0.1, PARAMS)
    assert oracle.value(x) <= 0.1 * oracle.value(x0)


def test_maxq_round_descends_monotonically():
    oracle, spec = make_problem("MAXQ", 10)
    seen = []
    x = dg_sp(oracle, spec.default_start, 0.1, 0.5, PARAMS, observer=seen.append)
    fs = [r.fx for r in seen]
    assert all(b <= a for a, b in zip(fs, fs[1:]))
    assert seen[-1].outcome is None and seen[-1].solution.norm <= 0.5
    assert oracle.value(x) < oracle.value(spec.default_start)


def test_null_steps_shrink_gstar_and_leave_hull():
    oracle, spec = make_problem("MXHILB", 10)
    seen = []
    dg_sp(oracle, spec.default_start, 0.05, 1e-3, PARAMS, observer=seen.append)
    nulls = [(a, b) for a, b in zip(seen, seen[1:]) if isinstance(a.outcome, NullStep)]
    assert nulls
    for rec, nxt in nulls:
        assert nxt.solution.norm < rec.solution.norm
        assert distance_to_hull(rec.outcome.subgradient, rec.bundle) > 0


def test_iteration_cap_carries_best_point():
    oracle = l1_pair()
    with pytest.raises(IterCapReached) as info:
        _dg_sp(oracle, np.array([1.0, -2.0]), 0.1, 1e-9, SolverParams(max_inner_iters=3), RunReport())
    assert info.value.iterations == 3
    assert info.value.fx == oracle.value(info.value.x) < 3.0


def test_argument_checks():
    with pytest.raises(ValueError):
        dg_sp(l1_pair(), np.ones(2), 0.0, 0.1, PARAMS)
    with pytest.raises(ValueError):
        dg_sp(l1_pair(), np.ones(2), 0.1, 0.0, PARAMS)


def _solution(weights, members):
    P = np.array(members, dtype=float)
    w = np.array(weights, dtype=float)
    g = w @ P
    return MinNormSolution(g, w, float(np.linalg.norm(g)), 0.0)


def test_reset_keeps_smallest_mass_prefix():
    members = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]
    sol = _solution([0.7, 0.2, 0.1], members)
    out = reset_bundle(Bundle([np.array(m) for m in members]), sol, 0.9, 4)
    assert len(out) == 3
    np.testing.assert_array_equal(out.members[0], members[0])
    np.testing.assert_array_equal(out.members[1], members[1])
    np.testing.assert_array_equal(out.members[2], sol.g_star)


def test_reset_degenerate_weights():
    members = [[1.0, 2.0], [3.0, 0.0], [0.0, 3.0]]
    sol = _solution([1.0, 0.0, 0.0], members)
    out = reset_bundle(Bundle([np.array(m) for m in members]), sol, 0.5, 4)
    assert len(out) == 2
    np.testing.assert_array_equal(out.members[0], out.members[1])


def test_reset_full_mass_keeps_positive_weights():
    members = [[1.0, 0.0], [0.0, 1.0], [2.0, 2.0], [3.0, 1.0]]
    sol = _solution([0.5, 0.5, 0.0, 0.0], members)
    out = reset_bundle(Bundle([np.array(m) for m in members]), sol, 1.0, 10)
    assert len(out) == 3


def test_reset_respects_cap():
    members = [np.eye(6)[i] for i in range(6)]
    sol = _solution([1 / 6] * 6, members)
    assert len(reset_bundle(Bundle(members), sol, 1.0, 5)) == 4


def test_csv_trace(tmp_path):
    path = tmp_path / "trace.csv"
    with CSVTrace(path) as trace:
        dg_sp(l1_pair(), np.array([1.0, -2.0]), 0.1, 0.1, PARAMS, observer=trace)
    lines = path.read_text().splitlines()
    assert lines[0] == "outer,k,indicator,gnorm,f,bundle_size"
    assert len(lines) > 2 and lines[-1].split(",")[2] == ""

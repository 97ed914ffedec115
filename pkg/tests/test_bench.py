import math

import numpy as np
import pytest

from subopt.bench import (BenchResult, emit_csv, performance_profile, performance_ratios, read_profile_csv,
                          read_results_csv, run_suite)
from subopt.core import SolverParams


def result(problem, solver, evals, success=True, time=0.1):
    return BenchResult(problem, solver, 10, 0, evals, time, success, 0.0, 0.0 if success else 1.0, "Converged")


def test_empty_problem_list():
    assert run_suite([], ["subopt"], 10) == []


def test_suite_order_and_determinism():
    a = run_suite(["MAXL", "MAXQ"], ["subopt", "subg"], 5, seeds=(0, 1))
    assert [(r.problem, r.solver, r.seed) for r in a] == [
        (p, s, seed) for p in ("MAXL", "MAXQ") for s in ("subopt", "subg") for seed in (0, 1)]
    b = run_suite(["MAXL", "MAXQ"], ["subopt", "subg"], 5, seeds=(0, 1), workers=2)
    assert [r.cost_evals for r in a] == [r.cost_evals for r in b]
    assert all(r.success for r in a if r.solver == "subopt")


def test_failures_are_recorded():
    out = run_suite(["MAXL"], ["subopt"], 4, params=SolverParams(beta1=0.5))
    assert len(out) == 1 and not out[0].success and out[0].status == "Error"
    assert "beta1" in out[0].message


def test_bad_config():
    with pytest.raises(KeyError):
        run_suite(["MAXL"], ["newton"], 4)
    with pytest.raises(KeyError):
        run_suite(["nope"], ["subopt"], 4)
    with pytest.raises(ValueError):
        run_suite(["MAXL"], ["subopt"], 1)


def test_profile_single_solver():
    prof = performance_profile([result(f"p{i}", "a", 10 + i) for i in range(5)])
    assert prof.rho["a"][0] == 1.0


def test_profile_dominance():
    res = [result(f"p{i}", "a", 10) for i in range(4)] + [result(f"p{i}", "b", 30) for i in range(4)]
    prof = performance_profile(res)
    assert prof.rho["a"][0] == 1.0 and prof.rho["b"][0] == 0.0
    assert prof.taus[-1] == pytest.approx(3.0) and prof.rho["b"][-1] == 1.0


def test_profile_plateaus_at_success_fraction():
    res = [result(f"p{i}", "a", 10, success=i >= 4) for i in range(10)]
    res += [result(f"p{i}", "b", 20 + i) for i in range(10)]
    prof = performance_profile(res)
    assert prof.rho["a"][-1] == pytest.approx(0.6)
    for rho in prof.rho.values():
        assert np.all(np.diff(rho) >= 0) and np.all((0 <= rho) & (rho <= 1))
    assert math.isinf(performance_ratios(res)["a"][("p0", 10, 0)])


def test_profile_needs_results():
    with pytest.raises(ValueError):
        performance_profile([])
    with pytest.raises(ValueError):
        performance_ratios([result("p", "a", 1)], "memory")


def test_results_csv_round_trip(tmp_path):
    res = [result(f"p{i}", "a", i, time=0.1 * i + 1e-17) for i in range(10)]
    path = tmp_path / "r.csv"
    emit_csv(res, path)
    assert len(path.read_text().splitlines()) == 11
    assert read_results_csv(path) == res


def test_profile_csv_round_trip(tmp_path):
    res = [result(f"p{i}", s, 10 + i * (s == "b")) for i in range(5) for s in ("a", "b")]
    prof = performance_profile(res, samples=100)
    path = tmp_path / "p.csv"
    emit_csv(prof, path)
    assert len(path.read_text().splitlines()) == 201
    back = read_profile_csv(path)
    np.testing.assert_array_equal(back.taus, prof.taus)
    for s in prof.rho:
        np.testing.assert_array_equal(back.rho[s], prof.rho[s])

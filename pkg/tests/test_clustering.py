import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subopt.apps.clustering import (Dataset, EmptyDataError, NonNumericError, RaggedRowError, assign_clusters,
                                    cluster_objective, flatten_centers, load_points_csv, make_blobs,
                                    random_centers, unflatten_centers)


def two_points():
    return Dataset(np.array([[0.0], [2.0]]))


def test_perfect_fit():
    oracle = cluster_objective(two_points(), 2)
    x = np.array([0.0, 2.0])
    assert oracle.value(x) == 0.0
    np.testing.assert_array_equal(oracle.subgradient(x), [0.0, 0.0])


def test_both_points_on_one_center():
    oracle = cluster_objective(two_points(), 2)
    x = np.array([1.0, 5.0])
    assert oracle.value(x) == 1.0
    np.testing.assert_array_equal(oracle.subgradient(x), [0.0, 0.0])


def test_single_center_gradient_matches_finite_differences():
    data = make_blobs(50, seed=1)
    oracle = cluster_objective(data, 1)
    x = np.array([0.3, -0.7])
    fd = [(oracle.value(x + 1e-6 * e) - oracle.value(x - 1e-6 * e)) / 2e-6 for e in np.eye(2)]
    np.testing.assert_allclose(oracle.subgradient(x), fd, rtol=1e-4)
    np.testing.assert_allclose(oracle.subgradient(data.points.mean(axis=0)), 0.0, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.integers(0, 1000))
def test_permuting_centers(kappa, seed):
    rng = np.random.default_rng(seed)
    data = Dataset(rng.normal(size=(20, 3)))
    oracle = cluster_objective(data, kappa)
    centers = rng.normal(size=(kappa, 3))
    perm = rng.permutation(kappa)
    a = oracle.value(flatten_centers(centers))
    b = oracle.value(flatten_centers(centers[perm]))
    assert a == b
    ga = unflatten_centers(oracle.subgradient(flatten_centers(centers)), 3)
    gb = unflatten_centers(oracle.subgradient(flatten_centers(centers[perm])), 3)
    np.testing.assert_array_equal(ga[perm], gb)


def test_assignment_on_two_blobs():
    data = make_blobs(100, centers=((0.0, 0.0), (20.0, 0.0)), seed=2)
    truth = (data.points[:, 0] > 10).astype(int)
    means = np.array([data.points[truth == 0].mean(axis=0), data.points[truth == 1].mean(axis=0)])
    out = assign_clusters(means, data)
    np.testing.assert_array_equal(out.labels, truth)
    assert out.empty == ()


def test_assignment_ties_and_single_center():
    out = assign_clusters(np.array([[-1.0], [1.0]]), Dataset(np.array([[0.0]])))
    assert out.labels.tolist() == [0] and out.empty == (1,)
    data = make_blobs(30, seed=0)
    assert set(assign_clusters(np.zeros((1, 2)), data).labels) == {0}


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        cluster_objective(two_points(), 2).value(np.zeros(3))
    with pytest.raises(ValueError):
        cluster_objective(two_points(), 0)


def test_load_csv(tmp_path):
    path = tmp_path / "pts.csv"
    path.write_text("0,0\n1,1\n")
    data = load_points_csv(path)
    assert (data.m, data.dim) == (2, 2)


@pytest.mark.parametrize("text, error, row", [
    ("1,2\n3\n", RaggedRowError, 2),
    ("1,2\n3,x\n", NonNumericError, 2),
    ("1,nan\n", NonNumericError, 1),
    ("\n\n", EmptyDataError, 0),
])
def test_load_csv_errors(tmp_path, text, error, row):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(error) as info:
        load_points_csv(path)
    assert info.value.row == row


def test_load_large_file(tmp_path):
    path = tmp_path / "big.csv"
    rng = np.random.default_rng(0)
    np.savetxt(path, rng.normal(size=(10_000, 3)), delimiter=",")
    assert load_points_csv(path).m == 10_000


def test_random_centers_are_distinct_data_points():
    data = make_blobs(40, seed=5)
    centers = unflatten_centers(random_centers(data, 4, 1), 2)
    assert len({tuple(c) for c in centers}) == 4
    assert all(any(np.array_equal(c, p) for p in data.points) for c in centers)

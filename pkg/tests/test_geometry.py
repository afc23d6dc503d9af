import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vslab.geometry import (
    Dataset,
    DimensionError,
    InseparableError,
    LabeledExample,
    angular_distance,
    classify,
    in_version_space,
    is_misclassified,
    margins,
    max_margin,
    min_norm_point,
    misclassified_mask,
)


def _dataset(rows, labels):
    X = np.array(rows, dtype=float)
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    return Dataset(X, np.array(labels))


def test_dataset_rejects_non_unit_rows():
    with pytest.raises(ValueError, match="norm"):
        Dataset(np.array([[1.0, 1.0]]), np.array([1]))


def test_dataset_rejects_bad_labels_and_shapes():
    with pytest.raises(ValueError):
        Dataset(np.array([[1.0, 0.0]]), np.array([0]))
    with pytest.raises(DimensionError):
        Dataset(np.array([[1.0, 0.0]]), np.array([1, 1]))


def test_dataset_arrays_are_read_only():
    data = _dataset([[1, 0], [0, 1]], [1, -1])
    with pytest.raises(ValueError):
        data.features[0, 0] = 2.0
    assert np.allclose(data.signed, [[1, 0], [0, -1]])


def test_labeled_example_round_trip():
    data = _dataset([[3, 4], [1, 0]], [1, -1])
    again = Dataset.from_examples(data.examples)
    assert np.array_equal(again.features, data.features)
    assert np.array_equal(again.labels, data.labels)
    with pytest.raises(ValueError):
        LabeledExample(np.array([2.0, 0.0]), 1)


def test_classification_helpers():
    data = _dataset([[1, 0], [-1, 0], [0, 1]], [1, -1, -1])
    w = np.array([1.0, 0.5])
    assert classify(w, data.features[0]) == 1
    assert np.allclose(margins(w, data), [1.0, 1.0, -0.5])
    assert misclassified_mask(w, data).tolist() == [False, False, True]
    assert is_misclassified(w, data.examples[2])
    assert not in_version_space(w, data)
    assert in_version_space(np.array([1.0, -0.5]), data)


def test_zero_vector_is_never_in_version_space():
    data = _dataset([[1, 0]], [1])
    assert margins(np.zeros(2), data)[0] == 0.0
    assert not in_version_space(np.zeros(2), data)


def test_angular_distance():
    assert angular_distance([1, 0], [0, 1]) == pytest.approx(math.pi / 2)
    assert angular_distance([1, 0], [2, 0]) == pytest.approx(0.0)


def test_min_norm_point_simple_segment():
    # segment from (1, 1) to (1, -1): closest point to the origin is (1, 0)
    x, lam = min_norm_point(np.array([[1.0, 1.0], [1.0, -1.0]]))[:2]
    assert np.allclose(x, [1.0, 0.0], atol=1e-10)
    assert np.allclose(lam, [0.5, 0.5], atol=1e-10)


def test_max_margin_symmetric_pair():
    data = _dataset([[1, 1], [1, -1]], [1, 1])
    cert = max_margin(data)
    assert cert.margin == pytest.approx(math.sqrt(0.5), abs=1e-10)
    assert np.allclose(cert.separator, [1.0, 0.0], atol=1e-10)
    assert cert.violations(data) == []


def test_max_margin_inseparable():
    data = _dataset([[1, 0], [1, 0]], [1, -1])
    with pytest.raises(InseparableError):
        max_margin(data)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(1, 12), st.integers(0, 2**31 - 1))
def test_max_margin_matches_simplex_qp(dim, n, seed):
    from scipy.optimize import minimize

    rng = np.random.default_rng(seed)
    u = rng.standard_normal(dim)
    u /= np.linalg.norm(u)
    X = rng.standard_normal((n, dim))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    keep = np.abs(X @ u) > 1e-2
    if not keep.any():
        return
    data = Dataset(X[keep], np.where(X[keep] @ u > 0, 1, -1))
    cert = max_margin(data)
    assert cert.violations(data) == []
    # independent oracle: min |lam @ P|^2 over the probability simplex
    P = data.signed
    k = P.shape[0]
    res = minimize(lambda lam: float(np.sum((lam @ P) ** 2)), np.full(k, 1.0 / k),
                   jac=lambda lam: 2.0 * P @ (lam @ P), method="SLSQP",
                   bounds=[(0.0, 1.0)] * k,
                   constraints=[{"type": "eq", "fun": lambda lam: lam.sum() - 1.0}],
                   options={"ftol": 1e-15, "maxiter": 500})
    assert cert.margin == pytest.approx(math.sqrt(max(res.fun, 0.0)), abs=1e-6)

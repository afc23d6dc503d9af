"""Classification semantics, version-space membership and the max-margin certificate.

Hyperplanes are homogeneous (``w . x = 0``) and represented by plain numpy vectors.
``sgn(0) = -1`` throughout, so an example is misclassified iff ``w . x y <= 0``.
"""
from dataclasses import dataclass

import numpy as np

UNIT_TOL = 1e-9


class DimensionError(ValueError):
    pass


class InseparableError(ValueError):
    """Raised when the data admit no homogeneous separator with positive margin."""


def as_vector(v, name="vector"):
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size < 1:
        raise DimensionError(f"{name} must be a non-empty 1-D array")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} has non-finite entries")
    return v


def _check_dims(a, b):
    if a.shape[-1] != b.shape[-1]:
        raise DimensionError(f"dimension mismatch: {a.shape[-1]} != {b.shape[-1]}")


@dataclass(frozen=True)
class LabeledExample:
    features: np.ndarray
    label: int

    def __post_init__(self):
        x = as_vector(self.features, "features")
        if abs(np.linalg.norm(x) - 1.0) > UNIT_TOL:
            raise ValueError("example features must have unit norm")
        if self.label not in (-1, 1):
            raise ValueError(f"label must be +1 or -1, got {self.label!r}")
        object.__setattr__(self, "features", x)


@dataclass(frozen=True, eq=False)
class Dataset:
    """N unit-norm examples in R^D with labels in {-1, +1}."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        X = np.array(self.features, dtype=np.float64, ndmin=2)
        y = np.asarray(self.labels)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError("features must be an (N, D) array with N, D >= 1")
        if y.shape != (X.shape[0],):
            raise DimensionError("one label per example required")
        if not np.all(np.isfinite(X)):
            raise ValueError("features must be finite")
        if not np.all(np.isin(y, (-1, 1))):
            raise ValueError("labels must be +1 or -1")
        norms = np.linalg.norm(X, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1.0) > UNIT_TOL)
        if bad.size:
            raise ValueError(f"example {bad[0]} has norm {norms[bad[0]]:.12g}, expected 1")
        y = y.astype(np.int64)
        X.setflags(write=False)
        y.setflags(write=False)
        signed = X * y[:, None]
        signed.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "signed", signed)

    @property
    def size(self):
        return self.features.shape[0]

    @property
    def dim(self):
        return self.features.shape[1]

    @property
    def examples(self):
        return [LabeledExample(x, int(l)) for x, l in zip(self.features, self.labels)]

    def __len__(self):
        return self.size

    @classmethod
    def from_examples(cls, examples):
        examples = list(examples)
        return cls(np.array([e.features for e in examples]), np.array([e.label for e in examples]))


def classify(w, x):
    w, x = as_vector(w, "w"), as_vector(x, "x")
    _check_dims(w, x)
    return 1 if float(w @ x) > 0.0 else -1


def is_misclassified(w, example):
    """Boolean query f_w: True iff ``w . x y <= 0``."""
    w = as_vector(w, "w")
    _check_dims(w, example.features)
    return bool(float(w @ example.features) * example.label <= 0.0)


def margins(w, dataset):
    """Signed functional margins ``w . x_i y_i`` for every example."""
    w = as_vector(w, "w")
    _check_dims(w, dataset.features)
    return dataset.signed @ w


def misclassified_mask(w, dataset):
    return margins(w, dataset) <= 0.0


def in_version_space(w, dataset):
    return bool(np.all(margins(w, dataset) > 0.0))


def angular_distance(a, b):
    a, b = as_vector(a, "a"), as_vector(b, "b")
    _check_dims(a, b)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("angular distance undefined for a zero vector")
    return float(np.arccos(np.clip((a @ b) / (na * nb), -1.0, 1.0)))


@dataclass(frozen=True, eq=False)
class MarginCertificate:
    """Max-margin separator ``u`` with margin ``gamma`` and the hull weights proving it.

    ``sum_i hull_weights[i] * y_i x_i`` is the minimum-norm point of the convex hull of
    the signed examples; its norm is ``gamma`` and its direction is ``u``.
    """

    separator: np.ndarray
    margin: float
    hull_weights: np.ndarray
    gap: float = 0.0

    def violations(self, dataset, tol=1e-7):
        """List the certificate invariants that fail on `dataset` (empty when valid)."""
        out = []
        u, lam = self.separator, self.hull_weights
        if abs(np.linalg.norm(u) - 1.0) > UNIT_TOL:
            out.append("separator is not unit norm")
        if np.any(lam < 0) or abs(lam.sum() - 1.0) > 1e-9:
            out.append("hull weights are not a probability vector")
        if np.min(dataset.signed @ u) < self.margin - tol:
            out.append("some example has margin below gamma")
        if abs(np.linalg.norm(lam @ dataset.signed) - self.margin) > tol:
            out.append("gamma differs from the hull point norm")
        return out


def _affine_minimizer(Q):
    """Point of minimum norm on the affine hull of the rows of Q, as barycentric weights."""
    k = Q.shape[0]
    K = np.zeros((k + 1, k + 1))
    K[:k, :k] = Q @ Q.T
    K[:k, k] = 1.0
    K[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    sol = np.linalg.lstsq(K, rhs, rcond=None)[0]
    return sol[:k]


def min_norm_point(P, tol=1e-9, max_iter=10_000):
    """Wolfe's algorithm for the minimum-norm point of conv(rows of P).

    Returns ``(x, weights, gap)`` where ``gap = |x|^2 - min_i x . p_i`` is the
    Frank-Wolfe duality gap at termination.
    """
    P = np.asarray(P, dtype=np.float64)
    n = P.shape[0]
    j0 = int(np.argmin(np.einsum("ij,ij->i", P, P)))
    S = [j0]
    lam = np.array([1.0])
    x = P[j0].copy()
    eps = 1e-14
    for _ in range(max_iter):
        dots = P @ x
        j = int(np.argmin(dots))
        xx = float(x @ x)
        gap = xx - float(dots[j])
        if gap <= tol * max(xx, eps) or j in S:
            break
        S.append(j)
        lam = np.append(lam, 0.0)
        while True:
            a = _affine_minimizer(P[S])
            if np.all(a > eps):
                lam = a
                break
            neg = a <= eps
            theta = np.min(lam[neg] / (lam[neg] - a[neg]))
            lam = theta * a + (1.0 - theta) * lam
            keep = lam > eps
            S = [s for s, k in zip(S, keep) if k]
            lam = lam[keep]
            lam /= lam.sum()
        x = lam @ P[S]
    weights = np.zeros(n)
    weights[S] = lam
    x = weights @ P
    gap = float(x @ x - np.min(P @ x))
    return x, weights, gap


def max_margin(dataset, tol=1e-9):
    """Max-margin certificate via the minimum-norm point of conv{y_i x_i}.

    Raises ``InseparableError`` when the minimum norm is at most `tol`.
    """
    x, weights, gap = min_norm_point(dataset.signed, tol=tol)
    gamma = float(np.linalg.norm(x))
    if gamma <= tol:
        raise InseparableError("data are not separable by a homogeneous hyperplane")
    return MarginCertificate(separator=x / gamma, margin=gamma, hull_weights=weights, gap=gap)

"""Dataset generators and CSV persistence."""
import csv
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import UNIT_TOL, Dataset
from .rng import make_rng


class RejectionBudgetError(RuntimeError):
    """Rejection sampling used up its draw budget before collecting enough examples."""


class DatasetFormatError(ValueError):
    pass


def mohri_hard_dataset(dim):
    """D examples whose max margin is at most sqrt(1 / 2^(D-1)).

    Row i (1-based) has i-1 leading entries (-1)^i, then (-1)^(i+1), then zeros, and
    carries label (-1)^(i+1).
    """
    dim = int(dim)
    if dim < 2:
        raise ValueError("dimension must be >= 2")
    X = np.zeros((dim, dim))
    y = np.empty(dim, dtype=np.int64)
    for i in range(1, dim + 1):
        X[i - 1, : i - 1] = (-1.0) ** i
        X[i - 1, i - 1] = (-1.0) ** (i + 1)
        y[i - 1] = (-1) ** (i + 1)
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    return Dataset(X, y)


def mohri_margin_bound(dim):
    return math.sqrt(1.0 / 2 ** (dim - 1))


def _unit(rng, dim, n=None):
    g = rng.standard_normal((dim,) if n is None else (n, dim))
    return g / np.linalg.norm(g, axis=-1, keepdims=True)


def _margin_examples(rng, u, n, target_margin, max_draws):
    dim = u.shape[0]
    kept, drawn = [], 0
    have = 0
    while have < n:
        if drawn >= max_draws:
            raise RejectionBudgetError(
                f"only {have} of {n} examples with |u.x| >= {target_margin} after {drawn} draws"
            )
        batch = int(min(max_draws - drawn, max(1024, 4 * (n - have))))
        X = _unit(rng, dim, batch)
        drawn += batch
        X = X[np.abs(X @ u) >= target_margin]
        kept.append(X)
        have += X.shape[0]
    X = np.concatenate(kept)[:n]
    return X, np.where(X @ u > 0.0, 1, -1)


def random_separable_dataset(dim, n, target_margin, seed=None, max_draws=10_000_000):
    """N uniform unit vectors outside the slab |u.x| < target_margin, labelled by u.

    The hidden separator ``u`` certifies a margin of at least `target_margin`.
    """
    if not (0.0 < target_margin < 1.0):
        raise ValueError("target margin must lie in (0, 1)")
    if dim < 2 or n < 1:
        raise ValueError("need dim >= 2 and n >= 1")
    rng = make_rng(seed)
    u = _unit(rng, dim)
    X, y = _margin_examples(rng, u, n, target_margin, max_draws)
    return Dataset(X, y)


def cone_dataset(dim, margin):
    """2(D-1) examples (gamma, +-sqrt(1 - gamma^2) e_j) whose max margin is exactly gamma.

    The version space is the cone |w_j| < w_0 * gamma / sqrt(1 - gamma^2), so its Gaussian
    measure is of order gamma^(D-1). Useful for sweeping the margin at fixed D.
    """
    if not (0.0 < margin < 1.0):
        raise ValueError("margin must lie in (0, 1)")
    if dim < 2:
        raise ValueError("dimension must be >= 2")
    side = math.sqrt(1.0 - margin * margin)
    rows = []
    for j in range(1, dim):
        for s in (1.0, -1.0):
            x = np.zeros(dim)
            x[0], x[j] = margin, s * side
            rows.append(x)
    X = np.array(rows)
    return Dataset(X, np.ones(len(rows), dtype=np.int64))


def padded_separable_dataset(dim, n, target_margin, core_size=8, spread=0.05, pad_cosine=0.5,
                             seed=None, max_draws=10_000_000):
    """A few hard margin examples padded with easy ones, for query-scaling runs.

    The padding clusters around a unit vector v tilted away from the separator u
    (u.v = `pad_cosine`); the core examples have margin at least `target_margin` under u
    but are misclassified by v. A perceptron that first steps towards the padding is
    then left hunting a fixed handful of core examples among N.
    """
    if n < core_size:
        raise ValueError("n must be at least core_size")
    if not (target_margin < pad_cosine < 1.0):
        raise ValueError("pad_cosine must lie in (target_margin, 1)")
    rng = make_rng(seed)
    u = _unit(rng, dim)
    side = _unit(rng, dim)
    side -= (side @ u) * u
    side /= np.linalg.norm(side)
    v = pad_cosine * u + np.sqrt(1.0 - pad_cosine**2) * side
    kept, have, drawn = [], 0, 0
    while have < core_size:
        if drawn >= max_draws:
            raise RejectionBudgetError(f"only {have} of {core_size} core examples after {drawn} draws")
        S = _unit(rng, dim, 4096)
        drawn += 4096
        S = S[(S @ u >= target_margin) & (S @ v < 0.0)]
        kept.append(S)
        have += S.shape[0]
    core = np.concatenate(kept)[:core_size]
    yc = np.where(rng.random(core_size) < 0.5, 1, -1)
    pad = n - core_size
    signed_pad = v + spread * rng.standard_normal((pad, dim))
    signed_pad /= np.linalg.norm(signed_pad, axis=1, keepdims=True)
    if pad and np.min(signed_pad @ u) < target_margin:
        raise ValueError("spread too large for the requested margin")
    yp = np.where(rng.random(pad) < 0.5, 1, -1)
    X = np.vstack([core * yc[:, None], signed_pad * yp[:, None]])
    y = np.concatenate([yc, yp])
    order = rng.permutation(n)
    return Dataset(X[order], y[order])


@dataclass(frozen=True)
class DatasetSpec:
    kind: str
    dim: int = 2
    size: int = 0
    target_margin: Optional[float] = None
    seed: Optional[int] = None
    path: Optional[str] = None
    normalize: bool = False

    def __post_init__(self):
        if self.kind not in ("mohri", "random-margin", "file", "cone", "padded"):
            raise ValueError(f"unknown dataset kind {self.kind!r}")
        if self.kind == "file":
            if not self.path:
                raise ValueError("file datasets need a path")
            return
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        if self.target_margin is not None and not (0.0 < self.target_margin < 1.0):
            raise ValueError("target margin must lie in (0, 1)")
        if self.kind in ("random-margin", "padded"):
            if self.size < 1:
                raise ValueError("size must be >= 1")
            if self.target_margin is None:
                raise ValueError(f"{self.kind} datasets need a target margin")
        if self.kind == "cone" and self.target_margin is None:
            raise ValueError("cone datasets need a target margin")


def make_dataset(spec):
    if spec.kind == "mohri":
        return mohri_hard_dataset(spec.dim)
    if spec.kind == "random-margin":
        return random_separable_dataset(spec.dim, spec.size, spec.target_margin, spec.seed)
    if spec.kind == "cone":
        return cone_dataset(spec.dim, spec.target_margin)
    if spec.kind == "padded":
        return padded_separable_dataset(spec.dim, spec.size, spec.target_margin, seed=spec.seed)
    return load_dataset(spec.path, normalize=spec.normalize)


def _parse_row(cells, lineno):
    try:
        values = [float(c) for c in cells]
    except ValueError:
        raise DatasetFormatError(f"line {lineno}: non-numeric cell in {cells!r}") from None
    if not all(math.isfinite(v) for v in values):
        raise DatasetFormatError(f"line {lineno}: non-finite value")
    return values


def load_dataset(path, normalize=False):
    """Read a CSV of D feature columns followed by a +-1 label column.

    Lines starting with ``#`` and a non-numeric first row are skipped. Rows whose norm
    is off by more than 1e-9 are rescaled when `normalize` is set and rejected otherwise.
    """
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, cells in enumerate(csv.reader(fh), start=1):
            cells = [c.strip() for c in cells]
            if not cells or all(c == "" for c in cells) or cells[0].startswith("#"):
                continue
            if not rows and _looks_like_header(cells):
                continue
            rows.append((lineno, _parse_row(cells, lineno)))
    if not rows:
        raise DatasetFormatError(f"{path}: no examples")
    width = len(rows[0][1])
    if width < 2:
        raise DatasetFormatError("need at least one feature column and a label column")
    for lineno, values in rows:
        if len(values) != width:
            raise DatasetFormatError(f"line {lineno}: expected {width} columns, got {len(values)}")
    data = np.array([v for _, v in rows])
    X, labels = data[:, :-1], data[:, -1]
    for (lineno, _), lab in zip(rows, labels):
        if lab not in (-1.0, 1.0):
            raise DatasetFormatError(f"line {lineno}: label must be +1 or -1, got {lab:g}")
    norms = np.linalg.norm(X, axis=1)
    off = np.abs(norms - 1.0) > UNIT_TOL
    if np.any(off):
        if not normalize:
            i = int(np.flatnonzero(off)[0])
            raise DatasetFormatError(
                f"line {rows[i][0]}: feature norm {norms[i]:.12g} is not 1 (pass normalize=True)"
            )
        if np.any(norms == 0.0):
            raise DatasetFormatError("cannot normalize a zero feature row")
        X = X / norms[:, None]
    return Dataset(X, labels.astype(np.int64))


def _looks_like_header(cells):
    try:
        [float(c) for c in cells]
    except ValueError:
        return True
    return False


def save_dataset(dataset, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{j}" for j in range(1, dataset.dim + 1)] + ["label"])
        for x, lab in zip(dataset.features, dataset.labels):
            w.writerow([repr(float(v)) for v in x] + [int(lab)])

"""Hot inner loops, compiled when the Cython extension is available.

Set ``VSLAB_PURE_PYTHON=1`` to force the pure-Python fallback. ``BACKEND`` names the
implementation in use.
"""
import os

import numpy as np

from . import _pykernels

if os.environ.get("VSLAB_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"


def _f64(a, ndim):
    return np.ascontiguousarray(a, dtype=np.float64).reshape((-1,) * ndim)


def _cuts(normals, offsets, dim):
    normals = np.ascontiguousarray(normals, dtype=np.float64).reshape(-1, dim)
    offsets = np.ascontiguousarray(offsets, dtype=np.float64).reshape(-1)
    return normals, offsets


def member(x, normals, offsets, impl=None):
    x = _f64(x, 1)
    normals, offsets = _cuts(normals, offsets, x.shape[0])
    return bool((impl or _impl).member(x, normals, offsets))


def chord(x, v, normals, offsets, tol, impl=None):
    x, v = _f64(x, 1), _f64(v, 1)
    normals, offsets = _cuts(normals, offsets, x.shape[0])
    return (impl or _impl).chord(x, v, normals, offsets, float(tol))


def hit_and_run_chain(x0, directions, uniforms, normals, offsets, tol, impl=None):
    x0 = _f64(x0, 1)
    directions = np.ascontiguousarray(directions, dtype=np.float64).reshape(-1, x0.shape[0])
    uniforms = _f64(uniforms, 1)
    normals, offsets = _cuts(normals, offsets, x0.shape[0])
    return (impl or _impl).hit_and_run_chain(x0, directions, uniforms, normals, offsets, float(tol))


def count_in_version_space(samples, signed_examples, impl=None):
    samples = np.ascontiguousarray(samples, dtype=np.float64)
    signed_examples = np.ascontiguousarray(signed_examples, dtype=np.float64)
    return int((impl or _impl).count_in_version_space(samples, signed_examples))

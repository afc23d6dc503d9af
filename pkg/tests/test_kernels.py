"""The compiled kernels and the pure-Python fallback must agree bit for bit."""
import os
import subprocess
import sys

import numpy as np
import pytest

from vslab import _kernels
from vslab._kernels import _pykernels
from vslab.rng import make_rng

compiled = pytest.mark.skipif(_kernels.BACKEND != "cython", reason="extension not built")


def _body(rng, dim, cuts):
    normals = rng.standard_normal((cuts, dim))
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    offsets = -rng.uniform(0.1, 0.5, cuts)
    return normals, offsets


def test_python_member_and_chord_basics():
    normals = np.array([[1.0, 0.0]])
    offsets = np.array([0.0])  # half-ball x >= 0
    assert _kernels.member([0.5, 0.0], normals, offsets, impl=_pykernels)
    assert not _kernels.member([-0.1, 0.0], normals, offsets, impl=_pykernels)
    assert not _kernels.member([0.9, 0.9], normals, offsets, impl=_pykernels)
    lo, hi, q = _kernels.chord([0.5, 0.0], [0.0, 1.0], normals, offsets, 1e-10, impl=_pykernels)
    half = np.sqrt(1 - 0.25)
    assert lo == pytest.approx(-half, abs=1e-9) and hi == pytest.approx(half, abs=1e-9)
    assert q > 0


def test_count_in_version_space_matches_numpy():
    rng = make_rng(1)
    samples = rng.standard_normal((5000, 4))
    signed = rng.standard_normal((6, 4))
    expect = int(np.sum(np.all(samples @ signed.T > 0, axis=1)))
    assert _kernels.count_in_version_space(samples, signed, impl=_pykernels) == expect


@compiled
@pytest.mark.parametrize("dim,cuts", [(2, 1), (3, 5), (6, 30)])
def test_backends_agree(dim, cuts):
    rng = make_rng(dim * 100 + cuts)
    normals, offsets = _body(rng, dim, cuts)
    c = _kernels._impl
    for _ in range(50):
        x = rng.uniform(-0.3, 0.3, dim)
        assert _kernels.member(x, normals, offsets, impl=c) == _kernels.member(
            x, normals, offsets, impl=_pykernels)
    x0 = np.zeros(dim)
    dirs = rng.standard_normal((300, dim))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    u = rng.random(300)
    for v in dirs[:20]:
        assert _kernels.chord(x0, v, normals, offsets, 1e-9, impl=c) == _kernels.chord(
            x0, v, normals, offsets, 1e-9, impl=_pykernels)
    xc, qc = _kernels.hit_and_run_chain(x0, dirs, u, normals, offsets, 1e-9, impl=c)
    xp, qp = _kernels.hit_and_run_chain(x0, dirs, u, normals, offsets, 1e-9, impl=_pykernels)
    assert np.array_equal(xc, xp) and qc == qp
    samples = rng.standard_normal((3000, dim))
    assert _kernels.count_in_version_space(samples, normals, impl=c) == \
        _kernels.count_in_version_space(samples, normals, impl=_pykernels)


def test_environment_variable_forces_python_backend():
    env = dict(os.environ, VSLAB_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import vslab._kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"

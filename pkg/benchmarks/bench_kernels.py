"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--dim 6] [--cuts 40]

Both backends receive identical inputs; the script also checks that they agree.
"""
import argparse
import timeit

import numpy as np

from vslab import _kernels
from vslab._kernels import _pykernels
from vslab.rng import make_rng


def workloads(dim, cuts, rng):
    normals = rng.standard_normal((cuts, dim))
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    offsets = np.full(cuts, -0.5)  # every cut contains a ball of radius 0.5 about 0
    x0 = np.zeros(dim)
    steps = 2000
    dirs = rng.standard_normal((steps, dim))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    uniforms = rng.random(steps)
    samples = rng.standard_normal((20000, dim))
    signed = rng.standard_normal((30, dim))
    return {
        "member x10000": lambda impl: [
            _kernels.member(x0, normals, offsets, impl=impl) for _ in range(10000)],
        "chord x1000": lambda impl: [
            _kernels.chord(x0, dirs[i], normals, offsets, 1e-8, impl=impl) for i in range(1000)],
        f"hit_and_run_chain {steps} steps": lambda impl: _kernels.hit_and_run_chain(
            x0, dirs, uniforms, normals, offsets, 1e-8, impl=impl),
        "count_in_version_space 20000": lambda impl: _kernels.count_in_version_space(
            samples, signed, impl=impl),
    }


def _flat(out):
    """Kernel output as one float vector (the chain returns a (point, queries) pair)."""
    if isinstance(out, tuple) and isinstance(out[0], np.ndarray):
        return np.append(out[0], out[1])
    return np.asarray(out, dtype=float).ravel()


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--dim", type=int, default=6)
    ap.add_argument("--cuts", type=int, default=40)
    args = ap.parse_args(argv)
    if _kernels.BACKEND != "cython":
        print("compiled extension not available; only the Python fallback can be timed")
    compiled = _kernels._impl
    jobs = workloads(args.dim, args.cuts, make_rng(0))
    print(f"{'kernel':34s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for name, job in jobs.items():
        py_out, c_out = job(_pykernels), job(compiled)
        same = np.allclose(_flat(py_out), _flat(c_out))
        t_py = min(timeit.repeat(lambda: job(_pykernels), number=1, repeat=args.repeat))
        t_c = min(timeit.repeat(lambda: job(compiled), number=1, repeat=args.repeat))
        flag = "" if same else "  MISMATCH"
        print(f"{name:34s} {t_py:11.5f} {t_c:11.5f} {t_py / t_c:8.1f}{flag}")


if __name__ == "__main__":
    main()

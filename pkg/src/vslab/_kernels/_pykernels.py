"""Pure-Python versions of the compiled kernels.

Scalar loops keep the floating-point summation order of the Cython code, so both
backends produce the same chains for the same inputs.
"""
import math

import numpy as np

BALL_SLACK = 1e-12


def _member(x, normals, offsets):
    s = 0.0
    for xi in x:
        s += xi * xi
    if s > 1.0 + BALL_SLACK:
        return False
    for nrm, off in zip(normals, offsets):
        s = 0.0
        for xi, ni in zip(x, nrm):
            s += xi * ni
        if not (s > off):
            return False
    return True


def _bisect(x, v, vnorm, sign, normals, offsets, tol):
    lo, hi = 0.0, 2.5 / vnorm
    queries = 0
    while (hi - lo) * vnorm > tol:
        mid = 0.5 * (lo + hi)
        queries += 1
        if _member([xi + sign * mid * vi for xi, vi in zip(x, v)], normals, offsets):
            lo = mid
        else:
            hi = mid
    return lo, queries


def member(x, normals, offsets):
    return _member(list(x), normals.tolist(), offsets.tolist())


def chord(x, v, normals, offsets, tol):
    x, v = list(x), list(v)
    nl, ol = normals.tolist(), offsets.tolist()
    vnorm = math.sqrt(sum(vi * vi for vi in v))
    tp, q1 = _bisect(x, v, vnorm, 1.0, nl, ol, tol)
    tm, q2 = _bisect(x, v, vnorm, -1.0, nl, ol, tol)
    return -tm, tp, q1 + q2


def hit_and_run_chain(x0, directions, uniforms, normals, offsets, tol):
    x = [float(xi) for xi in x0]
    nl, ol = normals.tolist(), offsets.tolist()
    queries = 0
    for v, u in zip(directions.tolist(), uniforms.tolist()):
        vnorm = 0.0
        for vi in v:
            vnorm += vi * vi
        vnorm = math.sqrt(vnorm)
        if vnorm == 0.0:
            continue
        tp, q1 = _bisect(x, v, vnorm, 1.0, nl, ol, tol)
        tm, q2 = _bisect(x, v, vnorm, -1.0, nl, ol, tol)
        queries += q1 + q2
        t = -tm + u * (tp + tm)
        x = [xi + t * vi for xi, vi in zip(x, v)]
    return np.array(x), queries


def count_in_version_space(samples, signed_examples):
    return int(np.count_nonzero(np.all(samples @ signed_examples.T > 0.0, axis=1)))

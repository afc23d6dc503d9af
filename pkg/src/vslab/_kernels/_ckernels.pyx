# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: version-space hit counting and membership-oracle hit-and-run."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

DEF BALL_SLACK = 1e-12


cdef inline bint _member(const double* x, const double[:, ::1] normals,
                         const double[::1] offsets, Py_ssize_t dim) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    for i in range(dim):
        s += x[i] * x[i]
    if s > 1.0 + BALL_SLACK:
        return False
    for j in range(normals.shape[0]):
        s = 0.0
        for i in range(dim):
            s += x[i] * normals[j, i]
        if not (s > offsets[j]):
            return False
    return True


cdef inline double _bisect(const double* x, const double* v, double vnorm, double sign,
                           double* work, const double[:, ::1] normals,
                           const double[::1] offsets, Py_ssize_t dim, double tol,
                           long* queries) noexcept nogil:
    cdef double lo = 0.0
    cdef double hi = 2.5 / vnorm
    cdef double mid
    cdef Py_ssize_t i
    while (hi - lo) * vnorm > tol:
        mid = 0.5 * (lo + hi)
        for i in range(dim):
            work[i] = x[i] + sign * mid * v[i]
        queries[0] += 1
        if _member(work, normals, offsets, dim):
            lo = mid
        else:
            hi = mid
    return lo


def member(const double[::1] x, const double[:, ::1] normals, const double[::1] offsets):
    return bool(_member(&x[0], normals, offsets, x.shape[0]))


def chord(const double[::1] x, const double[::1] v, const double[:, ::1] normals,
          const double[::1] offsets, double tol):
    """Return (t_minus, t_plus, queries) bracketing the feasible chord x + t v."""
    cdef Py_ssize_t dim = x.shape[0], i
    cdef double vnorm = 0.0
    cdef long queries = 0
    cdef double[::1] work = np.empty(dim)
    for i in range(dim):
        vnorm += v[i] * v[i]
    vnorm = sqrt(vnorm)
    cdef double tp = _bisect(&x[0], &v[0], vnorm, 1.0, &work[0], normals, offsets, dim, tol, &queries)
    cdef double tm = _bisect(&x[0], &v[0], vnorm, -1.0, &work[0], normals, offsets, dim, tol, &queries)
    return -tm, tp, queries


def hit_and_run_chain(const double[::1] x0, const double[:, ::1] directions,
                      const double[::1] uniforms, const double[:, ::1] normals,
                      const double[::1] offsets, double tol):
    cdef Py_ssize_t dim = x0.shape[0], steps = directions.shape[0], s, i
    cdef double[::1] x = np.array(x0, dtype=np.float64)
    cdef double[::1] work = np.empty(dim)
    cdef long queries = 0
    cdef double vnorm, tp, tm, t
    with nogil:
        for s in range(steps):
            vnorm = 0.0
            for i in range(dim):
                vnorm += directions[s, i] * directions[s, i]
            vnorm = sqrt(vnorm)
            if vnorm == 0.0:
                continue
            tp = _bisect(&x[0], &directions[s, 0], vnorm, 1.0, &work[0], normals, offsets, dim, tol, &queries)
            tm = _bisect(&x[0], &directions[s, 0], vnorm, -1.0, &work[0], normals, offsets, dim, tol, &queries)
            t = -tm + uniforms[s] * (tp + tm)
            for i in range(dim):
                x[i] = x[i] + t * directions[s, i]
    return np.asarray(x), queries


def count_in_version_space(const double[:, ::1] samples, const double[:, ::1] signed_examples):
    """Count rows w of `samples` with w . z > 0 for every row z of `signed_examples`."""
    cdef Py_ssize_t n = samples.shape[0], m = signed_examples.shape[0]
    cdef Py_ssize_t dim = samples.shape[1], r, j, i
    cdef long hits = 0
    cdef double s
    cdef bint ok
    with nogil:
        for r in range(n):
            ok = True
            for j in range(m):
                s = 0.0
                for i in range(dim):
                    s += samples[r, i] * signed_examples[j, i]
                if s <= 0.0:
                    ok = False
                    break
            if ok:
                hits += 1
    return hits

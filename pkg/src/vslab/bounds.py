"""Probability that a Gaussian-random hyperplane lands in the version space.

The exact sector probability is expressed through the regularized incomplete beta
function, evaluated here by its continued fraction with the modified Lentz method.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .rng import split

LENTZ_FLOOR = 1e-15
CF_EPS = 1e-16
CF_MAX_TERMS = 10_000


def _beta_cf(x, a, b):
    """Continued fraction 1/(1 + d1/(1 + d2/(1 + ...))) by modified Lentz."""
    f = 1.0
    c = 1.0
    d = 1.0 - (a + b) * x / (a + 1.0)
    if abs(d) < LENTZ_FLOOR:
        d = LENTZ_FLOOR
    d = 1.0 / d
    f = d
    for m in range(1, CF_MAX_TERMS):
        # even coefficient d_{2m}
        num = m * (b - m) * x / ((a + 2 * m - 1.0) * (a + 2 * m))
        d = 1.0 + num * d
        d = LENTZ_FLOOR if abs(d) < LENTZ_FLOOR else d
        c = 1.0 + num / c
        c = LENTZ_FLOOR if abs(c) < LENTZ_FLOOR else c
        d = 1.0 / d
        f *= d * c
        # odd coefficient d_{2m+1}
        num = -(a + m) * (a + b + m) * x / ((a + 2 * m) * (a + 2 * m + 1.0))
        d = 1.0 + num * d
        d = LENTZ_FLOOR if abs(d) < LENTZ_FLOOR else d
        c = 1.0 + num / c
        c = LENTZ_FLOOR if abs(c) < LENTZ_FLOOR else c
        d = 1.0 / d
        delta = d * c
        f *= delta
        if abs(delta - 1.0) < CF_EPS:
            return f
    raise ArithmeticError(f"continued fraction did not converge for x={x}, a={a}, b={b}")


def regularized_incomplete_beta(x, a, b):
    """I_x(a, b), the CDF of a Beta(a, b) variable at x."""
    x, a, b = float(x), float(a), float(b)
    if not (0.0 <= x <= 1.0) or not (a > 0.0) or not (b > 0.0):
        raise ValueError(f"need 0 <= x <= 1, a > 0, b > 0; got x={x}, a={a}, b={b}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    if x > (a + 1.0) / (a + b + 2.0):
        return 1.0 - regularized_incomplete_beta(1.0 - x, b, a)
    log_front = (
        a * math.log(x) + b * math.log1p(-x)
        - (math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))
        - math.log(a)
    )
    return min(1.0, max(0.0, math.exp(log_front) * _beta_cf(x, a, b)))


def _check_gamma_dim(gamma, dim):
    if not (0.0 <= gamma <= 1.0):
        raise ValueError(f"margin must lie in [0, 1], got {gamma}")
    if int(dim) != dim or dim < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {dim}")


def sector_probability(gamma, dim):
    """Probability that a standard-normal direction is within arcsin(gamma) of a fixed unit vector."""
    gamma = float(gamma)
    _check_gamma_dim(gamma, dim)
    if gamma == 0.0:
        return 0.0
    if gamma == 1.0:
        return 0.5
    return 0.5 * regularized_incomplete_beta(gamma * gamma, (dim - 1) / 2.0, 0.5)


def asymptotic_lower_bound(gamma, dim, regime="fixed-D"):
    """Leading-order sector probability: gamma^(D-1) over pi(D-1) or sqrt(2 pi (D-1))."""
    gamma = float(gamma)
    _check_gamma_dim(gamma, dim)
    if not (0.0 < gamma < 1.0):
        raise ValueError("asymptotic bounds need 0 < gamma < 1")
    lead = gamma ** (dim - 1)
    if regime == "fixed-D":
        return lead / (math.pi * (dim - 1))
    if regime == "large-D":
        return lead / math.sqrt(2.0 * math.pi * (dim - 1))
    raise ValueError(f"unknown regime {regime!r}; use 'fixed-D' or 'large-D'")


@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    stderr: float
    hits: int
    trials: int


def binomial_stderr(hits, trials):
    """Binomial standard error; a zero or full count uses 1/trials as the plug-in rate."""
    p = hits / trials
    p = min(max(p, 1.0 / trials), 1.0 - 1.0 / trials) if trials > 1 else 0.5
    return math.sqrt(p * (1.0 - p) / trials)


def mc_version_space_probability(dataset, trials, seed=None, chunk=1 << 18, workers=1):
    """Fraction of standard-normal hyperplanes that classify every example correctly.

    Trials are cut into fixed-size chunks, each with its own substream, so the count
    does not depend on `workers`.
    """
    trials = int(trials)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sizes = [chunk] * (trials // chunk) + ([trials % chunk] if trials % chunk else [])
    streams = split(seed, len(sizes))
    signed = dataset.signed

    def count(job):
        rng, n = job
        return _kernels.count_in_version_space(rng.standard_normal((n, dataset.dim)), signed)

    jobs = list(zip(streams, sizes))
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(count, jobs))
    else:
        hits = sum(map(count, jobs))
    return MCEstimate(hits / trials, binomial_stderr(hits, trials), int(hits), trials)


def required_sample_count(p, delta):
    """Hyperplanes to draw so that at least one is perfect with probability 1 - delta."""
    p, delta = float(p), float(delta)
    if not (0.0 < p <= 1.0) or not (0.0 < delta < 1.0):
        raise ValueError(f"need 0 < p <= 1 and 0 < delta < 1; got p={p}, delta={delta}")
    k = math.log(1.0 / delta) / p
    # absorb rounding so exact integers are not bumped by one ulp
    return max(1, math.ceil(k - 1e-9 * max(1.0, k)))

import math

import numpy as np
import pytest
from scipy import integrate, special

from vslab.bounds import (
    asymptotic_lower_bound,
    binomial_stderr,
    mc_version_space_probability,
    regularized_incomplete_beta,
    required_sample_count,
    sector_probability,
)
from vslab.datasets import cone_dataset, mohri_hard_dataset


def quad_beta(x, a, b):
    """I_x(a, b) by adaptive quadrature with algebraic endpoint weights."""
    if x <= 0.5:
        val = integrate.quad(lambda t: (1 - t) ** (b - 1), 0, x, weight="alg", wvar=(a - 1, 0))[0]
    else:
        tail = integrate.quad(lambda t: t ** (a - 1), x, 1, weight="alg", wvar=(0, b - 1))[0]
        val = special.beta(a, b) - tail
    return val / special.beta(a, b)


@pytest.mark.parametrize("x,a,b", [(0.3, 2.0, 3.0), (0.9, 0.5, 0.5), (0.01, 5.5, 0.5),
                                   (0.5, 10.0, 10.0), (0.999, 1.0, 7.0)])
def test_beta_matches_quadrature(x, a, b):
    assert regularized_incomplete_beta(x, a, b) == pytest.approx(quad_beta(x, a, b), abs=1e-12)


def test_beta_matches_scipy_and_symmetry():
    rng = np.random.default_rng(4)
    for x, a, b in zip(rng.random(200), rng.uniform(0.1, 30, 200), rng.uniform(0.1, 30, 200)):
        v = regularized_incomplete_beta(x, a, b)
        assert v == pytest.approx(special.betainc(a, b, x), abs=1e-12)
        assert v + regularized_incomplete_beta(1 - x, b, a) == pytest.approx(1.0, abs=1e-12)


def test_beta_domain_errors_and_endpoints():
    assert regularized_incomplete_beta(0.0, 2, 3) == 0.0
    assert regularized_incomplete_beta(1.0, 2, 3) == 1.0
    for bad in [(-0.1, 1, 1), (1.1, 1, 1), (0.5, 0, 1), (0.5, 1, -2)]:
        with pytest.raises(ValueError):
            regularized_incomplete_beta(*bad)


def test_sector_probability_d2_and_d3_closed_forms():
    for g in np.linspace(0.01, 0.99, 25):
        assert sector_probability(g, 2) == pytest.approx(math.asin(g) / math.pi, abs=1e-12)
        # D=3: spherical cap area fraction (1 - cos(theta)) / 2 with sin(theta) = g
        assert sector_probability(g, 3) == pytest.approx((1 - math.sqrt(1 - g * g)) / 2, abs=1e-12)


def test_sector_probability_monotone_in_gamma_and_dim():
    gs = np.linspace(0.05, 0.95, 19)
    for d in range(2, 9):
        vals = [sector_probability(g, d) for g in gs]
        assert np.all(np.diff(vals) > 0)
    for g in (0.1, 0.5):
        assert all(sector_probability(g, d) > sector_probability(g, d + 1) for d in range(2, 12))


def test_asymptotic_bounds():
    # exact leading term in D=2, a lower bound for small margins in higher D
    assert sector_probability(1e-4, 2) == pytest.approx(
        asymptotic_lower_bound(1e-4, 2, "fixed-D"), rel=1e-6)
    for d in range(3, 9):
        for g in (1e-3, 0.05, 0.1):
            assert sector_probability(g, d) >= asymptotic_lower_bound(g, d, "fixed-D")
    # the large-D form is the leading term as D grows at small margin
    r = sector_probability(0.01, 50) / asymptotic_lower_bound(0.01, 50, "large-D")
    assert r == pytest.approx(1.0, rel=0.02)
    with pytest.raises(ValueError):
        asymptotic_lower_bound(0.1, 3, "other")
    with pytest.raises(ValueError):
        sector_probability(1.5, 3)
    with pytest.raises(ValueError):
        sector_probability(0.5, 1)


def test_mc_probability_on_mohri_d2():
    # two examples at 3pi/4 from each other leave a pi/4 wedge: probability 1/8
    est = mc_version_space_probability(mohri_hard_dataset(2), 200_000, seed=1)
    assert abs(est.estimate - 0.125) < 4 * est.stderr


def cone_probability(dim, gamma):
    """Gaussian measure of {|w_j| < t w_0 for j >= 1}, t = gamma / sqrt(1 - gamma^2)."""
    t = gamma / math.sqrt(1.0 - gamma * gamma)
    f = lambda s: math.exp(-s * s / 2) / math.sqrt(2 * math.pi) * math.erf(t * s / math.sqrt(2)) ** (dim - 1)
    return integrate.quad(f, 0, np.inf, epsabs=1e-13)[0]


def test_mc_probability_on_cone_matches_integral():
    for d, g in [(2, 0.3), (3, 0.5), (4, 0.6)]:
        est = mc_version_space_probability(cone_dataset(d, g), 400_000, seed=d)
        assert abs(est.estimate - cone_probability(d, g)) < 4 * est.stderr
        assert cone_probability(d, g) >= sector_probability(g, d) - 1e-12
    assert cone_probability(2, 0.3) == pytest.approx(sector_probability(0.3, 2), abs=1e-10)


def test_mc_probability_is_independent_of_worker_count():
    data = mohri_hard_dataset(3)
    a = mc_version_space_probability(data, 300_000, seed=7, chunk=1 << 15, workers=1)
    b = mc_version_space_probability(data, 300_000, seed=7, chunk=1 << 15, workers=4)
    assert a == b


def test_binomial_stderr_zero_hits_is_positive():
    assert binomial_stderr(0, 100) == pytest.approx(math.sqrt(0.01 * 0.99 / 100))
    assert binomial_stderr(50, 100) == pytest.approx(0.05)


def test_required_sample_count():
    assert required_sample_count(0.5, math.exp(-1)) == 2
    assert required_sample_count(1.0, 0.5) == 1
    assert required_sample_count(0.5, 0.01) == math.ceil(2 * math.log(100))
    with pytest.raises(ValueError):
        required_sample_count(0.0, 0.1)

"""Exact Grover-search simulation in the two-dimensional marked/unmarked subspace.

Starting from the uniform superposition, the Grover iterate only rotates within
span{uniform over marked, uniform over unmarked}, so k iterations are described by a
single angle and no 2^n state vector is needed.
"""
import math

import numpy as np

from .ledger import QueryLedger
from .rng import make_rng

GROWTH = 6.0 / 5.0
BUDGET_FACTOR = 9.0


class MarkedOracle:
    """Predicate over indices ``0..size-1`` with query accounting.

    ``query(i)`` is a classical evaluation and charges one classical query. The
    simulators need the whole marked set; they read it through ``marked()``, which is
    free because it stands in for the coherent oracle whose calls are charged as
    quantum queries by the caller.
    """

    def __init__(self, size, is_marked, ledger=None, mask=None):
        if size < 1:
            raise ValueError("oracle size must be >= 1")
        self.size = int(size)
        self._is_marked = is_marked
        self._mask_fn = mask
        self._marked = None
        self.ledger = ledger if ledger is not None else QueryLedger()

    def query(self, i):
        self.ledger.charge(classical_queries=1)
        return bool(self._is_marked(int(i)))

    def marked(self):
        if self._marked is None:
            if self._mask_fn is not None:
                m = np.asarray(self._mask_fn(), dtype=bool)
                if m.shape != (self.size,):
                    raise ValueError("mask has the wrong length")
                self._marked = np.flatnonzero(m)
            else:
                self._marked = np.array(
                    [i for i in range(self.size) if self._is_marked(i)], dtype=np.int64
                )
        return self._marked

    @property
    def marked_count(self):
        return int(self.marked().size)

    @classmethod
    def from_mask(cls, mask, ledger=None):
        mask = np.asarray(mask, dtype=bool)
        return cls(mask.size, lambda i: bool(mask[i]), ledger, mask=lambda: mask)


def grover_angle(n, m):
    return math.asin(math.sqrt(m / n))


def grover_success_probability(n, m, k):
    """sin^2((2k+1) theta) with sin^2 theta = M/N; zero when nothing is marked."""
    if n < 1 or m < 0 or m > n or k < 0:
        raise ValueError(f"need 0 <= M <= N, N >= 1, k >= 0; got N={n}, M={m}, k={k}")
    if m == 0:
        return 0.0
    return math.sin((2 * k + 1) * grover_angle(n, m)) ** 2


def grover_sample(oracle, k, seed=None):
    """Measure after k Grover iterations; charges k quantum queries."""
    rng = make_rng(seed)
    k = int(k)
    if k < 0:
        raise ValueError("k must be >= 0")
    oracle.ledger.charge(quantum_queries=k)
    marked = oracle.marked()
    n, m = oracle.size, marked.size
    if rng.random() < grover_success_probability(n, m, k):
        return int(marked[rng.integers(m)])
    # uniform over the complement, without materialising it
    r = int(rng.integers(n - m))
    for idx in marked:  # marked is sorted
        if idx <= r:
            r += 1
        else:
            break
    return r


def qsearch(oracle, seed=None, growth=GROWTH, budget_factor=BUDGET_FACTOR):
    """Search with an unknown number of marked items.

    Iteration counts are drawn uniformly from ``0..ceil(min(growth^j, sqrt N))`` for
    j = 0, 1, ...; every candidate is checked with one classical query. Returns the
    first verified marked index, or None once the next draw would exceed
    ``budget_factor * sqrt(N)`` quantum queries.
    """
    rng = make_rng(seed)
    n = oracle.size
    root = math.sqrt(n)
    budget = budget_factor * root
    scale = 1.0
    spent = 0
    # growth^j reaches sqrt N after log_growth(sqrt N) steps; the rest is a safety cap
    max_attempts = int(math.ceil(math.log(max(root, 1.0)) / math.log(growth))) + 64
    for _ in range(max_attempts):
        k = int(rng.integers(0, math.ceil(min(scale, root)) + 1))
        if spent + k > budget:
            return None
        spent += k
        idx = grover_sample(oracle, k, rng)
        if oracle.query(idx):
            return idx
        scale *= growth
    return None


def _fejer(delta, t):
    """|2^-t sum_{j<2^t} e^{i j delta}|^2, the phase-estimation outcome kernel."""
    q = 1 << t
    half = 0.5 * delta
    s = np.sin(half)
    out = np.ones_like(delta)
    nz = np.abs(s) > 1e-300
    out[nz] = (np.sin(q * half[nz]) / (q * s[nz])) ** 2
    return out


def counting_distribution(n, m, precision_bits):
    """Exact distribution of the t-bit phase-estimation outcome on the Grover iterate."""
    t = int(precision_bits)
    q = 1 << t
    theta = grover_angle(n, m)
    grid = 2.0 * np.pi * np.arange(q) / q
    p = 0.5 * _fejer(2.0 * theta - grid, t) + 0.5 * _fejer(-2.0 * theta - grid, t)
    return p / p.sum()


def quantum_counting(oracle, precision_bits, seed=None):
    """Estimate the number of marked items; charges 2^precision_bits quantum queries.

    The index set is padded with unmarked items to the next power of two, as a circuit
    on n qubits would require.
    """
    t = int(precision_bits)
    if not (1 <= t <= 20):
        raise ValueError("precision_bits must lie in 1..20")
    rng = make_rng(seed)
    n_pad = 1 << max(0, (oracle.size - 1).bit_length())
    m = oracle.marked_count
    oracle.ledger.charge(quantum_queries=1 << t)
    p = counting_distribution(n_pad, m, t)
    y = int(rng.choice(p.size, p=p))
    return int(round(n_pad * math.sin(math.pi * y / (1 << t)) ** 2))


def swap_test_overlap(a, b, shots, seed=None):
    """Estimate |<a|b>|^2 from `shots` simulated swap tests."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("states must be 1-D and of equal length")
    for v in (a, b):
        if abs(np.linalg.norm(v) - 1.0) > 1e-9:
            raise ValueError("states must have unit norm")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = make_rng(seed)
    accept = 0.5 * (1.0 + abs(np.vdot(a, b)) ** 2)
    rate = rng.binomial(int(shots), min(1.0, accept)) / shots
    return float(min(1.0, max(0.0, 2.0 * rate - 1.0)))

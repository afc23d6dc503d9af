import math

import numpy as np
import pytest

from vslab.ledger import QueryLedger
from vslab.qsearch import (
    MarkedOracle,
    counting_distribution,
    grover_sample,
    grover_success_probability,
    qsearch,
    quantum_counting,
    swap_test_overlap,
)
from vslab.rng import make_rng


def _oracle(n, marked, ledger=None):
    mask = np.zeros(n, dtype=bool)
    mask[list(marked)] = True
    return MarkedOracle.from_mask(mask, ledger)


def test_success_probability_closed_form():
    # N=4, M=1: theta = pi/6, one iteration rotates to the marked state exactly
    assert grover_success_probability(4, 1, 1) == pytest.approx(1.0, abs=1e-15)
    assert grover_success_probability(4, 1, 0) == pytest.approx(0.25)
    assert grover_success_probability(8, 0, 3) == 0.0
    assert grover_success_probability(8, 8, 2) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        grover_success_probability(4, 5, 1)


def test_success_probability_matches_dense_simulation():
    # oracle = diag(+-1), diffusion = 2|s><s| - I, applied to a full state vector
    n = 16
    marked = [3, 7, 11]
    s = np.full(n, 1 / math.sqrt(n))
    sign = np.ones(n)
    sign[marked] = -1
    psi = s.copy()
    for k in range(8):
        p = float(np.sum(psi[marked] ** 2))
        assert p == pytest.approx(grover_success_probability(n, len(marked), k), abs=1e-12)
        psi = sign * psi
        psi = 2 * s * (s @ psi) - psi


def test_grover_sample_charges_and_returns_valid_index():
    ledger = QueryLedger()
    oracle = _oracle(32, [5], ledger)
    rng = make_rng(0)
    outs = [grover_sample(oracle, 3, rng) for _ in range(200)]
    assert ledger.quantum_queries == 600
    assert ledger.classical_queries == 0
    assert all(0 <= o < 32 for o in outs)


def test_grover_sample_failure_branch_avoids_marked():
    oracle = _oracle(8, [0, 2, 3])
    rng = make_rng(2)
    # k=0 with M/N = 3/8: failures must land on the 5 unmarked items, uniformly
    counts = np.zeros(8)
    for _ in range(20000):
        counts[grover_sample(oracle, 0, rng)] += 1
    assert np.allclose(counts / 20000, 1 / 8, atol=0.012)


def test_qsearch_finds_marked_and_respects_budget():
    for n, m in [(16, 1), (64, 3), (1024, 1), (1000, 10)]:
        ledger = QueryLedger()
        oracle = _oracle(n, range(m), ledger)
        found = [qsearch(oracle, seed) for seed in range(40)]
        assert sum(f is not None for f in found) >= 30
        assert all(f is None or f < m for f in found)


def test_qsearch_no_marked_returns_none_within_budget():
    for n in (4, 100, 4096):
        ledger = QueryLedger()
        assert qsearch(_oracle(n, []), 1) is None
        oracle = _oracle(n, [], ledger)
        assert qsearch(oracle, 3) is None
        assert ledger.quantum_queries <= 9 * math.sqrt(n)


def test_oracle_validation():
    with pytest.raises(ValueError):
        MarkedOracle(0, lambda i: False)
    o = MarkedOracle(5, lambda i: i in (1, 4))
    assert o.marked().tolist() == [1, 4]
    assert o.marked_count == 2
    assert o.query(4) and o.ledger.classical_queries == 1


def test_counting_distribution_normalized_and_peaked():
    p = counting_distribution(64, 4, 8)
    assert p.sum() == pytest.approx(1.0)
    y = int(np.argmax(p))
    assert 64 * math.sin(math.pi * y / 256) ** 2 == pytest.approx(4, abs=0.3)


def test_quantum_counting_exact_case_and_cost():
    ledger = QueryLedger()
    oracle = _oracle(4, [2], ledger)
    assert {quantum_counting(oracle, 10, s) for s in range(50)} == {1}
    assert ledger.quantum_queries == 50 * 1024
    with pytest.raises(ValueError):
        quantum_counting(oracle, 0)


def test_quantum_counting_accuracy():
    oracle = _oracle(200, range(20))
    est = [quantum_counting(oracle, 9, s) for s in range(200)]
    assert np.median(est) == pytest.approx(20, abs=2)


def test_swap_test():
    a = np.array([1, 0], dtype=complex)
    b = np.array([1, 1], dtype=complex) / math.sqrt(2)
    assert swap_test_overlap(a, a, 1000, 0) == 1.0
    est = swap_test_overlap(a, b, 200_000, 1)
    assert est == pytest.approx(0.5, abs=0.01)
    with pytest.raises(ValueError):
        swap_test_overlap(a, np.array([1, 1]), 10)

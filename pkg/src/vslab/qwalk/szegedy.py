"""Szegedy walk operators, exact reflections and phase-estimation reflections.

Index convention for the doubled space: basis state |x>|y> sits at position x*d + y, and
the reference state |0> of the second register is grid index 0.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import hadamard, schur

from ..rng import make_rng

OMEGA = np.exp(1j * np.pi / 3.0)
MAX_WALK_DIM = 10_000
MAX_REFLECTION_SIZE = 1_000_000
MAX_ANCILLA_BITS = 12
ZERO_PHASE = 1e-8


class ResourceGuardError(ValueError):
    pass


def _householder_completion(v, rng=None):
    """Real orthogonal matrix whose first column is the unit vector v."""
    d = v.size
    e0 = np.zeros(d)
    e0[0] = 1.0
    u = e0 - v
    nu = np.linalg.norm(u)
    if nu < 1e-15:
        return np.eye(d)
    u /= nu
    return np.eye(d) - 2.0 * np.outer(u, u)


def _qr_completion(v, rng):
    """Random complex unitary with first column v, from a QR factorisation."""
    d = v.size
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m[:, 0] = v
    q, r = np.linalg.qr(m)
    q = q * (np.diag(r) / np.abs(np.diag(r)))  # makes diag(r) positive, so q[:, 0] = v
    return q


COMPLETIONS = {"householder": _householder_completion, "qr": _qr_completion}


@dataclass(eq=False)
class SzegedyWalk:
    kernel: object
    update: np.ndarray  # U(P)
    unitary: np.ndarray  # W(P)
    phases: np.ndarray  # eigenphases in (-pi, pi]
    eigvecs: np.ndarray  # unitary Z with W = Z diag(e^{i phases}) Z^H

    @property
    def d(self):
        return self.kernel.size

    @property
    def phase_gap(self):
        nz = np.abs(self.phases)[np.abs(self.phases) > ZERO_PHASE]
        return float(nz.min()) if nz.size else math.pi

    def stationary_distribution(self):
        """Stationary distribution of P; exactly uniform when P is symmetric."""
        p = np.asarray(self.kernel.transition, dtype=np.float64)
        d = p.shape[0]
        if np.allclose(p, p.T, atol=1e-14):
            return np.full(d, 1.0 / d)
        vals, vecs = np.linalg.eig(p.T)
        pi = np.abs(vecs[:, np.argmin(np.abs(vals - 1.0))].real)
        return pi / pi.sum()

    def stationary_state(self):
        """sum_x sqrt(pi_x) |x>|0>, fixed by W(P) for a reversible chain."""
        d = self.d
        s = np.zeros(d * d, dtype=complex)
        s[np.arange(d) * d] = np.sqrt(self.stationary_distribution())
        return s

    def a_space_basis(self):
        """Columns |x>|0>, an orthonormal basis of the span the walk starts in."""
        d = self.d
        b = np.zeros((d * d, d), dtype=complex)
        b[np.arange(d) * d, np.arange(d)] = 1.0
        return b

    def unitarity_residual(self):
        w = self.unitary
        return float(np.linalg.norm(w.conj().T @ w - np.eye(w.shape[0]), 2))

    def stationarity_residual(self):
        s = self.stationary_state()
        return float(np.linalg.norm(self.unitary @ s - s))


def swap_permutation(d):
    idx = np.arange(d * d)
    return (idx % d) * d + idx // d


def build_szegedy(kernel, completion="householder", seed=None):
    """Assemble W(P) = (U^H S U) R_A (U^H S U) R_A from a unitary completion U of the update."""
    p = np.asarray(kernel.transition, dtype=np.float64)
    d = p.shape[0]
    if d * d > MAX_WALK_DIM:
        raise ResourceGuardError(f"d^2 = {d * d} exceeds {MAX_WALK_DIM}")
    rng = make_rng(seed)
    make_block = COMPLETIONS[completion]
    u = np.zeros((d * d, d * d), dtype=complex)
    for x in range(d):
        v = np.sqrt(np.clip(p[x], 0.0, None))
        u[x * d:(x + 1) * d, x * d:(x + 1) * d] = make_block(v, rng)
    perm = swap_permutation(d)
    sus = u.conj().T @ u[perm]  # U^H S U, with S U = U[perm] as S permutes rows
    ra = -np.eye(d * d, dtype=complex)
    a_idx = np.arange(d) * d
    ra[a_idx, a_idx] = 1.0
    half = sus @ ra
    w = half @ half
    t, z = schur(w, output="complex")
    phases = np.angle(np.diag(t))
    return SzegedyWalk(kernel, u, w, phases, z)


def reflection_about_state(state, phase=OMEGA):
    """phase * |s><s| + (I - |s><s|) as a dense matrix."""
    s = np.asarray(state, dtype=complex).ravel()
    if abs(np.linalg.norm(s) - 1.0) > 1e-10:
        raise ValueError("state must have unit norm")
    return np.eye(s.size, dtype=complex) + (phase - 1.0) * np.outer(s, s.conj())


class StateReflection:
    """Matrix-free phase * |s><s| + (I - |s><s|), acting on the rows of a (dim, K) array."""

    def __init__(self, state, phase=OMEGA):
        s = np.asarray(state, dtype=complex).ravel()
        if abs(np.linalg.norm(s) - 1.0) > 1e-10:
            raise ValueError("state must have unit norm")
        self.state = s
        self.phase = complex(phase)

    def _apply(self, v, phase):
        v = np.asarray(v, dtype=complex)
        flat = v.ndim == 1
        m = v.reshape(self.state.size, -1)
        out = m + (phase - 1.0) * np.outer(self.state, self.state.conj() @ m)
        return out.ravel() if flat else out

    def apply(self, v):
        return self._apply(v, self.phase)

    def apply_adjoint(self, v):
        return self._apply(v, np.conj(self.phase))


def fejer(phi, bits):
    """Probability that a `bits`-bit phase estimation of phase phi reads 0."""
    q = 1 << bits
    phi = np.asarray(phi, dtype=np.float64)
    s = np.sin(0.5 * phi)
    out = np.ones_like(phi)
    nz = np.abs(s) > 1e-300
    out[nz] = (np.sin(0.5 * q * phi[nz]) / (q * s[nz])) ** 2
    return np.clip(out, 0.0, 1.0)


def choose_register_split(phases, ancilla_bits):
    """Pick (a, c) with a*c <= ancilla_bits minimising max_j F_a(phi_j)^c over nonzero phases.

    Ties go to the split with fewer controlled-walk uses c*(2^a - 1).
    """
    if not (1 <= ancilla_bits <= MAX_ANCILLA_BITS):
        raise ResourceGuardError(f"ancilla_bits must lie in 1..{MAX_ANCILLA_BITS}")
    nz = np.asarray(phases)[np.abs(phases) > ZERO_PHASE]
    best = None
    for a in range(1, ancilla_bits + 1):
        c = ancilla_bits // a
        eps2 = float(np.max(fejer(nz, a)) ** c) if nz.size else 0.0
        key = (eps2, c * ((1 << a) - 1))
        if best is None or key < best[0]:
            best = (key, a, c)
    (eps2, _), a, c = best
    return a, c, eps2


def ancilla_vectors(phases, a, c):
    """Rows h_j = (H^{(x)a} u_a(phi_j))^{(x)c} with u_a(phi)_k = e^{-i k phi} / sqrt(2^a).

    For an eigenvector of phase phi, the circuit V^H (phase on |0>) V acts on the ancilla
    register as I + (phase - 1) |h><h|.
    """
    q = 1 << a
    had = hadamard(q) / math.sqrt(q)
    k = np.arange(q)
    u = np.exp(-1j * np.outer(np.asarray(phases), k)) / math.sqrt(q)
    single = u @ had.T
    out = single
    for _ in range(c - 1):
        out = np.einsum("ji,jk->jik", out, single).reshape(out.shape[0], -1)
    return out


class _PhaseReflection:
    """Shared ancilla arithmetic; subclasses map walk coordinates to eigen-coordinates."""

    phase = OMEGA

    def _setup(self, phases, ancilla_bits):
        self.a, self.c, self.eps2 = choose_register_split(phases, ancilla_bits)
        self.ancilla_dim = 1 << (self.a * self.c)
        self.walk_uses = 2 * self.c * ((1 << self.a) - 1)  # V and V^H
        self._h = ancilla_vectors(phases, self.a, self.c)
        zero = np.abs(phases) <= ZERO_PHASE
        self._h[zero] = 0.0
        self._h[zero, 0] = 1.0

    def _ancilla_step(self, coeffs, phase):
        h = self._h
        overlap = np.einsum("jk,jk->j", h.conj(), coeffs)
        return coeffs + (phase - 1.0) * h * overlap[:, None]

    def embed(self, v):
        """Walk-register vector -> (dim, ancilla_dim) array with ancilla |0...0>."""
        out = np.zeros((v.size, self.ancilla_dim), dtype=complex)
        out[:, 0] = v
        return out


class ApproxReflection(_PhaseReflection):
    """Phase-estimation reflection built from the eigendecomposition of an explicit walk."""

    def __init__(self, walk, ancilla_bits):
        d2 = walk.unitary.shape[0]
        self.walk = walk
        self.phases = walk.phases
        self._setup(walk.phases, ancilla_bits)
        if d2 * self.ancilla_dim > MAX_REFLECTION_SIZE:
            raise ResourceGuardError(f"d^2 * 2^(ac) = {d2 * self.ancilla_dim} exceeds {MAX_REFLECTION_SIZE}")

    def _run(self, state, phase):
        z = self.walk.eigvecs
        coeffs = z.conj().T @ np.asarray(state, dtype=complex)
        return z @ self._ancilla_step(coeffs, phase)

    def apply(self, state):
        return self._run(state, self.phase)

    def apply_adjoint(self, state):
        return self._run(state, np.conj(self.phase))

    def error_on_start_space(self, target=None):
        """Operator norm of (R~ - R_exact) on inputs |x>|0> (x) |0...0>."""
        target = self.walk.stationary_state() if target is None else target
        basis = self.walk.a_space_basis()
        cols = []
        exact = StateReflection(target, self.phase)
        for j in range(basis.shape[1]):
            v = basis[:, j]
            out = self.apply(self.embed(v))
            ref = self.embed(exact.apply(v))
            cols.append((out - ref).ravel())
        return float(np.linalg.norm(np.array(cols).T, 2))


@dataclass(eq=False)
class SpectralWalk:
    """Szegedy walk of a symmetric chain described through the chain's own spectrum.

    For each eigenpair (lambda_j, a_j) of P the walk acts on span{a_j|0>, beta_j}, with
    beta_j the normalised part of (U^H S U) a_j|0> orthogonal to a_j|0>, as a rotation by
    2 arccos(lambda_j). States are (2n, K) arrays: rows 0..n-1 hold x-basis amplitudes on
    |x>|0>, rows n..2n-1 hold beta_j coefficients.
    """

    transition: np.ndarray
    eigvals: np.ndarray
    eigvecs: np.ndarray

    @classmethod
    def from_transition(cls, p):
        p = np.asarray(p, dtype=np.float64)
        if not np.allclose(p, p.T, atol=1e-12):
            raise ValueError("spectral walks need a symmetric transition matrix")
        vals, vecs = np.linalg.eigh(p)
        return cls(p, np.clip(vals, -1.0, 1.0), vecs)

    @property
    def n(self):
        return self.transition.shape[0]

    @property
    def angles(self):
        return np.arccos(self.eigvals)

    @property
    def moving(self):
        """Blocks with a genuine two-dimensional rotation (lambda_j < 1)."""
        return self.eigvals < 1.0 - 1e-12

    def eigenphases(self):
        th = 2.0 * self.angles[self.moving]
        still = np.zeros(int((~self.moving).sum()))
        return np.concatenate([still, th, -th])

    @property
    def phase_gap(self):
        th = 2.0 * self.angles[self.moving]
        if th.size == 0:
            return math.pi
        return float(np.min(np.minimum(th, 2 * math.pi - th)))


class ReducedApproxReflection(_PhaseReflection):
    """The phase-estimation reflection of a SpectralWalk, acting on (2n, K) arrays."""

    def __init__(self, walk, ancilla_bits):
        self.walk = walk
        mv = walk.moving
        self._still = np.flatnonzero(~mv)
        self._move = np.flatnonzero(mv)
        th = 2.0 * walk.angles[self._move]
        phases = np.concatenate([np.zeros(self._still.size), th, -th])
        self.phases = phases
        self._setup(phases, ancilla_bits)
        if 2 * walk.n * self.ancilla_dim > MAX_REFLECTION_SIZE:
            raise ResourceGuardError(
                f"2n * 2^(ac) = {2 * walk.n * self.ancilla_dim} exceeds {MAX_REFLECTION_SIZE}")

    def _run(self, state, phase):
        n = self.walk.n
        state = np.asarray(state, dtype=complex)
        alpha_hat = self.walk.eigvecs.T @ state[:n]
        beta = state[n:]
        s, m = self._still, self._move
        r2 = math.sqrt(2.0)
        plus = (alpha_hat[m] + 1j * beta[m]) / r2
        minus = (alpha_hat[m] - 1j * beta[m]) / r2
        coeffs = self._ancilla_step(np.vstack([alpha_hat[s], plus, minus]), phase)
        ns, nm = s.size, m.size
        plus, minus = coeffs[ns:ns + nm], coeffs[ns + nm:]
        out_alpha = np.empty_like(alpha_hat)
        out_beta = beta.copy()
        out_alpha[s] = coeffs[:ns]
        out_alpha[m] = (plus + minus) / r2
        out_beta[m] = (plus - minus) / (1j * r2)
        return np.vstack([self.walk.eigvecs @ out_alpha, out_beta])

    def apply(self, state):
        return self._run(state, self.phase)

    def apply_adjoint(self, state):
        return self._run(state, np.conj(self.phase))

    def embed(self, alpha):
        out = np.zeros((2 * self.walk.n, self.ancilla_dim), dtype=complex)
        out[: self.walk.n, 0] = alpha
        return out


def reduced_to_full(szegedy, spectral, state):
    """Map a (2n, K) reduced array to the (n^2, K) array of the explicit walk."""
    d = spectral.n
    a_basis = szegedy.a_space_basis()
    sus_a = szegedy.update.conj().T @ szegedy.update[swap_permutation(d)] @ a_basis
    full = a_basis @ state[:d]
    for j in np.flatnonzero(spectral.moving):
        aj = a_basis @ spectral.eigvecs[:, j]
        bj = sus_a @ spectral.eigvecs[:, j]
        lam = spectral.eigvals[j]
        beta_vec = (bj - lam * aj) / math.sqrt(1.0 - lam * lam)
        full = full + np.outer(beta_vec, state[d + j])
    return full

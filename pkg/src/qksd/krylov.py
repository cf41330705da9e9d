"""Projected matrix pairs (H, S) on the real-time Krylov basis.

The basis is |phi_k> = U(k*dt)|phi_0> over the symmetric index grid
k in {-floor(n/2), ..., +floor(n/2)}.  Because matrix entries depend only on
index differences when U commutes with H, the Toeplitz sequences

    h_k = <phi_0|H U(k*dt)|phi_0>,   s_k = <phi_0|U(k*dt)|phi_0>

for k = 0..n-1 determine the whole pair; the symmetric grid is absorbed as a
relabeling.  The non-Toeplitz mode instead fills H elementwise from the basis
states, which matters once the propagator only approximately commutes with H
(Trotterization) or when each element is sampled independently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evolution import Spectrum
from .hamiltonian import UnitaryPartition, fragment_dense


@dataclass(frozen=True)
class KrylovConfig:
    """Krylov order and time step; the index grid is symmetric about zero."""

    n: int
    dt: float

    def __post_init__(self):
        if self.n < 1 or self.n % 2 == 0:
            raise ValueError("Krylov order n must be odd and >= 1")
        if not self.dt > 0:
            raise ValueError("time step must be positive")

    @property
    def grid(self) -> np.ndarray:
        half = self.n // 2
        return np.arange(-half, half + 1)


@dataclass(frozen=True)
class ToeplitzSequences:
    """h_k and s_k for k = 0..n-1; negative indices follow by conjugation."""

    h: np.ndarray
    s: np.ndarray

    @property
    def n(self) -> int:
        return len(self.s)


@dataclass(frozen=True)
class KrylovPair:
    H: np.ndarray
    S: np.ndarray
    construction: str  # "toeplitz" | "nontoeplitz"
    config: KrylovConfig


@dataclass(frozen=True)
class MeasurementTargets:
    """Exact values behind every Hadamard-test configuration of one system.

    s_seq[k] is the overlap sequence (k = 0..n-1).  In toeplitz mode
    frag[j, k] = <phi_0|U_j U(k*dt)|phi_0>; in nontoeplitz mode
    frag[j, k, l] = <phi_k|U_j|phi_l> over the symmetric grid.  The identity
    coefficient is carried separately: it is never sampled, its contribution
    id_coeff * s_k is added back analytically.
    """

    construction: str
    config: KrylovConfig
    betas: np.ndarray
    id_coeff: float
    s_seq: np.ndarray
    frag: np.ndarray

    @property
    def n(self) -> int:
        return self.config.n


def default_time_step(partition: UnitaryPartition) -> float:
    """dt = pi / (1-norm of partition weights), the widest aliasing-free step."""
    norm = partition.beta_norm
    if not norm > 0:
        raise ValueError("partition weight norm must be positive")
    return float(np.pi / norm)


def exact_sequences(spec: Spectrum, ref_state: np.ndarray, cfg: KrylovConfig) -> ToeplitzSequences:
    """Toeplitz sequences from the spectral decomposition (exact propagators).

    With amplitudes gamma_j = <psi_j|phi_0>, the sequences are
    s_k = sum_j |gamma_j|^2 e^{-i E_j k dt} and h_k carries an extra E_j.
    """
    amps = spec.eigenvectors.conj().T @ ref_state
    weights = np.abs(amps) ** 2
    ks = np.arange(cfg.n)
    phases = np.exp(-1j * np.outer(spec.eigenvalues * cfg.dt, ks))
    s = weights @ phases
    h = (weights * spec.eigenvalues) @ phases
    s[0] = 1.0  # normalization, exact by construction
    h[0] = h[0].real
    return ToeplitzSequences(h=h, s=s)


def sequences_from_step(
    h_dense: np.ndarray, ref_state: np.ndarray, step: np.ndarray, cfg: KrylovConfig
) -> ToeplitzSequences:
    """Sequences for an arbitrary one-step propagator (e.g. Trotterized)."""
    h = np.empty(cfg.n, dtype=complex)
    s = np.empty(cfg.n, dtype=complex)
    phi = ref_state.astype(complex)
    bra = ref_state.conj()
    h_bra = (h_dense @ ref_state).conj()
    for k in range(cfg.n):
        s[k] = bra @ phi
        h[k] = h_bra @ phi
        phi = step @ phi
    s[0] = 1.0
    h[0] = h[0].real
    return ToeplitzSequences(h=h, s=s)


def toeplitz_matrix(seq: np.ndarray) -> np.ndarray:
    """Hermitian Toeplitz matrix with entry (k,l) = seq[l-k], conjugated below."""
    n = len(seq)
    idx = np.subtract.outer(np.arange(n), np.arange(n))  # idx[k,l] = k - l
    base = seq[np.abs(idx)]
    return np.where(idx <= 0, base, base.conj())


def toeplitz_pair(seq: ToeplitzSequences, cfg: KrylovConfig) -> KrylovPair:
    if seq.n != cfg.n:
        raise ValueError("sequence length does not match Krylov order")
    return KrylovPair(
        H=toeplitz_matrix(seq.h), S=toeplitz_matrix(seq.s), construction="toeplitz", config=cfg
    )


def _basis_states(ref_state: np.ndarray, step: np.ndarray, cfg: KrylovConfig) -> np.ndarray:
    """Columns |phi_k> = step^k |phi_0> over the symmetric grid."""
    half = cfg.n // 2
    dim = len(ref_state)
    cols = {0: ref_state.astype(complex)}
    fwd = ref_state.astype(complex)
    for k in range(1, half + 1):
        fwd = step @ fwd
        cols[k] = fwd
    step_dag = step.conj().T
    bwd = ref_state.astype(complex)
    for k in range(1, half + 1):
        bwd = step_dag @ bwd
        cols[-k] = bwd
    out = np.empty((dim, cfg.n), dtype=complex)
    for j, g in enumerate(cfg.grid):
        out[:, j] = cols[int(g)]
    return out


def nontoeplitz_pair(
    h_dense: np.ndarray, ref_state: np.ndarray, step: np.ndarray, cfg: KrylovConfig
) -> KrylovPair:
    """Elementwise H_kl = <phi_k|H|phi_l>; S stays Toeplitz (step is unitary)."""
    psi = _basis_states(ref_state, step, cfg)
    h_mat = psi.conj().T @ h_dense @ psi
    h_mat = 0.5 * (h_mat + h_mat.conj().T)  # remove floating asymmetry
    s_seq = np.empty(cfg.n, dtype=complex)
    phi = ref_state.astype(complex)
    bra = ref_state.conj()
    for k in range(cfg.n):
        s_seq[k] = bra @ phi
        phi = step @ phi
    s_seq[0] = 1.0
    return KrylovPair(
        H=h_mat, S=toeplitz_matrix(s_seq), construction="nontoeplitz", config=cfg
    )


def build_pair(
    cfg: KrylovConfig,
    construction: str,
    sequences: ToeplitzSequences | None = None,
    h_dense: np.ndarray | None = None,
    ref_state: np.ndarray | None = None,
    step: np.ndarray | None = None,
) -> KrylovPair:
    """Dispatch to the Toeplitz or elementwise builder."""
    if construction == "toeplitz":
        if sequences is None:
            raise ValueError("toeplitz construction needs sequences")
        return toeplitz_pair(sequences, cfg)
    if construction == "nontoeplitz":
        if h_dense is None or ref_state is None or step is None:
            raise ValueError("nontoeplitz construction needs h_dense, ref_state, step")
        return nontoeplitz_pair(h_dense, ref_state, step, cfg)
    raise ValueError(f"unknown construction {construction!r}")


def measurement_targets(
    spec: Spectrum,
    partition: UnitaryPartition,
    id_coeff: float,
    ref_state: np.ndarray,
    cfg: KrylovConfig,
    construction: str,
) -> MeasurementTargets:
    """Exact per-fragment Hadamard-test values, computed by dense algebra.

    Fragments U_j are Hermitian unitaries, so <phi|U_j U(k dt)|phi> =
    (U_j phi)^dag (U(k dt) phi); all overlaps lie in the closed unit disk.
    """
    if construction == "toeplitz":
        ks = np.arange(cfg.n)
    elif construction == "nontoeplitz":
        ks = cfg.grid
    else:
        raise ValueError(f"unknown construction {construction!r}")
    seq = exact_sequences(spec, ref_state, cfg)
    amps = spec.eigenvectors.conj().T @ ref_state
    phases = np.exp(-1j * np.outer(spec.eigenvalues * cfg.dt, ks))
    psi = spec.eigenvectors @ (phases * amps[:, None])  # columns U(k dt)|phi_0>
    frags = [fragment_dense(partition, j) for j in range(partition.n_groups)]
    if construction == "toeplitz":
        frag = np.array([(u @ ref_state).conj() @ psi for u in frags])
    else:
        frag = np.array([psi.conj().T @ (u @ psi) for u in frags])
        frag = 0.5 * (frag + np.transpose(frag, (0, 2, 1)).conj())
    return MeasurementTargets(
        construction=construction,
        config=cfg,
        betas=partition.betas,
        id_coeff=id_coeff,
        s_seq=seq.s,
        frag=frag,
    )

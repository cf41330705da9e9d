"""Dense spectra, exact and Trotterized propagators, and the reference state.

Everything here assumes perfectly simulated dynamics: propagators come from a
full eigendecomposition of the dense Hamiltonian, so e^{-iHt} is exact to
floating precision.  The first-order Trotter product exists to quantify what
changes when the propagator only approximately commutes with H.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import PauliSum, pauli_to_dense


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition H = V diag(E) V^dag with ascending eigenvalues."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class Propagator:
    """Unitary time-evolution matrix with provenance metadata."""

    matrix: np.ndarray
    time: float
    kind: str  # "exact" or "trotter"
    steps: int = 0  # Trotter repetitions; 0 for exact
    n_fragments: int = 0  # non-identity terms in the Trotter product


def diagonalize(h_dense: np.ndarray) -> Spectrum:
    """Hermitian eigendecomposition with ascending eigenvalues."""
    vals, vecs = np.linalg.eigh(h_dense)
    return Spectrum(eigenvalues=vals, eigenvectors=vecs)


def exact_propagator(spec: Spectrum, t: float) -> Propagator:
    """U(t) = V diag(e^{-iE t}) V^dag."""
    phases = np.exp(-1j * spec.eigenvalues * t)
    u = (spec.eigenvectors * phases) @ spec.eigenvectors.conj().T
    return Propagator(matrix=u, time=t, kind="exact")


def _term_exponential(coeff: float, dense_string: np.ndarray, t: float) -> np.ndarray:
    # exp(-i c t P) = cos(ct) I - i sin(ct) P for any Pauli string P (P^2 = I).
    angle = coeff * t
    dim = dense_string.shape[0]
    return np.cos(angle) * np.eye(dim, dtype=complex) - 1j * np.sin(angle) * dense_string


def trotter_propagator(h: PauliSum, t: float, steps: int) -> Propagator:
    """First-order product of per-Pauli-term exponentials, repeated `steps` times.

    The identity term commutes with everything and is applied as an exact
    global phase.  Error versus the exact propagator falls off as 1/steps.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    terms = h.non_identity_terms
    dim = 2**h.n_qubits
    dt = t / steps
    one_step = np.eye(dim, dtype=complex)
    for coeff, string in terms:
        one_step = _term_exponential(coeff, pauli_to_dense(string), dt) @ one_step
    u = np.linalg.matrix_power(one_step, steps)
    u = np.exp(-1j * h.identity_coefficient * t) * u
    return Propagator(
        matrix=u, time=t, kind="trotter", steps=steps, n_fragments=len(terms)
    )


# ---------------------------------------------------------------------------
# Particle-number sectors and the Hartree-Fock reference
# ---------------------------------------------------------------------------


def sector_indices(L: int, n_up: int, n_down: int) -> np.ndarray:
    """Fock-basis indices with n_up up-spins and n_down down-spins.

    Interleaved mode ordering: mode 2i (qubit 2i) is site-i spin-up, mode
    2i+1 spin-down.  Qubit q occupies bit (n_qubits - 1 - q) of the basis
    index, matching the Kronecker order of pauli_to_dense.
    """
    nq = 2 * L
    idx = []
    for b in range(2**nq):
        ups = sum((b >> (nq - 1 - (2 * i))) & 1 for i in range(L))
        downs = sum((b >> (nq - 1 - (2 * i + 1))) & 1 for i in range(L))
        if ups == n_up and downs == n_down:
            idx.append(b)
    return np.array(idx, dtype=int)


def sector_ground_energy(h_dense: np.ndarray, L: int, n_up: int, n_down: int) -> float:
    """Lowest eigenvalue of h_dense restricted to the (n_up, n_down) sector."""
    idx = sector_indices(L, n_up, n_down)
    if len(idx) == 0:
        raise ValueError("empty particle sector")
    block = h_dense[np.ix_(idx, idx)]
    return float(np.linalg.eigvalsh(block)[0])


def hartree_fock_state(L: int, t: float, n_up: int, n_down: int) -> np.ndarray:
    """Ground state of the hopping-only Hamiltonian in the (n_up, n_down) sector.

    Computed by masking the dense u=0 Hamiltonian to the sector basis and
    diagonalizing the block; returned embedded in the full 2^{2L} space with
    unit norm.
    """
    if not (0 <= n_up <= L and 0 <= n_down <= L):
        raise ValueError("filling out of range")
    from .hamiltonian import build_hubbard_1d

    idx = sector_indices(L, n_up, n_down)
    if len(idx) == 0:
        raise ValueError("empty particle sector")
    hop = build_hubbard_1d(L, t, 0.0)
    if len(hop.terms) == 0:
        dense = np.zeros((2 ** (2 * L), 2 ** (2 * L)), dtype=complex)
    else:
        dense = pauli_to_dense(hop)
    block = dense[np.ix_(idx, idx)]
    vals, vecs = np.linalg.eigh(block)
    state = np.zeros(dense.shape[0], dtype=complex)
    state[idx] = vecs[:, 0]
    return state / np.linalg.norm(state)

"""Projected pair construction: sequences, Toeplitz filling, targets."""

import numpy as np
import pytest

from qksd.evolution import diagonalize, exact_propagator, hartree_fock_state
from qksd.hamiltonian import build_hubbard_1d, pauli_to_dense, sorted_insertion_partition
from qksd.krylov import (
    KrylovConfig,
    build_pair,
    default_time_step,
    exact_sequences,
    measurement_targets,
    sequences_from_step,
    toeplitz_matrix,
)


@pytest.fixture(scope="module")
def system():
    spec = build_hubbard_1d(2, 0.2, 0.1)
    part = sorted_insertion_partition(spec)
    h = pauli_to_dense(spec)
    sp = diagonalize(h)
    ref = hartree_fock_state(2, 0.2, 1, 1)
    return spec, part, h, sp, ref


def test_config_validation():
    with pytest.raises(ValueError):
        KrylovConfig(n=4, dt=0.1)  # even order has no symmetric grid
    with pytest.raises(ValueError):
        KrylovConfig(n=5, dt=0.0)
    cfg = KrylovConfig(n=5, dt=0.3)
    np.testing.assert_array_equal(cfg.grid, [-2, -1, 0, 1, 2])


def test_default_time_step(system):
    _spec, part, *_ = system
    assert abs(default_time_step(part) - np.pi / part.beta_norm) < 1e-14


def test_toeplitz_matrix_structure():
    seq = np.array([1.0 + 0j, 2.0 + 1.0j, 3.0 - 2.0j])
    m = toeplitz_matrix(seq)
    np.testing.assert_allclose(m[0], seq)  # first row is the sequence
    assert np.abs(m - m.conj().T).max() == 0.0
    for k in range(3):
        for l in range(3):
            want = seq[l - k] if l >= k else np.conj(seq[k - l])
            assert m[k, l] == want


def test_exact_sequences_match_direct_overlaps(system):
    _spec, part, h, sp, ref = system
    cfg = KrylovConfig(n=7, dt=default_time_step(part))
    seqs = exact_sequences(sp, ref, cfg)
    for k in range(cfg.n):
        u = exact_propagator(sp, k * cfg.dt).matrix
        s_direct = ref.conj() @ u @ ref
        h_direct = ref.conj() @ h @ u @ ref
        assert abs(seqs.s[k] - s_direct) < 1e-12
        assert abs(seqs.h[k] - h_direct) < 1e-12
    assert seqs.s[0] == 1.0
    assert seqs.h[0].imag == 0.0


def test_sequences_from_step_agrees_with_exact(system):
    _spec, part, h, sp, ref = system
    cfg = KrylovConfig(n=5, dt=default_time_step(part))
    step = exact_propagator(sp, cfg.dt).matrix
    a = exact_sequences(sp, ref, cfg)
    b = sequences_from_step(h, ref, step, cfg)
    np.testing.assert_allclose(a.s, b.s, atol=1e-12)
    np.testing.assert_allclose(a.h, b.h, atol=1e-12)


def test_pair_builders_agree_for_exact_evolution(system):
    """With the exact propagator the elementwise H equals the Toeplitz H."""
    _spec, part, h, sp, ref = system
    cfg = KrylovConfig(n=7, dt=default_time_step(part))
    seqs = exact_sequences(sp, ref, cfg)
    tp = build_pair(cfg, "toeplitz", sequences=seqs)
    step = exact_propagator(sp, cfg.dt).matrix
    ntp = build_pair(cfg, "nontoeplitz", h_dense=h, ref_state=ref, step=step)
    assert np.abs(tp.H - ntp.H).max() < 1e-10
    assert np.abs(tp.S - ntp.S).max() < 1e-10
    assert np.abs(tp.S - tp.S.conj().T).max() == 0.0


def test_pair_overlap_matrix_is_psd(system):
    _spec, part, _h, sp, ref = system
    cfg = KrylovConfig(n=9, dt=default_time_step(part))
    pair = build_pair(cfg, "toeplitz", sequences=exact_sequences(sp, ref, cfg))
    vals = np.linalg.eigvalsh(pair.S)
    assert vals.min() > -1e-12
    assert vals.max() <= cfg.n + 1e-9  # Gram matrix of unit vectors


def test_build_pair_argument_validation(system):
    cfg = KrylovConfig(n=3, dt=0.2)
    with pytest.raises(ValueError):
        build_pair(cfg, "toeplitz")
    with pytest.raises(ValueError):
        build_pair(cfg, "nontoeplitz")
    with pytest.raises(ValueError):
        build_pair(cfg, "circulant")


@pytest.mark.parametrize("construction", ["toeplitz", "nontoeplitz"])
def test_measurement_targets_reconstruct_pair(system, construction):
    """Fragment overlaps weighted by betas plus the identity shift give the pair."""
    spec, part, h, sp, ref = system
    cfg = KrylovConfig(n=5, dt=default_time_step(part))
    tg = measurement_targets(sp, part, spec.identity_coefficient, ref, cfg, construction)
    if construction == "toeplitz":
        h_seq = tg.frag.T @ tg.betas + spec.identity_coefficient * tg.s_seq
        want = exact_sequences(sp, ref, cfg)
        np.testing.assert_allclose(h_seq, want.h, atol=1e-12)
        np.testing.assert_allclose(tg.s_seq, want.s, atol=1e-12)
    else:
        h_mat = np.tensordot(tg.betas, tg.frag, axes=1)
        h_mat = h_mat + spec.identity_coefficient * toeplitz_matrix(tg.s_seq)
        step = exact_propagator(sp, cfg.dt).matrix
        want = build_pair(cfg, "nontoeplitz", h_dense=h, ref_state=ref, step=step)
        np.testing.assert_allclose(h_mat, want.H, atol=1e-12)


def test_measurement_targets_lie_in_unit_square(system):
    # every fragment overlap must be a valid pair of Hadamard-test means
    spec, part, _h, sp, ref = system
    cfg = KrylovConfig(n=9, dt=default_time_step(part))
    for construction in ("toeplitz", "nontoeplitz"):
        tg = measurement_targets(
            sp, part, spec.identity_coefficient, ref, cfg, construction
        )
        assert np.abs(tg.frag.real).max() <= 1.0 + 1e-12
        assert np.abs(tg.frag.imag).max() <= 1.0 + 1e-12
        assert np.abs(tg.s_seq.real).max() <= 1.0 + 1e-12
        assert np.abs(tg.s_seq.imag).max() <= 1.0 + 1e-12

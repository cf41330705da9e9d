"""Simulated Hadamard-test estimation of Krylov matrix elements.

A Hadamard test of a unitary V against the reference state returns +/-1
outcomes whose mean is Re or Im of <phi_0|V|phi_0>.  From m shots the
estimator R = 2 Bin(m, p)/m - 1 has mean 2p - 1 and variance (1 - mean^2)/m.
This module allocates a total shot budget over matrix elements, real/imag
configurations, and unitary fragments according to the minimax-optimal rules
for Toeplitz and elementwise (non-Toeplitz) constructions, then draws the
noisy pair (H~, S~).

Two noise modes: "binomial" draws the actual binomial counts (ground truth);
"gaussian" replaces each estimate with a normal of matched mean and variance,
which is what the norm-bound theory models and is fully vectorizable.
Gaussian estimates are intentionally not clamped to [-1, 1].

Hardware decay multiplies every true overlap by e^{-lambda} before sampling
noise is applied, so the sampled matrices estimate the decayed pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import bounds, rngstream
from .errors import InfeasibleBudgetError
from .krylov import KrylovPair, MeasurementTargets, toeplitz_matrix

TARGETS = ("S_toeplitz", "H_toeplitz", "H_nontoeplitz")
_TARGET_CODE = {t: i for i, t in enumerate(TARGETS)}
_CFG_CODE = {"real": 0, "imag": 1}


class ShotEntry(NamedTuple):
    """Shots assigned to one (element, configuration, fragment) coordinate.

    Toeplitz targets key elements by sequence index (a, 0); the non-Toeplitz
    target keys by upper-triangle matrix position (a, b), a <= b.
    """

    a: int
    b: int
    config: str
    fragment: int
    shots: int


@dataclass(frozen=True)
class ShotPlan:
    target: str
    n: int
    budget: int
    entries: tuple[ShotEntry, ...]

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ValueError(f"unknown target {self.target!r}")
        total = sum(e.shots for e in self.entries)
        if total != self.budget:
            raise ValueError(f"entries sum to {total}, budget is {self.budget}")
        if any(e.shots < 0 for e in self.entries):
            raise ValueError("negative shot count")

    def element_totals(self) -> dict[tuple[int, int], int]:
        totals: dict[tuple[int, int], int] = {}
        for e in self.entries:
            totals[(e.a, e.b)] = totals.get((e.a, e.b), 0) + e.shots
        return totals


@dataclass(frozen=True)
class NoiseSpec:
    mode: str = "gaussian"
    hardware_lambda: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.mode not in ("binomial", "gaussian"):
            raise ValueError(f"unknown noise mode {self.mode!r}")
        if self.hardware_lambda < 0:
            raise ValueError("hardware_lambda must be >= 0")


@dataclass(frozen=True)
class EstimateResult:
    """Complex estimate plus markers for configurations that actually sampled.

    A part with zero shots is returned as 0 with its flag False (infinite
    variance: no information was collected).
    """

    value: complex
    re_sampled: bool
    im_sampled: bool


@dataclass(frozen=True)
class SampledPair:
    H: np.ndarray
    S: np.ndarray
    construction: str
    zero_shot: bool  # a structurally required configuration drew no shots


# ---------------------------------------------------------------------------
# Shot allocation
# ---------------------------------------------------------------------------


def _largest_remainder(ideals: np.ndarray, total: int) -> np.ndarray:
    """Round nonnegative ideals to integers preserving their sum exactly.

    Remainder shots go to the largest fractional parts; ties break by
    position, i.e. canonical element order.
    """
    ideals = np.asarray(ideals, dtype=float)
    floors = np.floor(ideals).astype(np.int64)
    rem = int(total - floors.sum())
    if rem < 0:
        raise ValueError("ideals exceed the total")
    if rem:
        fracs = ideals - floors
        order = sorted(range(len(ideals)), key=lambda i: (-fracs[i], i))
        for i in range(rem):
            floors[order[i % len(order)]] += 1
    return floors


def _split_fragments(
    configs: Sequence[tuple[int, int, str]], counts: np.ndarray, betas: np.ndarray
) -> list[ShotEntry]:
    betas = np.asarray(betas, dtype=float)
    if betas.ndim != 1 or len(betas) == 0 or np.any(betas <= 0):
        raise ValueError("fragment weights must be a nonempty positive vector")
    weights = betas / betas.sum()
    entries = []
    for (a, b, cfg), count in zip(configs, counts):
        frag_counts = _largest_remainder(count * weights, int(count))
        entries.extend(
            ShotEntry(a, b, cfg, j, int(c)) for j, c in enumerate(frag_counts)
        )
    return entries


def allocate_toeplitz(
    m_budget: int, n: int, is_h: bool, betas: Optional[np.ndarray] = None
) -> ShotPlan:
    """Minimax-optimal Toeplitz plan.

    Diagonal (H only): M / (sqrt(2)(n-1) + 1) shots, real configuration only.
    Each off-diagonal real and imag configuration: M / (2(n-1) + sqrt(2) delta)
    with delta = 1 for H, 0 for S.  Totals are preserved exactly by
    largest-remainder rounding; H configurations are further split over
    fragments proportionally to their weights.
    """
    m_budget = int(m_budget)
    if n < 1:
        raise ValueError("n must be >= 1")
    configs: list[tuple[int, int, str]] = []
    if is_h:
        configs.append((0, 0, "real"))
    for k in range(1, n):
        configs.append((k, 0, "real"))
        configs.append((k, 0, "imag"))
    if not configs:
        raise InfeasibleBudgetError("S with n = 1 has no sampled configurations")
    if m_budget < 2 * n:
        raise InfeasibleBudgetError(
            f"budget {m_budget} below one shot per configuration (need >= {2 * n})"
        )
    sq2 = math.sqrt(2.0)
    delta = 1.0 if is_h else 0.0
    ideals = np.array(
        [
            m_budget / (sq2 * (n - 1) + 1.0)
            if a == 0
            else m_budget / (2.0 * (n - 1) + sq2 * delta)
            for a, _b, _cfg in configs
        ]
    )
    counts = _largest_remainder(ideals, m_budget)
    if is_h:
        if betas is None:
            betas = np.array([1.0])
        entries = _split_fragments(configs, counts, betas)
    else:
        entries = [
            ShotEntry(a, b, cfg, 0, int(c)) for (a, b, cfg), c in zip(configs, counts)
        ]
    return ShotPlan(
        target="H_toeplitz" if is_h else "S_toeplitz",
        n=n,
        budget=m_budget,
        entries=tuple(entries),
    )


def allocate_nontoeplitz(
    m_budget: int, n: int, betas: Optional[np.ndarray] = None
) -> ShotPlan:
    """Uniform elementwise plan: every configuration gets M / n^2 shots.

    Configurations: one real per diagonal element, real and imag per strict
    upper-triangle element; n^2 in total.
    """
    m_budget = int(m_budget)
    if n < 1:
        raise ValueError("n must be >= 1")
    if m_budget < n * n:
        raise InfeasibleBudgetError(
            f"budget {m_budget} below one shot per configuration (need >= {n * n})"
        )
    configs: list[tuple[int, int, str]] = []
    for k in range(n):
        for ell in range(k, n):
            configs.append((k, ell, "real"))
            if ell > k:
                configs.append((k, ell, "imag"))
    ideals = np.full(len(configs), m_budget / n**2)
    counts = _largest_remainder(ideals, m_budget)
    if betas is None:
        betas = np.array([1.0])
    entries = _split_fragments(configs, counts, betas)
    return ShotPlan(
        target="H_nontoeplitz", n=n, budget=m_budget, entries=tuple(entries)
    )


def split_budget(
    m_total: int, n: int, construction: str, beta_norm: float
) -> tuple[int, int]:
    """Split a total budget M into (M_H, M_S) proportionally to the norm bounds."""
    m_total = int(m_total)
    if m_total < 2:
        raise ValueError("total budget must be >= 2")
    e_h, e_s = bounds.norm_bound_pair(n, beta_norm, construction)
    ideals = np.array([m_total * e_h / (e_h + e_s), m_total * e_s / (e_h + e_s)])
    m_h, m_s = _largest_remainder(ideals, m_total)
    return int(m_h), int(m_s)


# ---------------------------------------------------------------------------
# Element estimators
# ---------------------------------------------------------------------------


def _binomial_part(key: int, mean: float, m: int) -> float:
    if abs(mean) > 1.0 + 1e-9:
        raise ValueError(f"binomial mode needs |part| <= 1, got {mean}")
    p = 0.5 * (1.0 + min(1.0, max(-1.0, mean)))
    draw = rngstream.generator(key).binomial(m, p)
    return 2.0 * draw / m - 1.0


def _gaussian_part(key: int, mean: float, m: int) -> float:
    sigma = math.sqrt(max(1.0 - mean * mean, 0.0) / m)
    return mean + sigma * float(rngstream.normals(np.uint64(key)))


def hadamard_estimate(
    true_value: complex,
    m_r: int,
    m_i: int,
    noise: NoiseSpec,
    stream: Sequence[int],
) -> EstimateResult:
    """Estimate one overlap from m_r real-configuration and m_i imag shots.

    `stream` is the coordinate prefix (seed, trial, target code, a, b,
    fragment); the configuration code is appended internally so real and imag
    draws are independent.  Zero-shot parts return 0 and are flagged.
    """
    parts = [0.0, 0.0]
    sampled = [False, False]
    for cfg, (mean, m) in enumerate(
        ((true_value.real, int(m_r)), (true_value.imag, int(m_i)))
    ):
        if m <= 0:
            continue
        key = rngstream.stream_key(*stream, cfg)
        if noise.mode == "binomial":
            parts[cfg] = _binomial_part(key, mean, m)
        else:
            parts[cfg] = _gaussian_part(key, mean, m)
        sampled[cfg] = True
    return EstimateResult(
        value=complex(parts[0], parts[1]), re_sampled=sampled[0], im_sampled=sampled[1]
    )


# ---------------------------------------------------------------------------
# Pair sampling
# ---------------------------------------------------------------------------


def _toeplitz_counts(plan: ShotPlan, n_frag: int) -> np.ndarray:
    """Counts as an (n, 2, n_frag) array indexed [element, config, fragment]."""
    counts = np.zeros((plan.n, 2, n_frag), dtype=np.int64)
    for e in plan.entries:
        counts[e.a, _CFG_CODE[e.config], e.fragment] += e.shots
    return counts


def _nontoeplitz_counts(plan: ShotPlan, n_frag: int) -> np.ndarray:
    """Counts as an (n, n, 2, n_frag) array over the upper triangle."""
    counts = np.zeros((plan.n, plan.n, 2, n_frag), dtype=np.int64)
    for e in plan.entries:
        counts[e.a, e.b, _CFG_CODE[e.config], e.fragment] += e.shots
    return counts


def _gaussian_block(
    seed: int,
    trials: np.ndarray,
    target_code: int,
    a: np.ndarray,
    b: np.ndarray,
    frag: np.ndarray,
    cfg: np.ndarray,
    means: np.ndarray,
    counts: np.ndarray,
) -> np.ndarray:
    """Vectorized gaussian estimates over (trial, configuration) grids.

    Returns means + sigma * z where sampled, 0 where the count is zero.
    Shapes: trials is (T, 1, ..., 1); a/b/frag/cfg/means/counts broadcast over
    the per-trial configuration grid.
    """
    keys = rngstream.stream_keys(seed, trials, target_code, a, b, frag, cfg)
    z = rngstream.normals(keys)
    safe = np.where(counts > 0, counts, 1)
    sigma = np.sqrt(np.clip(1.0 - means**2, 0.0, None) / safe)
    return np.where(counts > 0, means + sigma * z, 0.0)


def _binomial_block(
    seed: int,
    trial: int,
    target_code: int,
    a: np.ndarray,
    b: np.ndarray,
    frag: np.ndarray,
    cfg: np.ndarray,
    means: np.ndarray,
    counts: np.ndarray,
) -> np.ndarray:
    """Same contract as _gaussian_block for a single trial, binomial draws."""
    ba, bb, bf, bc, bmean, bm = np.broadcast_arrays(a, b, frag, cfg, means, counts)
    flat_mean = bmean.ravel()
    flat_m = bm.ravel()
    out = np.zeros_like(flat_mean)
    fa, fb = ba.ravel(), bb.ravel()
    ff, fc = bf.ravel(), bc.ravel()
    for i in range(len(out)):
        m = int(flat_m[i])
        if m <= 0:
            continue
        key = rngstream.stream_key(
            seed, trial, target_code, int(fa[i]), int(fb[i]), int(ff[i]), int(fc[i])
        )
        out[i] = _binomial_part(key, float(flat_mean[i]), m)
    return out.reshape(bmean.shape)


def _estimate_blocks(
    seed: int,
    trials_1d: np.ndarray,
    target_code: int,
    a: np.ndarray,
    b: np.ndarray,
    frag: np.ndarray,
    cfg: np.ndarray,
    means: np.ndarray,
    counts: np.ndarray,
    mode: str,
) -> np.ndarray:
    """Estimates of shape (T, *grid) for both noise modes."""
    extra = (1,) * means.ndim
    if mode == "gaussian":
        trials = trials_1d.reshape((-1,) + extra)
        return _gaussian_block(
            seed, trials, target_code, a, b, frag, cfg, means, counts
        )
    out = np.empty((len(trials_1d),) + means.shape)
    for i, trial in enumerate(trials_1d):
        out[i] = _binomial_block(
            seed, int(trial), target_code, a, b, frag, cfg, means, counts
        )
    return out


def _hermitian_toeplitz_stack(seq: np.ndarray) -> np.ndarray:
    """(T, n, n) Hermitian Toeplitz matrices from (T, n) leading sequences."""
    n = seq.shape[-1]
    idx = np.subtract.outer(np.arange(n), np.arange(n))  # k - l
    base = seq[:, np.abs(idx)]
    return np.where(idx <= 0, base, base.conj())


def expected_pair(
    targets: MeasurementTargets, hardware_lambda: float = 0.0
) -> tuple[np.ndarray, np.ndarray]:
    """The exact (decayed) pair the sampler is estimating, as dense matrices.

    Built from the same fragment overlaps the sampler draws around, so
    sampled-minus-expected is precisely the injected noise matrix.
    """
    decay = math.exp(-hardware_lambda)
    s_true = decay * targets.s_seq
    s_mat = toeplitz_matrix(s_true)
    betas = targets.betas
    if targets.construction == "toeplitz":
        h_seq = betas @ (decay * targets.frag) + targets.id_coeff * s_true
        h_mat = toeplitz_matrix(h_seq)
    else:
        h_mat = np.tensordot(betas, decay * targets.frag, axes=1)
        h_mat = h_mat + targets.id_coeff * s_mat
    return h_mat, s_mat


def sample_overlap_ensemble(
    targets: MeasurementTargets,
    plan_s: ShotPlan,
    noise: NoiseSpec,
    trials: int,
    first_trial: int = 0,
) -> tuple[np.ndarray, bool]:
    """Sample `trials` overlap matrices S~ as a (T, n, n) stack.

    Per-trial results depend only on (rng_seed, trial index, coordinate), so
    any chunking of the trial range reproduces identical matrices.
    """
    n = targets.n
    if plan_s.target != "S_toeplitz" or plan_s.n != n:
        raise ValueError("S plan does not match the targets")
    seed = noise.rng_seed
    decay = math.exp(-noise.hardware_lambda)
    trials_1d = np.arange(first_trial, first_trial + trials, dtype=np.int64)

    s_true = decay * targets.s_seq
    s_counts = _toeplitz_counts(plan_s, 1)[:, :, 0]  # (n, 2)
    zero_shot = bool(np.any(s_counts[1:, :] == 0))
    ks = np.arange(n).reshape(n, 1)
    cfgs = np.arange(2).reshape(1, 2)
    s_means = np.stack([s_true.real, s_true.imag], axis=1)  # (n, 2)
    est = _estimate_blocks(
        seed,
        trials_1d,
        _TARGET_CODE["S_toeplitz"],
        ks,
        np.zeros_like(ks),
        np.zeros_like(ks),
        cfgs,
        s_means,
        s_counts,
        noise.mode,
    )
    s_seq_est = est[:, :, 0] + 1j * est[:, :, 1]
    s_seq_est[:, 0] = s_true[0]  # normalization is known, not sampled
    return _hermitian_toeplitz_stack(s_seq_est), zero_shot


def sample_hamiltonian_ensemble(
    targets: MeasurementTargets,
    plan_h: ShotPlan,
    noise: NoiseSpec,
    trials: int,
    first_trial: int = 0,
) -> tuple[np.ndarray, bool]:
    """Sample `trials` projected-Hamiltonian matrices H~ as a (T, n, n) stack."""
    n = targets.n
    expected_h = "H_toeplitz" if targets.construction == "toeplitz" else "H_nontoeplitz"
    if plan_h.target != expected_h or plan_h.n != n:
        raise ValueError("H plan does not match the construction")
    n_frag = len(targets.betas)
    seed = noise.rng_seed
    decay = math.exp(-noise.hardware_lambda)
    trials_1d = np.arange(first_trial, first_trial + trials, dtype=np.int64)
    zero_shot = False

    s_true = decay * targets.s_seq
    betas = targets.betas
    if targets.construction == "toeplitz":
        f_true = decay * targets.frag  # (J, n)
        counts = _toeplitz_counts(plan_h, n_frag)  # (n, 2, J)
        required = np.ones((n, 2, n_frag), dtype=bool)
        required[0, 1, :] = False  # diagonal imag is structurally zero
        if np.any(counts[required] == 0):
            zero_shot = True
        means = np.stack([f_true.real.T, f_true.imag.T], axis=1)  # (n, 2, J)
        a = np.arange(n).reshape(n, 1, 1)
        cfg = np.arange(2).reshape(1, 2, 1)
        frag = np.arange(n_frag).reshape(1, 1, n_frag)
        est = _estimate_blocks(
            seed,
            trials_1d,
            _TARGET_CODE["H_toeplitz"],
            a,
            np.zeros_like(a),
            frag,
            cfg,
            means,
            counts,
            noise.mode,
        )
        vals = est[:, :, 0, :] + 1j * est[:, :, 1, :]  # (T, n, J)
        h_seq = vals @ betas + targets.id_coeff * s_true  # (T, n)
        return _hermitian_toeplitz_stack(h_seq), zero_shot
    else:
        f_true = decay * targets.frag  # (J, n, n)
        counts_full = _nontoeplitz_counts(plan_h, n_frag)  # (n, n, 2, J)
        iu = np.triu_indices(n)
        counts = counts_full[iu[0], iu[1]]  # (P, 2, J)
        diag_mask = iu[0] == iu[1]
        required = np.ones(counts.shape, dtype=bool)
        required[diag_mask, 1, :] = False
        if np.any(counts[required] == 0):
            zero_shot = True
        tri_true = f_true[:, iu[0], iu[1]]  # (J, P)
        means = np.stack([tri_true.real.T, tri_true.imag.T], axis=1)  # (P, 2, J)
        a = iu[0].reshape(-1, 1, 1)
        b = iu[1].reshape(-1, 1, 1)
        cfg = np.arange(2).reshape(1, 2, 1)
        frag = np.arange(n_frag).reshape(1, 1, n_frag)
        est = _estimate_blocks(
            seed,
            trials_1d,
            _TARGET_CODE["H_nontoeplitz"],
            a,
            b,
            frag,
            cfg,
            means,
            counts,
            noise.mode,
        )
        vals = est[:, :, 0, :] + 1j * est[:, :, 1, :]  # (T, P)
        vals = vals @ betas
        s_true_mat = toeplitz_matrix(s_true)
        vals = vals + targets.id_coeff * s_true_mat[iu[0], iu[1]]
        h_stack = np.zeros((trials, n, n), dtype=complex)
        h_stack[:, iu[0], iu[1]] = vals
        h_stack[:, iu[1], iu[0]] = vals.conj()
        return h_stack, zero_shot


def sample_ensemble(
    targets: MeasurementTargets,
    plan_h: ShotPlan,
    plan_s: ShotPlan,
    noise: NoiseSpec,
    trials: int,
    first_trial: int = 0,
) -> tuple[np.ndarray, np.ndarray, bool]:
    """Sample `trials` independent pairs (H~, S~) as (T, n, n) stacks."""
    h_stack, zs_h = sample_hamiltonian_ensemble(
        targets, plan_h, noise, trials, first_trial
    )
    s_stack, zs_s = sample_overlap_ensemble(targets, plan_s, noise, trials, first_trial)
    return h_stack, s_stack, zs_h or zs_s


def sample_pair(
    targets: MeasurementTargets,
    plan_h: ShotPlan,
    plan_s: ShotPlan,
    noise: NoiseSpec,
    trial: int = 0,
) -> SampledPair:
    """Sample a single noisy pair; identical to the matching ensemble slice."""
    h_stack, s_stack, zero_shot = sample_ensemble(
        targets, plan_h, plan_s, noise, trials=1, first_trial=trial
    )
    return SampledPair(
        H=h_stack[0], S=s_stack[0], construction=targets.construction, zero_shot=zero_shot
    )


# ---------------------------------------------------------------------------
# Hardware decay
# ---------------------------------------------------------------------------


def decay_exponent(r: float, n_qubits: int, depth: int) -> float:
    """lambda = N_q * D * ln(1/r) for per-qubit-per-layer fidelity r."""
    if not 0.0 < r <= 1.0:
        raise ValueError("fidelity r must lie in (0, 1]")
    return n_qubits * depth * math.log(1.0 / r)


def apply_hardware_decay(pair: KrylovPair, lam: float) -> KrylovPair:
    """Scale both matrices of an exact pair by e^{-lambda}.

    For sampled pairs the decay is applied inside sample_ensemble (the true
    overlaps decay before sampling noise is added); this matrix-level form
    covers the noiseless limit, where the GEVP is invariant.
    """
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    factor = math.exp(-lam)
    return KrylovPair(
        H=factor * pair.H,
        S=factor * pair.S,
        construction=pair.construction,
        config=pair.config,
    )

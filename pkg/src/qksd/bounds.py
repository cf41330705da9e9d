"""Closed-form bounds and diagnostics for sampled Krylov matrix pairs.

All formulas are exact evaluations of the non-asymptotic expressions used by
the experiment drivers: expected spectral-norm bounds for the sampling error
matrices, the matrix variance statistic behind them, the optimal truncation
threshold, concentration tails, and the post-threshold eigenvalue perturbation
bound.  Natural logarithms throughout.  Quantities that are asymptotic scaling
diagnostics (Trotter depth crossover, the conjugated-perturbation upper bound)
are labeled as such and never gate pass/fail decisions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

CONSTRUCTIONS = ("toeplitz", "nontoeplitz")


def _check_construction(construction: str) -> None:
    if construction not in CONSTRUCTIONS:
        raise ValueError(f"unknown construction {construction!r}")


def error_norm_bound(n: int, v_z: float, construction: str) -> float:
    """Expected-spectral-norm bound e_Z for the optimally sampled error matrix.

    Toeplitz: 2 n V_Z sqrt(2 log 2n).  Non-Toeplitz: 2 n V_Z sqrt(n log 2n).
    The bound on E[norm] is e_Z / sqrt(M_Z) at total budget M_Z.
    """
    _check_construction(construction)
    if n < 1 or v_z <= 0:
        raise ValueError("need n >= 1 and V_Z > 0")
    log2n = math.log(2 * n)
    if construction == "toeplitz":
        return 2.0 * n * v_z * math.sqrt(2.0 * log2n)
    return 2.0 * n * v_z * math.sqrt(n * log2n)


def error_norm_bound_tight(n: int, v_z: float, is_hamiltonian: bool) -> float:
    """Sharper Toeplitz-form bound 2 V_Z (sqrt(2) n + delta - sqrt(2)) sqrt(log 2n).

    delta = 1 when the matrix has a sampled diagonal (H), 0 otherwise (S).
    Exposed as a diagnostic; the simplified form above is what drivers check.
    """
    if n < 1 or v_z <= 0:
        raise ValueError("need n >= 1 and V_Z > 0")
    delta = 1.0 if is_hamiltonian else 0.0
    return 2.0 * v_z * (math.sqrt(2.0) * n + delta - math.sqrt(2.0)) * math.sqrt(math.log(2 * n))


def norm_bound_pair(n: int, beta_norm: float, construction: str) -> tuple[float, float]:
    """(e_H, e_S) with V_H = beta_norm and V_S = 1; S is always Toeplitz."""
    e_h = error_norm_bound(n, beta_norm, construction)
    e_s = error_norm_bound(n, 1.0, "toeplitz")
    return e_h, e_s


def optimal_epsilon(n: int, m_s: float) -> float:
    """Truncation threshold eps = e_S(n) / sqrt(M_S)."""
    if not m_s > 0:
        raise ValueError("M_S must be positive")
    return error_norm_bound(n, 1.0, "toeplitz") / math.sqrt(m_s)


# ---------------------------------------------------------------------------
# Matrix variance statistic
# ---------------------------------------------------------------------------


def toeplitz_variance_from_counts(
    counts: np.ndarray, v_z: float, is_hamiltonian: bool
) -> float:
    """v = max_l v_l for a Toeplitz plan with per-element shot totals `counts`.

    counts[k] is the total budget (all configurations and fragments) of
    sequence element k; counts[0] is the diagonal, which S never samples.
    Element variances: sigma_0^2 = 2 V^2 / m_0 (H only), sigma_k^2 = 4 V^2 / m_k.
    The diagonal-accumulation sum counts sigma_k^2 once per index l with
    k <= n - l and once more with k <= l - 1.
    """
    counts = np.asarray(counts, dtype=float)
    n = len(counts)
    sig2 = np.zeros(n)
    if is_hamiltonian:
        sig2[0] = np.inf if counts[0] <= 0 else 2.0 * v_z**2 / counts[0]
    for k in range(1, n):
        sig2[k] = np.inf if counts[k] <= 0 else 4.0 * v_z**2 / counts[k]
    best = 0.0
    for ell in range(1, n + 1):
        v_l = sig2[0]
        for k in range(1, n):
            v_l += sig2[k] * ((k <= n - ell) + (k <= ell - 1))
        best = max(best, v_l)
    return float(best)


def nontoeplitz_variance_from_counts(counts: np.ndarray, v_z: float) -> float:
    """v = max_k of the row-sum form for elementwise sampling.

    counts is an (n, n) array of per-element totals over the upper triangle
    (k <= l); the lower triangle is ignored.  sigma_kk^2 = 2 V^2 / m_kk,
    sigma_kl^2 = 4 V^2 / m_kl for k < l.
    """
    counts = np.asarray(counts, dtype=float)
    n = counts.shape[0]
    sig2 = np.zeros((n, n))
    for k in range(n):
        for ell in range(k, n):
            m = counts[k, ell]
            factor = 2.0 if k == ell else 4.0
            val = np.inf if m <= 0 else factor * v_z**2 / m
            sig2[k, ell] = sig2[ell, k] = val
    return float(np.max(np.sum(sig2, axis=1)))


def variance_statistic(plan, v_z: float) -> float:
    """Matrix variance statistic of a ShotPlan (expected-norm control variable).

    The expected spectral norm of the error matrix obeys
    E[norm] <= sqrt(2 v log 2n).
    """
    totals: dict = {}
    for entry in plan.entries:
        key = (entry.a, entry.b)
        totals[key] = totals.get(key, 0) + entry.shots
    n = plan.n
    if plan.target in ("S_toeplitz", "H_toeplitz"):
        counts = np.zeros(n)
        for (a, _b), m in totals.items():
            counts[a] += m
        return toeplitz_variance_from_counts(
            counts, v_z, is_hamiltonian=plan.target == "H_toeplitz"
        )
    counts = np.zeros((n, n))
    for (a, b), m in totals.items():
        counts[a, b] += m
    return nontoeplitz_variance_from_counts(counts, v_z)


def optimal_variance(m_budget: float, n: int, v_z: float, construction: str,
                     is_hamiltonian: bool = True) -> float:
    """Closed-form minimax value of the variance statistic at budget M."""
    _check_construction(construction)
    if construction == "toeplitz":
        delta = 1.0 if is_hamiltonian else 0.0
        return 2.0 * v_z**2 * (math.sqrt(2.0) * (n - 1) + delta) ** 2 / m_budget
    return 2.0 * v_z**2 * n**3 / m_budget


def expected_norm_from_variance(v: float, n: int) -> float:
    """Matrix-series tail bound E[norm] <= sqrt(2 v log 2n)."""
    return math.sqrt(2.0 * v * math.log(2 * n))


def concentration_tail(n: int, kappa: float) -> float:
    """Tail probability (1/2n)^{(1+1/kappa)^{-2}} of exceeding (1+kappa) E[norm]."""
    if kappa <= 0 or n < 1:
        raise ValueError("need kappa > 0 and n >= 1")
    return float((1.0 / (2 * n)) ** ((1.0 + 1.0 / kappa) ** -2))


# ---------------------------------------------------------------------------
# Post-threshold perturbation bounds
# ---------------------------------------------------------------------------


def sampling_perturbation_bound(
    n_eps: int, e_h: float, e_s: float, m_total: float, crawford: float, e0: float
) -> Optional[float]:
    """Post-threshold eigenvalue perturbation bound at total budget M.

    (1 + E0^2) * asin(sqrt(2) n_eps (e_H + e_S) / (crawford * sqrt(M))), or
    None (not applicable) when the arcsine argument exceeds 1.
    """
    if min(n_eps, e_h, e_s, m_total, crawford) <= 0:
        raise ValueError("all arguments must be positive")
    arg = math.sqrt(2.0) * n_eps * (e_h + e_s) / (crawford * math.sqrt(m_total))
    if arg > 1.0:
        return None
    return (1.0 + e0**2) * math.asin(arg)


def crawford_inverse_upper(eps: float, e0: float) -> float:
    """Upper bound 1/(eps sqrt(E0^2 + 1)) on the inverse Crawford number."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    return 1.0 / (eps * math.sqrt(e0**2 + 1.0))


def weyl_relative_bound(
    h_norm: float,
    s_norm: float,
    s_inv_norm: float,
    dh_norm: float,
    ds_norm: float,
    s_inv_ds_norm: float,
) -> Optional[float]:
    """Weyl-inequality eigenvalue bound from norms and condition numbers.

    |E_tilde - E| <= (|H| |S^-1| / (1 - |S^-1 dS|)) * (cond(S) |dS|/|S| + |dH|/|H|),
    valid only while |S^-1 dS| < 1; returns None otherwise.
    """
    if s_inv_ds_norm >= 1.0:
        return None
    cond_s = s_norm * s_inv_norm
    lead = h_norm * s_inv_norm / (1.0 - s_inv_ds_norm)
    return lead * (cond_s * ds_norm / s_norm + dh_norm / h_norm)


def trotter_depth_threshold(
    n_fragments: int, dt: float, h_norm: float, beta_norm: float, n: int, m_h: float
) -> float:
    """Scaling diagnostic: circuit depth at which Trotter bias overtakes shot noise.

    N_Gamma * dt^2 * (|H| / |H|_beta) * sqrt(n^3 M_H / log n), unit constant.
    Asymptotic form; never used in pass/fail checks.
    """
    if n < 2:
        raise ValueError("n must be >= 2 for the log factor")
    return (
        n_fragments * dt**2 * (h_norm / beta_norm) * math.sqrt(n**3 * m_h / math.log(n))
    )


def chi_upper_bound(
    n: int,
    mu: float,
    rho: float,
    s_norm: float,
    eps: float,
    ds_norm: float,
    dh_norm: float,
    alpha: float = 0.5,
) -> float:
    """Scaling diagnostic: upper bound for the conjugated perturbation magnitude.

    3 (2 + mu) n^3 (1 + 1/rho) (|S|/eps)^alpha |dS| + |dH|.  mu defaults to the
    largest |generalized eigenvalue| of the exact pair; rho is a free spectral
    margin parameter supplied by configuration.
    """
    if rho <= 0 or eps <= 0:
        raise ValueError("need rho > 0 and eps > 0")
    return 3.0 * (2.0 + mu) * n**3 * (1.0 + 1.0 / rho) * (s_norm / eps) ** alpha * ds_norm + dh_norm


@dataclass(frozen=True)
class BoundReport:
    """Bundle of every bound evaluated for one experiment cell or trial.

    sampling_bound is None when its arcsine argument exceeds 1 (reported as
    not-applicable); weyl_bound is None when the Weyl precondition fails.
    assumptions maps predicate names to one of {"holds", "violated", "unknown"}.
    """

    e_h: float
    e_s: float
    epsilon_opt: float
    v_stat: float
    tail_prob: float
    sampling_bound: Optional[float]
    crawford_inverse_upper: float
    weyl_bound: Optional[float]
    trotter_depth: Optional[float]
    assumptions: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("e_h", "e_s", "epsilon_opt", "v_stat", "crawford_inverse_upper"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if not 0.0 <= self.tail_prob <= 1.0:
            raise ValueError("tail_prob must lie in [0, 1]")
        for flag in self.assumptions.values():
            if flag not in ("holds", "violated", "unknown"):
                raise ValueError(f"invalid assumption flag {flag!r}")

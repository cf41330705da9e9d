"""Row records and deterministic CSV output.

Every driver writes one RFC-4180 CSV (CRLF line endings, `.` decimal point).
The first line is a comment row carrying the config hash, seed, and artifact
version so a result file is traceable to the exact run that produced it.
Floats are written with repr (shortest round-trip form); missing or
not-applicable values are written as the literal string `na`.
"""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass, fields
from typing import Iterable, Mapping, Optional, Sequence

from .config import ExperimentConfig

ARTIFACT_VERSION = "0.1.0"

ERROR_NORM_COLUMNS = (
    "row_kind", "construction", "kind", "n", "m_budget", "trial",
    "norm", "bound", "under_bound", "mean_norm", "frac_under", "slope", "note",
)
SPECTRUM_COLUMNS = (
    "m_budget", "index", "exact_value", "mean_value", "std_value",
    "epsilon", "weyl_fraction",
)
SWEEP_COLUMNS = (
    "row_kind", "construction", "n", "m_budget", "k", "trials_used",
    "rms_rel_error", "mean_rel_error", "ideal_rel_error", "mean_n_eps", "epsilon",
)
SCAN_COLUMNS = (
    "construction", "n", "m_budget", "m_h", "m_s", "epsilon", "trials_used",
    "rms_rel_error", "mean_rel_error", "mean_n_eps", "e0_sector",
)
PERTURBATION_COLUMNS = (
    "row_kind", "construction", "n", "m_budget", "m_h", "m_s", "trial", "seed",
    "n_eps", "dh_norm", "ds_norm", "eta", "chi",
    "e0_sector", "e0_full", "e0_reduced", "e0_sampled",
    "d0", "d0_inv_upper", "cond_s", "bound", "observed",
    "chi_small", "angle_gap", "norms_under", "chi_le_eta", "dims_matched", "qualifies", "satisfied",
    "qualifying_trials", "satisfaction_rate",
)


@dataclass(frozen=True)
class TrialRecord:
    """One sampled trial of the thresholded-solution experiment."""

    trial: int
    seed: int
    n: int
    n_eps: Optional[int]
    m_h: int
    m_s: int
    dh_norm: float
    ds_norm: float
    eta: float
    chi: Optional[float]
    e0_sector: float
    e0_full: float
    e0_reduced: float
    e0_sampled: Optional[float]
    d0: float
    d0_inv_upper: float
    cond_s: Optional[float]
    bound: Optional[float]
    observed: Optional[float]
    flags: Mapping[str, str]  # chi_small/angle_gap/norms_under/chi_le_eta/dims -> holds|violated|unknown

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, float) and not math.isfinite(v):
                raise ValueError(f"{f.name} is not finite; use None for n/a")
        for name, flag in self.flags.items():
            if flag not in ("holds", "violated", "unknown"):
                raise ValueError(f"flag {name}={flag!r} invalid")


def format_value(v) -> str:
    if v is None:
        return "na"
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


_HASH_EXEMPT = {"out", "workers"}  # execution details, not experiment identity


def config_hash(cfg: ExperimentConfig) -> str:
    dump = ";".join(
        f"{f.name}={getattr(cfg, f.name)!r}"
        for f in fields(cfg)
        if f.name not in _HASH_EXEMPT
    )
    return hashlib.sha256(dump.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class DriverResult:
    path: str
    columns: tuple[str, ...]
    rows: tuple[dict, ...]


def write_csv(
    path: str,
    columns: Sequence[str],
    rows: Iterable[Mapping],
    cfg: ExperimentConfig,
) -> DriverResult:
    """Write rows (dicts keyed by column name) with the traceability header."""
    rows = tuple(dict(r) for r in rows)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(
            f"# config={config_hash(cfg)} seed={cfg.seed} "
            f"version={ARTIFACT_VERSION}\r\n"
        )
        writer = csv.writer(f)
        writer.writerow(columns)
        for row in rows:
            extra = set(row) - set(columns)
            if extra:
                raise ValueError(f"row has unknown fields {sorted(extra)}")
            writer.writerow([format_value(row.get(c)) for c in columns])
    return DriverResult(path=path, columns=tuple(columns), rows=rows)

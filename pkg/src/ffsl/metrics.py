"""Error norms and conservation diagnostics."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np


class UndefinedRelativeError(ZeroDivisionError):
    """The reference field has zero norm."""


def _norm(w, norm, weight):
    if norm == "l2":
        return math.sqrt(weight * float(np.sum(w * w)))
    if norm == "linf":
        return float(np.max(np.abs(w)))
    raise ValueError(f"unknown norm {norm!r}; use 'l2' or 'linf'")


def relative_error(v, u, norm: str = "l2", weight: float = 1.0) -> float:
    """``||v - u|| / ||u||``; the l2 norm carries the cell measure ``weight``."""
    v = np.asarray(v, dtype=float)
    u = np.asarray(u, dtype=float)
    if v.shape != u.shape:
        raise ValueError(f"shape mismatch {v.shape} vs {u.shape}")
    ref = _norm(u, norm, weight)
    if ref == 0:
        raise UndefinedRelativeError("relative error undefined for a zero reference")
    return _norm(v - u, norm, weight) / ref


def total_mass(values, cell_measure: float) -> float:
    """Sum of cell averages times the cell length (1D) or area (2D)."""
    return math.fsum(np.ravel(np.asarray(values, dtype=float)).tolist()) * cell_measure


def mass_drift(initial: float, final: float) -> float:
    if initial == 0:
        return abs(final)
    return abs(final - initial) / abs(initial)


@dataclass
class ErrorReport:
    experiment: str
    scheme: str
    order: int
    N: int
    M: int
    mu: float
    C: float
    l2_rel: float
    linf_rel: float
    mass_initial: float
    mass_final: float
    mass_drift_rel: float
    runtime_s: float

    CSV_COLUMNS = ("experiment", "scheme", "order", "N", "M", "mu", "C",
                   "l2_rel", "linf_rel", "mass_drift_rel", "runtime_s")

    def as_row(self, timing: bool = True) -> dict:
        d = asdict(self)
        row = {k: d[k] for k in self.CSV_COLUMNS}
        if not timing:
            row["runtime_s"] = ""
        return row

"""Spectrum extraction with degeneracy clustering, and degeneracy patterns."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import InteriorMask, OperatorMatrix, masked_max_abs
from .errors import NonRealSpectrumError

__all__ = ["SpectrumReport", "spectrum", "degeneracy_pattern"]

IMAG_LIMIT = 1e-8
DIAGONAL_LIMIT = 1e-10


@dataclass(frozen=True)
class SpectrumReport:
    """Clustered eigenvalues (energy, degeneracy), sorted ascending."""

    levels: tuple[tuple[float, int], ...]
    cluster_tol: float
    interior_count: int

    def to_json(self) -> dict:
        return {
            "levels": [[e, d] for e, d in self.levels],
            "pattern": degeneracy_pattern(self, len(self.levels)),
        }


def spectrum(
    h: OperatorMatrix, mask: InteriorMask | None = None, cluster_tol: float = 1e-6
) -> SpectrumReport:
    """Eigenvalues of the mask-restricted block, clustered into multiplets.

    Hamiltonians built in this package are diagonal in the graded number
    basis, so the diagonal is read off when the off-diagonal part is below
    1e-10; otherwise a dense eigensolver runs.  Imaginary parts must stay
    below 1e-8 and are then discarded.
    """
    if mask is None:
        sub = h.entries
    else:
        idx = np.asarray(mask.indices, dtype=int)
        sub = h.entries[np.ix_(idx, idx)]
    if sub.size == 0:
        return SpectrumReport(levels=(), cluster_tol=cluster_tol, interior_count=0)
    off = sub - np.diag(np.diag(sub))
    if masked_max_abs(off, None) <= DIAGONAL_LIMIT:
        eigs = np.diag(sub).copy()
    else:
        eigs = np.linalg.eigvals(sub)
    worst = int(np.argmax(np.abs(eigs.imag)))
    if abs(eigs[worst].imag) > IMAG_LIMIT:
        raise NonRealSpectrumError(complex(eigs[worst]), IMAG_LIMIT)
    values = np.sort(eigs.real)
    clusters: list[list[float]] = [[float(values[0])]]
    for v in values[1:]:
        if float(v) - clusters[-1][-1] > cluster_tol:
            clusters.append([float(v)])
        else:
            clusters[-1].append(float(v))
    levels = tuple((float(np.mean(c)), len(c)) for c in clusters)
    return SpectrumReport(
        levels=levels, cluster_tol=cluster_tol, interior_count=int(values.size)
    )


def degeneracy_pattern(report: SpectrumReport, levels: int) -> str:
    """First `levels` degeneracies joined by the direct-sum symbol."""
    if levels < 0 or levels > len(report.levels):
        raise ValueError(
            f"requested {levels} levels, report has {len(report.levels)} clusters"
        )
    return " ⊕ ".join(str(d) for _, d in report.levels[:levels])

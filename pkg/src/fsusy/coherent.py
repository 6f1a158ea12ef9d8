"""Coherent-state coefficient tables for the deformed and graded oscillators.

Two families:

* one-index states |Z) with c_n = Z^n / sqrt([n]_Q!) for a real deformation Q
* two-index graded states with c_{r,s} = z^r / (sqrt(r!) sqrt([s]_q!)),
  where the grade-s factor is tracked by the index and never evaluated as a
  number (the generalized Grassmann variable enters only through s).

Square roots of complex q-factorials take the principal branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import RepresentationBreakdownError
from .qarith import GradingParams, q_factorial

__all__ = ["CoherentTable", "q_coherent_coeffs", "fractional_supercoherent_coeffs"]


@dataclass(frozen=True)
class CoherentTable:
    """Coefficient grid plus the parameters that define it."""

    kind: str  # "quon" | "fractional"
    params: dict
    coeffs: np.ndarray = field(repr=False)

    def to_json(self) -> dict:
        rows = []
        if self.coeffs.ndim == 1:
            for n, c in enumerate(self.coeffs):
                rows.append([int(n), 0, float(c.real), float(c.imag)])
        else:
            for r in range(self.coeffs.shape[0]):
                for s in range(self.coeffs.shape[1]):
                    c = self.coeffs[r, s]
                    rows.append([int(r), int(s), float(c.real), float(c.imag)])
        return {"params": dict(self.params, kind=self.kind), "coeffs": rows}


def q_coherent_coeffs(Z: complex, Q: float, nmax: int) -> CoherentTable:
    """Coefficients c_n = Z^n / sqrt([n]_Q!) for n = 0..nmax.

    Every deformed factorial over the range must be positive; otherwise the
    normalization does not exist.
    """
    if Q == 0:
        raise RepresentationBreakdownError("deformation must be a nonzero real number")
    coeffs = np.zeros(nmax + 1, dtype=np.complex128)
    for n in range(nmax + 1):
        fact = q_factorial(n, complex(Q)).real
        if fact <= 0:
            raise RepresentationBreakdownError(
                f"[{n}]_Q! = {fact:.6g} is not positive at Q = {Q}"
            )
        coeffs[n] = complex(Z) ** n / math.sqrt(fact)
    return CoherentTable(kind="quon", params={"Z": str(Z), "Q": Q, "nmax": nmax}, coeffs=coeffs)


def fractional_supercoherent_coeffs(
    z: complex, g: GradingParams, rmax: int
) -> CoherentTable:
    """Grid c_{r,s} = z^r / (sqrt(r!) sqrt([s]_q!)), r <= rmax, s < k.

    [s]_q! never vanishes for s <= k-1, so the table always exists.
    """
    if rmax < 0:
        raise ValueError(f"rmax must be >= 0, got {rmax}")
    grade_norm = [np.sqrt(q_factorial(s, g.q)) for s in range(g.k)]
    coeffs = np.zeros((rmax + 1, g.k), dtype=np.complex128)
    for r in range(rmax + 1):
        boson = complex(z) ** r / math.sqrt(math.factorial(r))
        for s in range(g.k):
            coeffs[r, s] = boson / grade_norm[s]
    return CoherentTable(
        kind="fractional", params={"z": str(z), "k": g.k, "rmax": rmax}, coeffs=coeffs
    )

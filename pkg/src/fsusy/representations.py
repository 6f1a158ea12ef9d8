"""Concrete matrices: bosons, k-fermions, Q-uons, and U_q(sl_2) generators.

Ladder conventions
------------------
Bosons and Q-uons use the Hermitian gauge (lowering operator is the conjugate
transpose of the raising one).  k-fermions use the asymmetric gauge

    f+ |s> = |s+1>,    f- |s> = [s]_q |s-1>,

which satisfies every defining relation exactly and avoids branch choices in
square roots of complex q-numbers; f+ and f- are then not mutually adjoint
for k >= 3.  The U_q(sl_2) lowering generator similarly reuses the raising
amplitudes so that products J+J- and J-J+ come out exactly right.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import OperatorMatrix
from .errors import (
    InvalidDeformationError,
    RepresentationBreakdownError,
    UnsupportedRepresentationError,
)
from .qarith import GradingParams, q_number

__all__ = [
    "BosonOps",
    "KFermionOps",
    "QuonOps",
    "UqSl2Ops",
    "boson_ops",
    "kfermion_ops",
    "quon_ops",
    "uqsl2_ops",
]


@dataclass(frozen=True)
class BosonOps:
    b_minus: OperatorMatrix
    b_plus: OperatorMatrix
    number: OperatorMatrix


@dataclass(frozen=True)
class KFermionOps:
    f_minus: OperatorMatrix
    f_plus: OperatorMatrix
    number: OperatorMatrix
    grading: OperatorMatrix


@dataclass(frozen=True)
class QuonOps:
    a_minus: OperatorMatrix
    a_plus: OperatorMatrix
    number: OperatorMatrix
    deformation: float


@dataclass(frozen=True)
class UqSl2Ops:
    j_minus: OperatorMatrix
    j_plus: OperatorMatrix
    q_j3: OperatorMatrix
    q_j3_inv: OperatorMatrix
    spin: float

    @property
    def dim(self) -> int:
        return self.j_plus.dim

    def j3_values(self) -> np.ndarray:
        """Diagonal of J3 (the magnetic quantum numbers -j .. j)."""
        j = self.spin
        return np.array([-j + m for m in range(self.dim)])


def boson_ops(nmax: int) -> BosonOps:
    """Truncated harmonic-oscillator ladder on levels 0..nmax.

    Parameters
    ----------
    nmax : int
        Highest retained level; b+ annihilates |nmax>.

    Returns
    -------
    BosonOps
        b-, b+ and the number operator, each (nmax+1) x (nmax+1).
    """
    if nmax < 1:
        raise ValueError(f"need at least two levels, got nmax={nmax}")
    dim = nmax + 1
    bp = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(nmax):
        bp[n + 1, n] = np.sqrt(n + 1)
    bm = bp.conj().T
    num = np.diag(np.arange(dim, dtype=np.complex128))
    return BosonOps(
        b_minus=OperatorMatrix(bm, "b-"),
        b_plus=OperatorMatrix(bp, "b+"),
        number=OperatorMatrix(num, "Nb"),
    )


def kfermion_ops(g: GradingParams) -> KFermionOps:
    """Generalized fermion pair on the k-dimensional grade register.

    The q-commutator f- f+ - q f+ f- equals 1 on every state: the top-level
    defect cancels because [k]_q = 0.  The grading operator K = f- f+ - f+ f-
    is diagonal with eigenvalues q^s.
    """
    k = g.k
    fp = np.zeros((k, k), dtype=np.complex128)
    fm = np.zeros((k, k), dtype=np.complex128)
    for s in range(k - 1):
        fp[s + 1, s] = 1.0
    for s in range(1, k):
        fm[s - 1, s] = q_number(s, g.q)
    num = np.diag(np.arange(k, dtype=np.complex128))
    grading = fm @ fp - fp @ fm
    return KFermionOps(
        f_minus=OperatorMatrix(fm, "f-"),
        f_plus=OperatorMatrix(fp, "f+"),
        number=OperatorMatrix(num, "Nf"),
        grading=OperatorMatrix(grading, "K"),
    )


def quon_ops(Q: float, nmax: int) -> QuonOps:
    """Deformed oscillator a- a+ - Q a+ a- = 1 for generic real Q != 0.

    Matrix elements use positive square roots of the deformed integers
    [n]_Q, so every [n]_Q over the truncated range must be nonnegative.
    """
    if Q == 0:
        raise InvalidDeformationError("deformation must be a nonzero real number")
    dim = nmax + 1
    norms = [q_number(n, complex(Q)).real for n in range(dim + 1)]
    for n, v in enumerate(norms):
        if v < 0:
            raise RepresentationBreakdownError(
                f"[{n}]_Q = {v:.6g} < 0 at Q = {Q}; no Hermitian ladder exists"
            )
    ap = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(nmax):
        ap[n + 1, n] = np.sqrt(norms[n + 1])
    am = ap.conj().T
    num = np.diag(np.arange(dim, dtype=np.complex128))
    return QuonOps(
        a_minus=OperatorMatrix(am, "a-"),
        a_plus=OperatorMatrix(ap, "a+"),
        number=OperatorMatrix(num, "N"),
        deformation=float(Q),
    )


def uqsl2_ops(j: float, g: GradingParams) -> UqSl2Ops:
    """Spin-j generators of the quantum algebra at the grading root of unity.

    Only classical-type highest-weight modules with 2j + 1 <= k are built;
    there the symmetric q-integers entering the matrix elements never hit the
    vanishing [k].  J+ raises m with amplitude sqrt([j-m][j+m+1]) (principal
    branch); J- reuses the same amplitude one step down, which makes the
    commutation relation with (q^{2J3} - q^{-2J3})/(q - q^{-1}) exact.
    """
    two_j = round(2 * j)
    if abs(2 * j - two_j) > 1e-12 or two_j < 0:
        raise ValueError(f"spin must be a nonnegative half-integer, got {j}")
    dim = two_j + 1
    if dim > g.k:
        raise UnsupportedRepresentationError(
            f"module dimension 2j+1 = {dim} exceeds grading order k = {g.k}"
        )
    j = two_j / 2

    def bracket(n: int) -> complex:
        return g.sym_bracket(n)

    # m runs -j .. j; index i = m + j.
    jp = np.zeros((dim, dim), dtype=np.complex128)
    jm = np.zeros((dim, dim), dtype=np.complex128)
    if dim > 1:
        for i in range(dim - 1):
            m_twice = -two_j + 2 * i  # 2m at the source state
            amp = np.sqrt(bracket((two_j - m_twice) // 2) * bracket((two_j + m_twice) // 2 + 1))
            jp[i + 1, i] = amp
            jm[i, i + 1] = amp

    def q_to_the_m(i: int, sign: int) -> complex:
        m_twice = -two_j + 2 * i
        if m_twice % 2 == 0:
            return g.power(sign * (m_twice // 2))
        # half-integer exponents sit off the power table
        import cmath

        return cmath.exp(sign * 1j * cmath.pi * m_twice / g.k)

    qj3 = np.diag([q_to_the_m(i, +1) for i in range(dim)]).astype(np.complex128)
    qj3inv = np.diag([q_to_the_m(i, -1) for i in range(dim)]).astype(np.complex128)
    return UqSl2Ops(
        j_minus=OperatorMatrix(jm, "J-"),
        j_plus=OperatorMatrix(jp, "J+"),
        q_j3=OperatorMatrix(qj3, "qJ3"),
        q_j3_inv=OperatorMatrix(qj3inv, "qJ3inv"),
        spin=j,
    )

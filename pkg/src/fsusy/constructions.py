"""Composite objects: projectors, graded ladders, supercharges, Hamiltonians.

Grade bookkeeping
-----------------
The projector Pi_i = (1/k) sum_s q^{si} K^s selects the grade g with
(i + g) = 0 mod k, so Pi_i is attached to grade (-i) mod k.  Supercharges
kill one grade each: Q- = X-(1 - Pi_{k-1}) vanishes on grade 1 and
Q+ = X+(1 - Pi_0) vanishes on grade 0.  Both are then nilpotent of order
exactly k on the graded Fock space, and the Hamiltonian built below commutes
with them.

The sector closed form
----------------------
With W = (raising)(lowering) and structure functions f_1..f_{k-2} giving the
ladder commutator per projector sector, the Hamiltonian on the Pi_m sector is

    (k-1) W + sum_{l=1..m} l f_l(N+m-l) - sum_{l=m+1..k-2} (k-1-l) f_l(N+m-l)

This is the unique diagonal operator that satisfies the order-k supercharge
relation on the sectors it constrains and commutes with Q+- everywhere.  The
equal-spacing oscillator (all f = 1) reduces it to the familiar four-term
projector form used by `hamiltonian_quon`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import (
    GradedBasis,
    InteriorMask,
    OperatorMatrix,
    identity,
    masked_max_abs,
    relation_residual,
    tensor_embed,
)
from .errors import (
    GradingViolationError,
    InvalidGradingError,
    RepresentationBreakdownError,
    ShapeError,
    SingularDenominatorError,
    UnsupportedInputError,
)
from .qarith import GradingParams, q_factorial
from .representations import (
    BosonOps,
    KFermionOps,
    UqSl2Ops,
    boson_ops,
    kfermion_ops,
    uqsl2_ops,
)

__all__ = [
    "ProjectorFamily",
    "QuonLadder",
    "GwhOps",
    "SusySystem",
    "projectors",
    "lowering_cycle",
    "quon_ladder",
    "supercharges",
    "hamiltonian_quon",
    "defining_relation_residual",
    "kpowers_to_grades",
    "gwh_rep",
    "structure_operator",
    "hamiltonian_gwh",
    "casimir",
    "hamiltonian_uqsl2",
    "build_quon_system",
    "build_gwh_system",
    "build_uqsl2_system",
    "build_system",
]

StructureFn = Callable[[int], complex]


@dataclass(frozen=True)
class ProjectorFamily:
    """The k grade projectors Pi_0 .. Pi_{k-1}, diagonal in the number basis."""

    ops: tuple[OperatorMatrix, ...]

    def __getitem__(self, i: int) -> OperatorMatrix:
        return self.ops[i]

    def __len__(self) -> int:
        return len(self.ops)

    def partial_sum(self, upto: int) -> OperatorMatrix:
        """Pi_0 + ... + Pi_upto."""
        total = self.ops[0]
        for i in range(1, upto + 1):
            total = total + self.ops[i]
        return total


def projectors(K: OperatorMatrix, g: GradingParams) -> ProjectorFamily:
    """Grade projectors Pi_i = (1/k) sum_s q^{si} K^s.

    Requires K^k = 1 within 1e-12; anything else is a grading violation.

    Entries within 1e-12 of 0 or 1 are snapped to those exact values.  The
    geometric sums behind them are exactly 0 or 1, and leaving the round-off
    in place lets high powers of the supercharges amplify it past the
    nilpotency tolerance at larger k.
    """
    dim = K.dim
    k_powers = [identity(dim).entries]
    for _ in range(g.k):
        k_powers.append(k_powers[-1] @ K.entries)
    if float(np.max(np.abs(k_powers[g.k] - np.eye(dim)))) > 1e-12:
        raise GradingViolationError(f"K^{g.k} deviates from the identity beyond 1e-12")
    ops = []
    for i in range(g.k):
        acc = np.zeros((dim, dim), dtype=np.complex128)
        for s in range(g.k):
            acc = acc + g.power(s * i) * k_powers[s]
        acc = acc / g.k
        acc[np.abs(acc) < 1e-12] = 0.0
        acc[np.abs(acc - 1.0) < 1e-12] = 1.0
        ops.append(OperatorMatrix(acc, f"Pi{i}"))
    return ProjectorFamily(tuple(ops))


def lowering_cycle(f: KFermionOps, g: GradingParams) -> OperatorMatrix:
    """Cyclic grade-lowering factor f- + (f+)^(k-1) / [k-1]_q!.

    Sends grade s to s-1 mod k; the wrap through the top uses the maximal
    raising power so that k applications return a scalar on each grade.
    """
    top = f.f_plus ** (g.k - 1)
    return OperatorMatrix(
        f.f_minus.entries + top.entries / q_factorial(g.k - 1, g.q), "A"
    )


@dataclass(frozen=True)
class QuonLadder:
    x_minus: OperatorMatrix
    x_plus: OperatorMatrix
    grading: OperatorMatrix
    number: OperatorMatrix


def quon_ladder(
    b: BosonOps, f: KFermionOps, basis: GradedBasis, g: GradingParams
) -> QuonLadder:
    """Graded ladder X- = b- A, X+ = b+ A^(k-1) with A the lowering cycle.

    Satisfies X- X+ - X+ X- = 1 away from the boson truncation, K X+ = q X+ K
    and K X- = q^-1 X- K exactly, and M = X+ X- acts as the boson number.
    """
    if f.f_plus.dim != g.k or b.b_plus.dim != basis.nmax + 1:
        raise ShapeError("factor dimensions do not match the graded basis")
    a = lowering_cycle(f, g)
    a_up = a ** (g.k - 1)
    xm = tensor_embed(b.b_minus, a, basis).relabeled("X-")
    xp = tensor_embed(b.b_plus, a_up, basis).relabeled("X+")
    grading = tensor_embed(identity(basis.nmax + 1), f.grading, basis).relabeled("K")
    number = (xp @ xm).relabeled("M")
    return QuonLadder(x_minus=xm, x_plus=xp, grading=grading, number=number)


def supercharges(
    xm: OperatorMatrix, xp: OperatorMatrix, proj: ProjectorFamily
) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Q- = X-(1 - Pi_{k-1}) and Q+ = X+(1 - Pi_0), nilpotent of order k."""
    if xm.dim != proj[0].dim or xp.dim != proj[0].dim:
        raise ShapeError("ladder and projector dimensions differ")
    one = identity(xm.dim)
    qm = (xm @ (one - proj[len(proj) - 1])).relabeled("Q-")
    qp = (xp @ (one - proj[0])).relabeled("Q+")
    return qm, qp


def hamiltonian_quon(
    xm: OperatorMatrix, xp: OperatorMatrix, proj: ProjectorFamily, g: GradingParams
) -> OperatorMatrix:
    """Equal-spacing Hamiltonian in the four-term projector form.

    H = X-X+ Pi_1 + sum_{l=2..k-1} (X+X- - l + 1)(Pi_0 + .. + Pi_{k-l-1})
        + sum_{l=2..k-1} l (X-X+ + (l-1)/2) Pi_l + X+X- (1 - Pi_{k-1}).

    For k = 2 the sums are empty and H = X+X- Pi_0 + X-X+ Pi_1.
    """
    if g.k < 2:
        raise InvalidGradingError(f"grading order must be >= 2, got {g.k}")
    dim = xm.dim
    one = identity(dim)
    lower_raise = xm @ xp
    raise_lower = xp @ xm
    h = lower_raise @ proj[1]
    for ell in range(2, g.k):
        h = h + (raise_lower - float(ell - 1) * one) @ proj.partial_sum(g.k - ell - 1)
        h = h + float(ell) * ((lower_raise + ((ell - 1) / 2.0) * one) @ proj[ell])
    h = h + raise_lower @ (one - proj[g.k - 1])
    return h.relabeled("H")


def defining_relation_residual(
    qm: OperatorMatrix,
    qp: OperatorMatrix,
    h: OperatorMatrix,
    g: GradingParams,
    mask: InteriorMask | None = None,
) -> float:
    """Residual of sum_j (Q-)^(k-1-j) Q+ (Q-)^j = (Q-)^(k-2) H on the mask."""
    k = g.k
    lhs = OperatorMatrix(np.zeros((qm.dim, qm.dim), dtype=np.complex128))
    for j in range(k):
        lhs = lhs + ((qm ** (k - 1 - j)) @ qp @ (qm**j))
    rhs = (qm ** (k - 2)) @ h
    return relation_residual(lhs, rhs, mask)


def kpowers_to_grades(coeffs: Sequence[complex], g: GradingParams) -> list[complex]:
    """Constants f_i with sum_i f_i Pi_i = sum_s c_s K^s.

    The inverse discrete transform f_i = sum_s c_s q^{-is}.
    """
    if len(coeffs) != g.k:
        raise ShapeError(f"need exactly {g.k} coefficients, got {len(coeffs)}")
    return [
        sum(complex(c) * g.power(-i * s) for s, c in enumerate(coeffs))
        for i in range(g.k)
    ]


def _normalize_structure(structure: Sequence, k: int) -> list[StructureFn]:
    if len(structure) != k:
        raise ShapeError(f"structure needs {k} entries, got {len(structure)}")
    out: list[StructureFn] = []
    for f in structure:
        if callable(f):
            out.append(f)
        else:
            val = complex(f)
            out.append(lambda n, _v=val: _v)
    return out


@dataclass(frozen=True)
class GwhOps:
    y_minus: OperatorMatrix
    y_plus: OperatorMatrix
    number: OperatorMatrix
    grading: OperatorMatrix
    basis: GradedBasis


def gwh_rep(k: int, nmax: int, structure: Sequence) -> GwhOps:
    """One-mode ladder whose commutator is sum_s f_s(N) Pi_s.

    The space splits into k ladder chains; the chain through |r, s> carries
    cumulative values F with F(0) = 0 and F(t+1) = F(t) + f_{sigma}(t), where
    sigma = (-grade) mod k is the projector index selecting the step-t state.
    Then Y+ |r, s> = sqrt(F(r+1)) |r+1, s+1 mod k>, Y- is its conjugate
    transpose, N counts the ladder step and K carries the grade q^s.

    Every cumulative value must be a nonnegative real, otherwise no Hermitian
    ladder exists and the first offending level is reported.
    """
    g = GradingParams.for_order(k)
    basis = GradedBasis(k=k, nmax=nmax)
    fs = _normalize_structure(structure, k)

    # cumulative[s0][t] = F value at step t of the chain entering grade s0 + t
    cumulative = np.zeros((k, nmax + 1))
    for s0 in range(k):
        total = 0.0
        for t in range(nmax):
            inc = complex(fs[(-(s0 + t)) % k](t))
            if abs(inc.imag) > 1e-12:
                raise RepresentationBreakdownError(
                    f"structure increment at chain {s0}, level {t} is not real: {inc}"
                )
            total += inc.real
            if total < -1e-12:
                raise RepresentationBreakdownError(
                    f"cumulative ladder norm turns negative at chain {s0}, level {t + 1}: {total}"
                )
            cumulative[s0][t + 1] = max(total, 0.0)

    yp = np.zeros((basis.dim, basis.dim), dtype=np.complex128)
    for r in range(nmax):
        for s in range(k):
            s0 = (s - r) % k
            yp[basis.flat(r + 1, (s + 1) % k), basis.flat(r, s)] = np.sqrt(
                cumulative[s0][r + 1]
            )
    ym = yp.conj().T
    number = np.kron(
        np.diag(np.arange(nmax + 1, dtype=np.complex128)), np.eye(k)
    )
    grading = np.kron(np.eye(nmax + 1), np.diag([g.power(s) for s in range(k)]))
    return GwhOps(
        y_minus=OperatorMatrix(ym, "Y-"),
        y_plus=OperatorMatrix(yp, "Y+"),
        number=OperatorMatrix(number, "N"),
        grading=OperatorMatrix(grading, "K"),
        basis=basis,
    )


def _diagonal_values(op: OperatorMatrix) -> np.ndarray:
    off = op.entries - np.diag(np.diag(op.entries))
    if off.size and float(np.max(np.abs(off))) > 1e-10:
        raise UnsupportedInputError(f"operator {op.label!r} is not diagonal")
    return np.diag(op.entries)


def structure_operator(
    structure: Sequence, number: OperatorMatrix, proj: ProjectorFamily, g: GradingParams
) -> OperatorMatrix:
    """The commutator right-hand side sum_s f_s(N) Pi_s as a matrix."""
    fs = _normalize_structure(structure, g.k)
    nvals = _diagonal_values(number)
    dim = number.dim
    acc = np.zeros((dim, dim), dtype=np.complex128)
    for s in range(g.k):
        fvals = np.array([fs[s](int(round(v.real))) for v in nvals])
        acc = acc + np.diag(fvals) @ proj[s].entries
    return OperatorMatrix(acc, "S")


def hamiltonian_gwh(
    ym: OperatorMatrix,
    yp: OperatorMatrix,
    number: OperatorMatrix,
    proj: ProjectorFamily,
    structure: Sequence,
    g: GradingParams,
) -> OperatorMatrix:
    """Hamiltonian for a general ladder commutator, sector by sector.

    On the Pi_m sector:

        (k-1) Y+Y- + sum_{l=1..m} l f_l(N+m-l)
                   - sum_{l=m+1..k-2} (k-1-l) f_l(N+m-l)

    where f of a diagonal argument is applied entrywise.  N must be diagonal.
    """
    k = g.k
    fs = _normalize_structure(structure, k)
    nvals = _diagonal_values(number)
    dim = number.dim
    base = float(k - 1) * (yp @ ym).entries
    h = np.zeros((dim, dim), dtype=np.complex128)
    for m in range(k):
        coeff = np.zeros(dim, dtype=np.complex128)
        for ell in range(1, m + 1):
            shift = m - ell
            coeff += ell * np.array(
                [fs[ell](int(round(v.real)) + shift) for v in nvals]
            )
        for ell in range(m + 1, k - 1):
            shift = m - ell
            coeff -= (k - 1 - ell) * np.array(
                [fs[ell](int(round(v.real)) + shift) for v in nvals]
            )
        h = h + (base + np.diag(coeff)) @ proj[m].entries
    return OperatorMatrix(h, "H")


def casimir(ops: UqSl2Ops, g: GradingParams) -> OperatorMatrix:
    """Invariant C = J-J+ + (q q^{2J3} + q^-1 q^{-2J3}) / (q - q^-1)^2."""
    if g.k == 2:
        raise SingularDenominatorError("singular denominator at q = -1")
    denom = (g.power(1) - g.power(-1)) ** 2
    qj3_sq = ops.q_j3 @ ops.q_j3
    qj3_inv_sq = ops.q_j3_inv @ ops.q_j3_inv
    c = (ops.j_minus @ ops.j_plus).entries + (
        g.q * qj3_sq.entries + g.power(-1) * qj3_inv_sq.entries
    ) / denom
    return OperatorMatrix(c, "C")


def _g_diag(ops: UqSl2Ops, g: GradingParams, shift: int) -> np.ndarray:
    """Diagonal of G(J3 + shift) with G(x) = (q^{2x} - q^{-2x})/(q - q^{-1})."""
    denom = g.power(1) - g.power(-1)
    vals = []
    for m in ops.j3_values():
        two_x = int(round(2 * (m + shift)))
        vals.append((g.power(two_x) - g.power(-two_x)) / denom)
    return np.diag(np.array(vals, dtype=np.complex128))


def hamiltonian_uqsl2(
    ops: UqSl2Ops, proj: ProjectorFamily, g: GradingParams
) -> OperatorMatrix:
    """Hamiltonian on a spin module, expressed through J+J-, J-J+ and G(J3).

    H = J-J+ Pi_1 + J+J- (1 - Pi_{k-1})
        + sum_{m=2..k-1} [J+J- + G(J3-m+1) + ... + G(J3-1)] (Pi_0 + .. + Pi_{k-m-1})
        + sum_{m=2..k-1} [m J-J+ - ((m-1) G(J3+1) + ... + G(J3+m-1))] Pi_m
    """
    if g.k == 2:
        raise SingularDenominatorError("singular denominator at q = -1")
    dim = ops.dim
    one = identity(dim)
    jm_jp = (ops.j_minus @ ops.j_plus).entries
    jp_jm = (ops.j_plus @ ops.j_minus).entries
    h = jm_jp @ proj[1].entries + jp_jm @ (one - proj[g.k - 1]).entries
    for m in range(2, g.k):
        down = np.zeros((dim, dim), dtype=np.complex128)
        for u in range(1, m):
            down = down + _g_diag(ops, g, -u)
        h = h + (jp_jm + down) @ proj.partial_sum(g.k - m - 1).entries
        up = np.zeros((dim, dim), dtype=np.complex128)
        for u in range(1, m):
            up = up + float(m - u) * _g_diag(ops, g, +u)
        h = h + (float(m) * jm_jp - up) @ proj[m].entries
    return OperatorMatrix(h, "H")


@dataclass(frozen=True)
class SusySystem:
    """A fully wired graded oscillator: ladder, grading, supercharges, H."""

    construction: str
    grading: GradingParams
    basis: GradedBasis | None
    ladder_minus: OperatorMatrix
    ladder_plus: OperatorMatrix
    grading_op: OperatorMatrix
    number_op: OperatorMatrix
    projectors: ProjectorFamily
    q_minus: OperatorMatrix
    q_plus: OperatorMatrix
    hamiltonian: OperatorMatrix
    extras: dict
    meta: dict

    @property
    def dim(self) -> int:
        return self.hamiltonian.dim

    def interior(self, margin: int) -> InteriorMask:
        """Interior mask at the given margin; exact modules keep everything."""
        if self.basis is None:
            return InteriorMask.full(self.dim)
        return InteriorMask.graded(self.basis, margin)

    def env(self) -> dict[str, OperatorMatrix]:
        """Name -> operator map for the relation evaluator."""
        out = {
            self.ladder_minus.label: self.ladder_minus,
            self.ladder_plus.label: self.ladder_plus,
            "K": self.grading_op,
            self.number_op.label: self.number_op,
            "Q-": self.q_minus,
            "Q+": self.q_plus,
            "H": self.hamiltonian,
            "I": identity(self.dim, "I"),
        }
        for i, p in enumerate(self.projectors.ops):
            out[f"Pi{i}"] = p
        out.update(self.extras)
        return out

    def bundle_operators(self) -> dict[str, OperatorMatrix]:
        """Operators included in the serialized bundle."""
        out = {
            self.ladder_minus.label: self.ladder_minus,
            self.ladder_plus.label: self.ladder_plus,
        }
        if self.construction == "uqsl2":
            out["qJ3"] = self.grading_op
            out["qJ3inv"] = self.extras["qJ3inv"]
            out["C"] = self.extras["C"]
        else:
            out["K"] = self.grading_op
            out[self.number_op.label] = self.number_op
        out["Q-"] = self.q_minus
        out["Q+"] = self.q_plus
        out["H"] = self.hamiltonian
        for i, p in enumerate(self.projectors.ops):
            out[f"Pi{i}"] = p
        return out

    def to_json(self) -> dict:
        from .core import matrix_to_json

        data = {
            "construction": self.construction,
            "k": self.grading.k,
            "operators": {
                label: matrix_to_json(op) for label, op in self.bundle_operators().items()
            },
        }
        data.update(self.meta)
        return data


def build_quon_system(k: int, nmax: int) -> SusySystem:
    """Boson + k-fermion realization on the graded Fock space."""
    g = GradingParams.for_order(k)
    basis = GradedBasis(k=k, nmax=nmax)
    b = boson_ops(nmax)
    f = kfermion_ops(g)
    ladder = quon_ladder(b, f, basis, g)
    proj = projectors(ladder.grading, g)
    qm, qp = supercharges(ladder.x_minus, ladder.x_plus, proj)
    h = hamiltonian_quon(ladder.x_minus, ladder.x_plus, proj, g)
    one_b = identity(nmax + 1)
    one_f = identity(k)
    extras = {
        "b-": tensor_embed(b.b_minus, one_f, basis).relabeled("b-"),
        "b+": tensor_embed(b.b_plus, one_f, basis).relabeled("b+"),
        "f-": tensor_embed(one_b, f.f_minus, basis).relabeled("f-"),
        "f+": tensor_embed(one_b, f.f_plus, basis).relabeled("f+"),
    }
    return SusySystem(
        construction="quon",
        grading=g,
        basis=basis,
        ladder_minus=ladder.x_minus,
        ladder_plus=ladder.x_plus,
        grading_op=ladder.grading,
        number_op=ladder.number,
        projectors=proj,
        q_minus=qm,
        q_plus=qp,
        hamiltonian=h,
        extras=extras,
        meta={"nmax": nmax},
    )


def build_gwh_system(k: int, nmax: int, structure: Sequence) -> SusySystem:
    """Generalized-ladder realization for a given structure choice."""
    g = GradingParams.for_order(k)
    rep = gwh_rep(k, nmax, structure)
    proj = projectors(rep.grading, g)
    qm, qp = supercharges(rep.y_minus, rep.y_plus, proj)
    h = hamiltonian_gwh(rep.y_minus, rep.y_plus, rep.number, proj, structure, g)
    extras = {"S": structure_operator(structure, rep.number, proj, g)}
    return SusySystem(
        construction="gwh",
        grading=g,
        basis=rep.basis,
        ladder_minus=rep.y_minus,
        ladder_plus=rep.y_plus,
        grading_op=rep.grading,
        number_op=rep.number,
        projectors=proj,
        q_minus=qm,
        q_plus=qp,
        hamiltonian=h,
        extras=extras,
        meta={"nmax": nmax},
    )


def build_uqsl2_system(k: int, j: int) -> SusySystem:
    """Quantum-algebra realization on an integer-spin module."""
    g = GradingParams.for_order(k)
    if g.k == 2:
        raise SingularDenominatorError("singular denominator at q = -1")
    if j != int(j):
        raise GradingViolationError(
            f"integer spin required for the grading (K^k = 1 fails at j = {j})"
        )
    ops = uqsl2_ops(int(j), g)
    proj = projectors(ops.q_j3, g)
    qm, qp = supercharges(ops.j_minus, ops.j_plus, proj)
    h = hamiltonian_uqsl2(ops, proj, g)
    j3 = OperatorMatrix(np.diag(ops.j3_values().astype(np.complex128)), "J3")
    extras = {"qJ3": ops.q_j3, "qJ3inv": ops.q_j3_inv, "C": casimir(ops, g)}
    return SusySystem(
        construction="uqsl2",
        grading=g,
        basis=None,
        ladder_minus=ops.j_minus,
        ladder_plus=ops.j_plus,
        grading_op=ops.q_j3.relabeled("qJ3"),
        number_op=j3,
        projectors=proj,
        q_minus=qm,
        q_plus=qp,
        hamiltonian=h,
        extras=extras,
        meta={"j": int(j)},
    )


def build_system(
    construction: str,
    k: int,
    nmax: int | None = None,
    j: int | None = None,
    structure: Sequence | None = None,
) -> SusySystem:
    if construction == "quon":
        if nmax is None:
            raise ValueError("quon construction needs nmax")
        return build_quon_system(k, nmax)
    if construction == "gwh":
        if nmax is None:
            raise ValueError("gwh construction needs nmax")
        if structure is None:
            structure = [1.0] * k
        return build_gwh_system(k, nmax, structure)
    if construction == "uqsl2":
        if j is None:
            j = (k - 1) // 2
        return build_uqsl2_system(k, j)
    raise ValueError(f"unknown construction {construction!r}")

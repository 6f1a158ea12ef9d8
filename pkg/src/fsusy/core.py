"""Graded Fock basis, dense labeled operator matrices, interior masks.

The state space is a boson ladder (levels 0..nmax) tensored with a k-level
grade register.  The flat index of |r, s> is n = r*k + s.  Truncation lives
only in the boson factor; interior masks cut away the levels near the
truncation boundary so that algebraic identities of bounded ladder degree
can be checked exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeError

__all__ = [
    "GradedBasis",
    "OperatorMatrix",
    "InteriorMask",
    "identity",
    "tensor_embed",
    "relation_residual",
    "masked_max_abs",
    "matrix_to_json",
    "matrix_from_json",
]


@dataclass(frozen=True)
class GradedBasis:
    """Indexing of the truncated graded Fock space.

    |r, s> with boson level r in 0..nmax and grade s in 0..k-1 sits at flat
    index r*k + s.
    """

    k: int
    nmax: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"grade count must be >= 2, got {self.k}")
        if self.nmax < 0:
            raise ValueError(f"boson truncation must be >= 0, got {self.nmax}")

    @property
    def dim(self) -> int:
        return (self.nmax + 1) * self.k

    def flat(self, r: int, s: int) -> int:
        if not (0 <= r <= self.nmax and 0 <= s < self.k):
            raise IndexError(f"state ({r}, {s}) outside basis")
        return r * self.k + s

    def boson_level(self, n: int) -> int:
        return n // self.k

    def grade(self, n: int) -> int:
        return n % self.k


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense complex matrix with a free-form label.

    Entries are validated to be finite and frozen after construction.
    """

    entries: np.ndarray
    label: str = ""

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ShapeError(f"operator must be square, got shape {arr.shape}")
        if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
            raise ValueError(f"operator {self.label!r} has non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def relabeled(self, label: str) -> "OperatorMatrix":
        return OperatorMatrix(self.entries, label)

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, OperatorMatrix):
            if other.dim != self.dim:
                raise ShapeError(f"dimension mismatch: {self.dim} vs {other.dim}")
            return other.entries
        raise TypeError(f"expected OperatorMatrix, got {type(other).__name__}")

    def __matmul__(self, other) -> "OperatorMatrix":
        return OperatorMatrix(self.entries @ self._coerce(other))

    def __add__(self, other) -> "OperatorMatrix":
        return OperatorMatrix(self.entries + self._coerce(other))

    def __sub__(self, other) -> "OperatorMatrix":
        return OperatorMatrix(self.entries - self._coerce(other))

    def __mul__(self, scalar) -> "OperatorMatrix":
        return OperatorMatrix(self.entries * complex(scalar))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "OperatorMatrix":
        if n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        out = np.eye(self.dim, dtype=np.complex128)
        for _ in range(n):
            out = out @ self.entries
        return OperatorMatrix(out)

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.entries))) if self.dim else 0.0


def identity(dim: int, label: str = "1") -> OperatorMatrix:
    return OperatorMatrix(np.eye(dim, dtype=np.complex128), label)


@dataclass(frozen=True)
class InteriorMask:
    """Subset of basis states kept when comparing truncated operators.

    margin 0 keeps every state; larger margins drop states whose ladder level
    is within `margin` of the truncation boundary.
    """

    dim: int
    margin: int
    indices: tuple[int, ...] = field(repr=False)

    @classmethod
    def graded(cls, basis: GradedBasis, margin: int) -> "InteriorMask":
        """All |r, s> with r <= nmax - margin."""
        if margin < 0:
            raise ValueError("margin must be >= 0")
        keep = [
            basis.flat(r, s)
            for r in range(max(0, basis.nmax - margin) + 1)
            for s in range(basis.k)
            if r <= basis.nmax - margin
        ]
        return cls(dim=basis.dim, margin=margin, indices=tuple(keep))

    @classmethod
    def levels(cls, dim: int, margin: int) -> "InteriorMask":
        """Plain ladder space: keep levels 0 .. dim-1-margin."""
        if margin < 0:
            raise ValueError("margin must be >= 0")
        return cls(dim=dim, margin=margin, indices=tuple(range(max(0, dim - margin))))

    @classmethod
    def full(cls, dim: int) -> "InteriorMask":
        """Keep everything (exact finite modules need no interior)."""
        return cls(dim=dim, margin=0, indices=tuple(range(dim)))


def tensor_embed(a: OperatorMatrix, b: OperatorMatrix, basis: GradedBasis) -> OperatorMatrix:
    """Act with `a` on the boson index and `b` on the grade index.

    Under flat indexing n = r*k + s this is the Kronecker product a (x) b.
    Embeddings of pure-boson and pure-grade operators commute exactly.
    """
    if a.dim != basis.nmax + 1:
        raise ShapeError(f"boson factor is {a.dim}-dim, basis wants {basis.nmax + 1}")
    if b.dim != basis.k:
        raise ShapeError(f"grade factor is {b.dim}-dim, basis wants {basis.k}")
    label = f"{a.label}*{b.label}" if a.label and b.label else (a.label or b.label)
    return OperatorMatrix(np.kron(a.entries, b.entries), label)


def masked_max_abs(diff: np.ndarray, mask: InteriorMask | None) -> float:
    """Max absolute entry of diff restricted to the mask's rows and columns."""
    if mask is None:
        sub = diff
    else:
        if mask.dim != diff.shape[0]:
            raise ShapeError(f"mask dim {mask.dim} does not match operator dim {diff.shape[0]}")
        if not mask.indices:
            return 0.0
        idx = np.asarray(mask.indices)
        sub = diff[np.ix_(idx, idx)]
    if sub.size == 0:
        return 0.0
    return float(np.max(np.abs(sub)))


def relation_residual(
    lhs: OperatorMatrix, rhs: OperatorMatrix, mask: InteriorMask | None = None
) -> float:
    """Max-absolute-entry norm of P (lhs - rhs) P on the mask's interior.

    Zero means the relation holds exactly on the selected states.
    """
    if lhs.dim != rhs.dim:
        raise ShapeError(f"dimension mismatch: {lhs.dim} vs {rhs.dim}")
    return masked_max_abs(lhs.entries - rhs.entries, mask)


def matrix_to_json(op: OperatorMatrix) -> dict:
    """Serializable form: row-major [re, im] pairs of length dim^2."""
    flat = op.entries.reshape(-1)
    return {
        "dim": op.dim,
        "label": op.label,
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_json(data: dict) -> OperatorMatrix:
    dim = int(data["dim"])
    entries = data["entries"]
    if len(entries) != dim * dim:
        raise ShapeError(f"expected {dim * dim} entries, got {len(entries)}")
    arr = np.array([complex(re, im) for re, im in entries], dtype=np.complex128)
    return OperatorMatrix(arr.reshape(dim, dim), str(data.get("label", "")))


def save_matrix(op: OperatorMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_json(op), fh)


def load_matrix(path) -> OperatorMatrix:
    with open(path, encoding="utf-8") as fh:
        return matrix_from_json(json.load(fh))

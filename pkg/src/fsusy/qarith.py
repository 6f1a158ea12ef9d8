"""Complex q-arithmetic: roots of unity, q-numbers, q-factorials, grading data.

All scalars are complex doubles.  The deformation parameter q is computed once
per grading order and reused everywhere through a cached power table, so that
identities such as q^k = 1 evaluate identically at every call site.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .errors import InvalidGradingError, SingularDenominatorError


def root_of_unity(k: int) -> complex:
    """Primitive k-th root of unity exp(2*pi*i/k).

    k = 2 returns -1 exactly (no round-off in the imaginary part).
    """
    if k < 2:
        raise InvalidGradingError(f"grading order must be >= 2, got {k}")
    if k == 2:
        return complex(-1.0, 0.0)
    return cmath.exp(2j * cmath.pi / k)


def q_number(n: int, q: complex) -> complex:
    """q-deformed integer 1 + q + ... + q^(n-1).

    Evaluated in Horner form, so the recursion [n+1] = 1 + q*[n] holds
    bit-for-bit.  Agrees with (1 - q^n)/(1 - q) away from q = 1 and returns
    n at q = 1 without a special case.
    """
    if n < 0:
        raise ValueError(f"q-number index must be >= 0, got {n}")
    val = 0j
    for _ in range(n):
        val = 1 + q * val
    return val


def q_factorial(n: int, q: complex) -> complex:
    """Product [1]_q [2]_q ... [n]_q, with the empty product equal to 1."""
    if n < 0:
        raise ValueError(f"q-factorial index must be >= 0, got {n}")
    total = complex(1.0)
    for j in range(1, n + 1):
        total *= q_number(j, q)
    return total


@dataclass(frozen=True)
class GradingParams:
    """Grading order k together with q = exp(2*pi*i/k) and its power table.

    Powers q^j are produced by repeated multiplication and stored once, so
    every consumer sees bit-identical values.
    """

    k: int
    q: complex
    powers: tuple[complex, ...]

    @classmethod
    def for_order(cls, k: int) -> "GradingParams":
        q = root_of_unity(k)
        powers = [complex(1.0)]
        for _ in range(k - 1):
            powers.append(powers[-1] * q)
        if abs(powers[-1] * q - 1.0) > 1e-12:
            raise InvalidGradingError(f"q^{k} deviates from 1 beyond tolerance")
        if any(abs(p - 1.0) <= 0.1 for p in powers[1:]):
            raise InvalidGradingError(f"q is not a primitive root of order {k}")
        return cls(k=k, q=q, powers=tuple(powers))

    def power(self, j: int) -> complex:
        """q^j from the cached table; j may be any integer."""
        return self.powers[j % self.k]

    def sym_bracket(self, n: int) -> complex:
        """Symmetric q-integer (q^n - q^-n)/(q - q^-1).

        Undefined at k = 2, where q - q^-1 = 0.
        """
        if self.k == 2:
            raise SingularDenominatorError("singular denominator at q = -1")
        return (self.power(n) - self.power(-n)) / (self.power(1) - self.power(-1))

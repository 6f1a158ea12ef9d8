"""Exception types shared across the package."""


class FsusyError(Exception):
    """Base class for package-specific errors."""


class InvalidGradingError(FsusyError):
    """Grading order k out of range (k must be at least 2)."""


class ShapeError(FsusyError):
    """Operator dimensions do not match."""


class InvalidDeformationError(FsusyError):
    """Deformation parameter outside the admissible range."""


class RepresentationBreakdownError(FsusyError):
    """Requested matrix elements do not exist (negative or non-real norms)."""


class UnsupportedRepresentationError(FsusyError):
    """Representation outside the supported family."""


class GradingViolationError(FsusyError):
    """Grading operator fails K^k = 1 within tolerance."""


class SingularDenominatorError(FsusyError):
    """Formula denominator vanishes at this root of unity."""


class UnsupportedInputError(FsusyError):
    """Operation received an input shape it does not handle (e.g. non-diagonal)."""


class NonRealSpectrumError(FsusyError):
    """An eigenvalue has an imaginary part beyond tolerance."""

    def __init__(self, eigenvalue: complex, limit: float):
        self.eigenvalue = eigenvalue
        self.limit = limit
        super().__init__(
            f"eigenvalue {eigenvalue} has |imag| = {abs(eigenvalue.imag):.3e} > {limit:.1e}"
        )


class RelationSyntaxError(FsusyError):
    """Relation text failed to parse.

    Carries the byte offset of the failure and the set of token kinds that
    would have been accepted there.
    """

    def __init__(self, message: str, offset: int, expected: tuple[str, ...]):
        self.offset = offset
        self.expected = expected
        super().__init__(f"{message} at offset {offset}; expected one of {sorted(expected)}")


class UnboundIdentifierError(FsusyError):
    """Relation refers to a name not present in the evaluation environment."""

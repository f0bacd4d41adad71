"""Exception hierarchy shared by all ramislope modules."""

from __future__ import annotations


class RamislopeError(Exception):
    """Base class for every error raised by this package."""


# ---------------------------------------------------------------- numerics

class DomainError(RamislopeError):
    """Input lies outside the domain of a piecewise-linear function or series map."""


class NotInvertible(RamislopeError):
    """Piecewise-linear function cannot be inverted (zero slope or shifted anchor)."""


# ------------------------------------------------------------ series fields

class PrecisionExhausted(RamislopeError):
    """A result could not be resolved within the current precision window."""


class FieldTooSmall(RamislopeError):
    """The coefficient field is missing a required root of unity or element."""


# -------------------------------------------------------------- extensions

class TameDegreeError(RamislopeError):
    """Tame cover degree is divisible by the residue characteristic."""


class WildBreakError(RamislopeError):
    """Artin-Schreier break exponent is divisible by p (not in normal form)."""


class ZeroCoefficient(RamislopeError):
    """A defining coefficient that must be nonzero is zero."""


class UnsupportedCompositum(RamislopeError):
    """Requested compositum shape is outside the supported list."""


class NotClosed(RamislopeError):
    """Candidate automorphism set is not closed under composition."""


class NotGalois(RamislopeError):
    """Candidate automorphism count is smaller than the separable degree."""


# ------------------------------------------------------------- ramification

class NotSubgroup(RamislopeError):
    """Element set is not a subgroup of the ambient group."""


class NotAbelian(RamislopeError):
    """Operation requires an abelian group."""


# -------------------------------------------------------------- slopes_reps

class NonIntegerAverage(RamislopeError):
    """Character average failed to land in the rational integers (corrupted data)."""


class NegativeMultiplicity(RamislopeError):
    """Break decomposition produced a negative multiplicity (inconsistent input)."""


class GroupMismatch(RamislopeError):
    """Operands are representations of different groups."""


# -------------------------------------------------------------------- nearby

class CertificateViolation(RamislopeError):
    """A boundedness certificate check failed; indicates an implementation bug."""


# ----------------------------------------------------------------------- cli

class ParseError(RamislopeError):
    """Job text is not syntactically valid."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(message)
        self.line = line
        self.column = column

    def __str__(self) -> str:
        base = super().__str__()
        if self.line:
            return f"line {self.line}, col {self.column}: {base}"
        return base


class ValidationError(RamislopeError):
    """Job is syntactically valid but semantically inconsistent."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(message)
        self.line = line

    def __str__(self) -> str:
        base = super().__str__()
        if self.line:
            return f"line {self.line}: {base}"
        return base

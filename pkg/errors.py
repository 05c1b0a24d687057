"""
Exception hierarchy for the certificate toolkit.

Input errors map to CLI exit code 1, domain errors to exit code 2.
"""

from typing import Any, Dict, Optional


class CertifyError(Exception):
    """Base class for every error raised by the toolkit."""

    def __init__(self, message: str, value: Any = None):
        super().__init__(message)
        self.message = message
        self.value = value

    def to_payload(self) -> Dict[str, Any]:
        """Machine-readable error object for certificate files and CLI output."""
        payload: Dict[str, Any] = {
            "error": type(self).__name__,
            "message": self.message,
        }
        if self.value is not None:
            payload["value"] = _render(self.value)
        return payload


def _render(value: Any) -> Any:
    # serialize() lives in the frontend, which itself raises these errors
    from expressions import serialize

    if isinstance(value, (str, int, bool)):
        return value
    try:
        return serialize(value)
    except TypeError:
        return str(value)


# Malformed input (exit 1)

class InputError(CertifyError, ValueError):
    """The input text or file is not well formed."""


class ExpressionSyntaxError(InputError):
    """Expression text does not match the grammar."""

    def __init__(self, message: str, offset: int, text: Optional[str] = None):
        super().__init__(f"{message} at byte offset {offset}", value=text)
        self.offset = offset

    def to_payload(self) -> Dict[str, Any]:
        payload = super().to_payload()
        payload["offset"] = self.offset
        return payload


class DivisionByZeroLiteral(InputError):
    """A literal zero appears as a denominator."""

    def __init__(self, offset: int):
        super().__init__(f"division by literal zero at byte offset {offset}")
        self.offset = offset


class ZeroDenominator(InputError):
    """Simplification produced a zero denominator."""


class ProblemFormatError(InputError):
    """A problem or certificate file does not match its schema."""


# Domain refusals (exit 2)

class DomainError(CertifyError):
    """The input is well formed but leaves the supported theory."""


class NonSplitDenominator(DomainError):
    """A denominator has an irreducible factor of x-degree at least two."""


class NonzeroResidue(DomainError):
    """An antiderivative would need a logarithm."""


class IntegrabilityViolation(DomainError):
    """The pair (A, B) does not satisfy d_t A = d_x B."""


class CriterionFails(DomainError):
    """The group has a Ga or Gm quotient, so no dense generators exist."""


class SymbolicOnly(DomainError):
    """The description has no matrix realization in the catalog."""


class UnsupportedDescription(DomainError):
    """The operation does not apply to this kind of group description."""


class SystemTooLarge(DomainError):
    """The linear system exceeds the configured size limit."""


class TrivialNullspace(DomainError):
    """Bound overrides left the linear system without a nonzero solution."""


class BoundsTooSmall(DomainError):
    """Bound overrides are too small for the ansatz to hold the R_i."""


# Arithmetic

class DivisionByZero(CertifyError, ZeroDivisionError):
    """Division by the zero element of a field."""


class PoleAtPoint(CertifyError, ZeroDivisionError):
    """Evaluation point is a pole of the function."""


class DivisorZero(CertifyError, ZeroDivisionError):
    """Right division by the zero operator."""


class IndexOutOfRange(CertifyError, IndexError):
    """A word refers to a generator that does not exist."""

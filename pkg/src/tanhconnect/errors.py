"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class TanhConnectError(Exception):
    """Base class for all errors raised by tanhconnect."""


# -- expressions -------------------------------------------------------------

class ExpressionSyntaxError(TanhConnectError, ValueError):
    """Malformed expression text.

    ``offset`` is the byte offset into the source where parsing stopped and
    ``expected`` names what the parser was looking for there.
    """

    def __init__(self, message: str, offset: int, expected: str):
        super().__init__(f"{message} at offset {offset} (expected {expected})")
        self.offset = offset
        self.expected = expected


class UnknownIdentifier(TanhConnectError, ValueError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r} at offset {offset}")
        self.name = name
        self.offset = offset


# -- problem statement -------------------------------------------------------

class ValidationIssue(TanhConnectError, ValueError):
    """One violated invariant of a piecewise problem statement."""


class UnorderedCuts(ValidationIssue):
    pass


class CutOutsideDomain(ValidationIssue):
    pass


class PartitionCountMismatch(ValidationIssue):
    pass


class NonFiniteAtMidpoint(ValidationIssue):
    pass


class NonPositiveSigma(ValidationIssue):
    pass


class InvalidDomain(ValidationIssue):
    pass


class InvalidConnectorParams(ValidationIssue):
    pass


class SpecValidationError(TanhConnectError, ValueError):
    """Raised by ``validate`` with every issue found, not just the first."""

    def __init__(self, issues: list[ValidationIssue]):
        self.issues = list(issues)
        lines = "; ".join(f"{type(i).__name__}: {i}" for i in self.issues)
        super().__init__(f"{len(self.issues)} validation issue(s): {lines}")

    def kinds(self) -> list[str]:
        return [type(i).__name__ for i in self.issues]


# -- connectors --------------------------------------------------------------

class DomainViolation(TanhConnectError, ValueError):
    pass


class WrongKind(TanhConnectError, ValueError):
    pass


# -- quadrature --------------------------------------------------------------

class MaxDepthExceeded(TanhConnectError, ArithmeticError):
    def __init__(self, message: str, value: float, error: float):
        super().__init__(message)
        self.value = value
        self.error = error


class NonFiniteSample(TanhConnectError, ArithmeticError):
    def __init__(self, x: float, value: float):
        super().__init__(f"integrand is non-finite ({value}) at x={x!r}")
        self.x = x
        self.value = value


# -- assembly ----------------------------------------------------------------

class ExactificationFailure(TanhConnectError, ArithmeticError):
    pass


class SingularMatrix(TanhConnectError, ArithmeticError):
    pass


# -- approximant -------------------------------------------------------------

class NonFiniteResult(TanhConnectError, ArithmeticError):
    def __init__(self, x: float, interval: int, weight: float, value: float):
        super().__init__(
            f"partition {interval} is {value} at x={x!r} with nonzero weight {weight!r}")
        self.x = x
        self.interval = interval
        self.weight = weight
        self.value = value


class NonPositiveScale(TanhConnectError, ValueError):
    pass


class ArtifactError(TanhConnectError, ValueError):
    """Unreadable or structurally invalid artifact document."""


class SchemaVersionMismatch(ArtifactError):
    pass


class CorruptMatrix(ArtifactError):
    pass


# -- showcase ----------------------------------------------------------------

class NonFiniteState(TanhConnectError, ArithmeticError):
    def __init__(self, t: float):
        super().__init__(f"integrator state became non-finite at t={t!r}")
        self.t = t


class ZeroReference(TanhConnectError, ArithmeticError):
    def __init__(self, absolute_error: float):
        super().__init__(
            f"reference value is zero; absolute error is {absolute_error!r}")
        self.absolute_error = absolute_error

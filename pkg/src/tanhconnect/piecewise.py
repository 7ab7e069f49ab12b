"""Problem statement: domain, cut abscissae, partition functions, connector choice."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CutOutsideDomain,
    InvalidConnectorParams,
    InvalidDomain,
    NonFiniteAtMidpoint,
    NonPositiveSigma,
    PartitionCountMismatch,
    SpecValidationError,
    UnorderedCuts,
    ValidationIssue,
)
from .expr import Expression, parse

__all__ = [
    "DomainInterval",
    "ConnectorParams",
    "PiecewiseSpec",
    "SpecFileError",
    "DEFAULT_SIGMA",
    "make_spec",
    "validate",
    "spec_from_dict",
    "spec_to_dict",
]

DEFAULT_SIGMA = 1e-6
CONNECTOR_KINDS = ("raw", "regularized")


class SpecFileError(ValidationIssue):
    """Structural problem in a JSON spec document (missing/unknown keys, bad types)."""


@dataclass(frozen=True)
class DomainInterval:
    x0: float
    xf: float

    @property
    def length(self) -> float:
        return self.xf - self.x0

    def contains(self, x) -> bool | np.ndarray:
        return (x >= self.x0) & (x <= self.xf)


@dataclass(frozen=True)
class ConnectorParams:
    """How the tanh switch at each cut is built.

    ``sigma`` carries the units of the independent variable and only matters
    for the regularized kind.  ``endpoint_exponent`` is the power applied to
    the two endpoint factors of the raw connector.
    """

    kind: str = "regularized"
    sigma: float = DEFAULT_SIGMA
    endpoint_exponent: int = 2


@dataclass(frozen=True)
class PiecewiseSpec:
    domain: DomainInterval
    cuts: tuple[float, ...]
    partitions: tuple[Expression, ...]
    connector: ConnectorParams = field(default_factory=ConnectorParams)

    @property
    def n_cuts(self) -> int:
        return len(self.cuts)

    @property
    def length(self) -> float:
        return self.domain.length

    @property
    def edges(self) -> tuple[float, ...]:
        """Interval boundaries ``x0, x_1, ..., x_N, xf``."""
        return (self.domain.x0, *self.cuts, self.domain.xf)

    @property
    def midpoints(self) -> tuple[float, ...]:
        e = self.edges
        return tuple(0.5 * (a + b) for a, b in zip(e[:-1], e[1:]))

    @property
    def variable(self) -> str:
        return self.partitions[0].variable if self.partitions else "x"

    def interval_index(self, x):
        """Index of the partition interval holding ``x``.

        A point sitting exactly on cut ``j`` is assigned to the interval on
        its right, ``j``.
        """
        idx = np.searchsorted(np.asarray(self.cuts, dtype=float), x, side="right")
        return int(idx) if np.ndim(x) == 0 else idx

    def reference(self, x):
        """Evaluate the original discontinuous function by interval membership."""
        if np.ndim(x) == 0:
            return self.partitions[self.interval_index(x)](x)
        x = np.asarray(x, dtype=float)
        idx = self.interval_index(x)
        out = np.empty_like(x)
        for n, psi in enumerate(self.partitions):
            mask = idx == n
            if mask.any():
                out[mask] = psi(x[mask])
        return out


def _as_expression(p, variable: str) -> Expression:
    if isinstance(p, Expression):
        return p
    if isinstance(p, (int, float)):
        return parse(repr(float(p)), variable)
    return parse(str(p), variable)


def make_spec(domain: tuple[float, float] | DomainInterval,
              cuts: Iterable[float],
              partitions: Sequence[str | Expression | float],
              connector: ConnectorParams | None = None,
              variable: str = "x") -> PiecewiseSpec:
    """Build and validate a spec from plain Python values."""
    if not isinstance(domain, DomainInterval):
        domain = DomainInterval(float(domain[0]), float(domain[1]))
    spec = PiecewiseSpec(
        domain=domain,
        cuts=tuple(float(c) for c in cuts),
        partitions=tuple(_as_expression(p, variable) for p in partitions),
        connector=connector or ConnectorParams(),
    )
    return validate(spec)


def validate(spec: PiecewiseSpec) -> PiecewiseSpec:
    """Check every invariant of ``spec``; raise with all violations at once.

    Returns the spec unchanged when it is valid, so validating twice is a
    no-op.  Domain length and interval midpoints are exposed as properties.
    """
    issues: list[ValidationIssue] = []
    x0, xf = spec.domain.x0, spec.domain.xf
    domain_ok = math.isfinite(x0) and math.isfinite(xf) and x0 < xf
    if not domain_ok:
        issues.append(InvalidDomain(f"domain ({x0}, {xf}) must be finite with x0 < xf"))

    cuts = spec.cuts
    if any(not math.isfinite(c) for c in cuts):
        issues.append(CutOutsideDomain(f"non-finite cut in {list(cuts)}"))
    elif domain_ok:
        outside = [c for c in cuts if not (x0 < c < xf)]
        if outside:
            issues.append(CutOutsideDomain(f"cuts {outside} not strictly inside ({x0}, {xf})"))
    if any(b <= a for a, b in zip(cuts[:-1], cuts[1:])):
        issues.append(UnorderedCuts(f"cuts {list(cuts)} are not strictly increasing"))

    if len(spec.partitions) != len(cuts) + 1:
        issues.append(PartitionCountMismatch(
            f"{len(cuts)} cut(s) need {len(cuts) + 1} partitions, got {len(spec.partitions)}"))
    elif domain_ok and not issues:
        for n, (psi, mid) in enumerate(zip(spec.partitions, spec.midpoints)):
            value = psi(mid)
            if not math.isfinite(value):
                issues.append(NonFiniteAtMidpoint(
                    f"partition {n} ({psi}) is {value} at its midpoint {mid!r}"))

    c = spec.connector
    if c.kind not in CONNECTOR_KINDS:
        issues.append(InvalidConnectorParams(f"connector kind {c.kind!r} not in {CONNECTOR_KINDS}"))
    if not (isinstance(c.sigma, (int, float)) and math.isfinite(c.sigma) and c.sigma > 0):
        issues.append(NonPositiveSigma(f"sigma must be finite and positive, got {c.sigma!r}"))
    if isinstance(c.endpoint_exponent, bool) or not isinstance(c.endpoint_exponent, int) \
            or c.endpoint_exponent < 1:
        issues.append(InvalidConnectorParams(
            f"endpoint_exponent must be a positive integer, got {c.endpoint_exponent!r}"))

    if issues:
        raise SpecValidationError(issues)
    return spec


# -- JSON documents ----------------------------------------------------------

_SPEC_KEYS = {"domain", "cuts", "partitions", "connector", "variable"}
_CONNECTOR_KEYS = {"kind", "sigma", "endpoint_exponent"}


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecValidationError([SpecFileError(f"{where} must be a number, got {value!r}")])
    return float(value)


def connector_from_dict(doc: dict) -> ConnectorParams:
    if not isinstance(doc, dict):
        raise SpecValidationError([SpecFileError("connector must be an object")])
    unknown = set(doc) - _CONNECTOR_KEYS
    if unknown:
        raise SpecValidationError([SpecFileError(f"unknown connector keys {sorted(unknown)}")])
    kind = doc.get("kind", "regularized")
    sigma = _number(doc.get("sigma", DEFAULT_SIGMA), "connector.sigma")
    exponent = doc.get("endpoint_exponent", 2)
    if isinstance(exponent, float) and exponent.is_integer():
        exponent = int(exponent)
    return ConnectorParams(kind=kind, sigma=sigma, endpoint_exponent=exponent)


def spec_from_dict(doc: dict, extra_keys: Iterable[str] = ()) -> PiecewiseSpec:
    """Parse and validate a spec document; unknown keys are rejected."""
    if not isinstance(doc, dict):
        raise SpecValidationError([SpecFileError("spec document must be a JSON object")])
    unknown = set(doc) - _SPEC_KEYS - set(extra_keys)
    if unknown:
        raise SpecValidationError([SpecFileError(f"unknown keys {sorted(unknown)}")])
    missing = {"domain", "cuts", "partitions"} - set(doc)
    if missing:
        raise SpecValidationError([SpecFileError(f"missing keys {sorted(missing)}")])
    dom = doc["domain"]
    if not isinstance(dom, dict) or set(dom) != {"x0", "xf"}:
        raise SpecValidationError([SpecFileError("domain must be an object with exactly x0 and xf")])
    if not isinstance(doc["cuts"], list) or not isinstance(doc["partitions"], list):
        raise SpecValidationError([SpecFileError("cuts and partitions must be arrays")])
    if not all(isinstance(p, str) for p in doc["partitions"]):
        raise SpecValidationError([SpecFileError("partitions must be expression strings")])
    variable = doc.get("variable", "x")
    if not isinstance(variable, str):
        raise SpecValidationError([SpecFileError("variable must be a string")])
    return make_spec(
        (_number(dom["x0"], "domain.x0"), _number(dom["xf"], "domain.xf")),
        [_number(c, "cuts[]") for c in doc["cuts"]],
        doc["partitions"],
        connector_from_dict(doc.get("connector", {})),
        variable=variable,
    )


def spec_to_dict(spec: PiecewiseSpec) -> dict:
    doc = {
        "domain": {"x0": spec.domain.x0, "xf": spec.domain.xf},
        "cuts": list(spec.cuts),
        "partitions": [str(p) for p in spec.partitions],
        "connector": {
            "kind": spec.connector.kind,
            "sigma": spec.connector.sigma,
            "endpoint_exponent": spec.connector.endpoint_exponent,
        },
    }
    if spec.variable != "x":
        doc["variable"] = spec.variable
    return doc

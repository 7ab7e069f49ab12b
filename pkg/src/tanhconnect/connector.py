"""Hyperbolic-tangent connecting functions placed at each discontinuity.

Two forms are provided.  The raw connector

    chi(x) = tanh(1 / p(u)),   p(u) = u^e * (x - x_d)/L * (1 - u)^e,
    u = (x - x0) / L,

is a switch from -1 to +1 whose argument diverges at the cut itself, and the
regularized connector

    Gamma(x) = tanh(delta / (q^2 + (sigma/L)^2)),
    delta = (x - x_d)/L,   q = u * delta * (1 - u),

which is finite everywhere, vanishes at the cut and rises to +-1 over a
half-width of about sigma^2 / L.  Both are evaluated in coordinates
normalized by the domain length L, so rescaling every abscissa (and sigma)
by the same factor leaves the values unchanged.

Whenever the tanh argument exceeds :data:`SATURATION` in magnitude the
result is the exact sign, without calling tanh.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainViolation, WrongKind
from .piecewise import ConnectorParams, DomainInterval

__all__ = ["Connector", "SATURATION", "chi_raw", "gamma_reg", "transition_width"]

#: |tanh(20)| rounds to 1 in double precision.
SATURATION = 20.0


def _prepare(c: "Connector", x):
    scalar = np.ndim(x) == 0
    xv = np.atleast_1d(np.asarray(x, dtype=np.float64))
    bad = ~((xv >= c.domain.x0) & (xv <= c.domain.xf))
    if bad.any():
        raise DomainViolation(
            f"x={xv[bad][0]!r} outside connector domain [{c.domain.x0}, {c.domain.xf}]")
    return scalar, xv


def _finish(scalar: bool, out: np.ndarray):
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class Connector:
    """The switch attached to one cut ``x_d`` of a domain."""

    domain: DomainInterval
    x_d: float
    params: ConnectorParams = ConnectorParams()

    def __post_init__(self):
        if not (self.domain.x0 < self.x_d < self.domain.xf):
            raise DomainViolation(
                f"cut {self.x_d!r} not strictly inside ({self.domain.x0}, {self.domain.xf})")

    def __call__(self, x):
        if self.params.kind == "raw":
            return chi_raw(self, x)
        return gamma_reg(self, x)

    def is_saturated(self, x):
        return np.abs(self(x)) == 1.0


def chi_raw(c: Connector, x):
    """Raw connector value at ``x`` (scalar or array) in [-1, 1].

    Exactly 0 at the cut and the exact sign of ``x - x_d`` at the domain
    endpoints and wherever the tanh argument is saturated.
    """
    scalar, xv = _prepare(c, x)
    L = c.domain.length
    e = c.params.endpoint_exponent
    u = (xv - c.domain.x0) / L
    w = (c.domain.xf - xv) / L
    delta = (xv - c.x_d) / L
    with np.errstate(all="ignore"):
        p = u**e * delta * w**e
        out = np.sign(xv - c.x_d)
        live = np.abs(p) * SATURATION >= 1.0
        out[live] = np.tanh(1.0 / p[live])
    return _finish(scalar, out)


def gamma_reg(c: Connector, x):
    """Regularized connector value at ``x``; finite for every x in the domain."""
    scalar, xv = _prepare(c, x)
    L = c.domain.length
    s = c.params.sigma / L
    u = (xv - c.domain.x0) / L
    w = (c.domain.xf - xv) / L
    diff = xv - c.x_d
    delta = diff / L
    with np.errstate(all="ignore"):
        q = u * delta * w
        arg = delta / (q * q + s * s)
        out = np.sign(diff)
        live = np.isfinite(arg) & (np.abs(arg) <= SATURATION)
        out[live] = np.tanh(arg[live])
    return _finish(scalar, out)


def transition_width(c: Connector) -> float:
    """Half-width sigma^2 / L of the zone where the regularized switch is not saturated."""
    if c.params.kind != "regularized":
        raise WrongKind("transition width is only defined for regularized connectors")
    return c.params.sigma ** 2 / c.domain.length

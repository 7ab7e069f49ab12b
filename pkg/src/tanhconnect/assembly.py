"""Averaging connectors over partition intervals and solving for the combination.

For cuts x_1 < ... < x_N the entry S[n, j] is the mean of connector j over
interval n (column 0 is the constant 1).  The approximant's auxiliary
functions solve S F(x) = psi(x) pointwise, so only the inverse of S is
needed; it is stored alongside the spec as an :class:`AssembledApproximant`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

from .connector import Connector, transition_width
from .errors import ExactificationFailure, SingularMatrix
from .piecewise import PiecewiseSpec, validate
from .quadrature import QuadratureConfig, integrate_or_raise

__all__ = [
    "SMatrix",
    "AuxiliaryCombination",
    "AssembledApproximant",
    "SCoefficient",
    "EXACTIFY_TOL",
    "make_connectors",
    "transition_breakpoints",
    "compute_s_coefficient",
    "build_s_matrix",
    "gauss_inverse",
    "solve_auxiliary",
    "assemble",
]

EXACTIFY_TOL = 1e-6
RESIDUAL_TOL = 1e-13
# Offsets, in units of sigma^2/L, at which extra breakpoints bracket each cut.
_TRANSITION_MULTIPLES = (0.25, 1.0, 4.0, 16.0, 64.0)


@dataclass(frozen=True)
class SMatrix:
    entries: np.ndarray
    raw: np.ndarray | None = None
    """Quadrature values before snapping, kept for diagnostics."""

    @property
    def size(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class AuxiliaryCombination:
    inverse: np.ndarray

    def apply(self, psi_values) -> np.ndarray:
        """Auxiliary function values F = S^-1 psi for a stack of partition values."""
        return self.inverse @ np.asarray(psi_values, dtype=float)


@dataclass(frozen=True)
class AssembledApproximant:
    spec: PiecewiseSpec
    connectors: tuple[Connector, ...]
    smatrix: SMatrix
    aux: AuxiliaryCombination

    def __call__(self, x):
        from .approximant import evaluate
        return evaluate(self, x)

    @property
    def n_cuts(self) -> int:
        return len(self.connectors)


class SCoefficient(NamedTuple):
    value: float
    predicted: float
    error: float


def make_connectors(spec: PiecewiseSpec) -> tuple[Connector, ...]:
    return tuple(Connector(spec.domain, c, spec.connector) for c in spec.cuts)


def transition_breakpoints(spec: PiecewiseSpec) -> list[float]:
    """Cuts plus points bracketing each regularized transition zone."""
    points = set(spec.cuts)
    if spec.connector.kind == "regularized" and spec.cuts:
        w = transition_width(Connector(spec.domain, spec.cuts[0], spec.connector))
        for c in spec.cuts:
            for m in _TRANSITION_MULTIPLES:
                for p in (c - m * w, c + m * w):
                    if spec.domain.x0 < p < spec.domain.xf and p != c:
                        points.add(p)
    return sorted(points)


def compute_s_coefficient(spec: PiecewiseSpec, conns: Sequence[Connector], n: int, j: int,
                          cfg: QuadratureConfig = QuadratureConfig()) -> SCoefficient:
    """Mean of connector ``j`` (1-based; 0 is the constant) over interval ``n``.

    ``predicted`` is the sign of the interval midpoint relative to cut j,
    which the quadrature value must reproduce.
    """
    if not 0 <= n <= len(conns):
        raise IndexError(f"interval index {n} out of range 0..{len(conns)}")
    if not 0 <= j <= len(conns):
        raise IndexError(f"connector index {j} out of range 0..{len(conns)}")
    if j == 0:
        return SCoefficient(1.0, 1.0, 0.0)
    edges = spec.edges
    a, b = edges[n], edges[n + 1]
    conn = conns[j - 1]
    predicted = math.copysign(1.0, 0.5 * (a + b) - conn.x_d)
    local = replace(cfg, saturation_shortcut=True).with_breakpoints(transition_breakpoints(spec))
    res = integrate_or_raise(conn, a, b, local)
    return SCoefficient(res.value / (b - a), predicted, res.error / (b - a))


def build_s_matrix(spec: PiecewiseSpec, conns: Sequence[Connector],
                   cfg: QuadratureConfig = QuadratureConfig()) -> SMatrix:
    """Quadrature-computed S, snapped to the integers it approximates.

    Raises
    ------
    ExactificationFailure
        If any entry is farther than ``EXACTIFY_TOL`` from an integer, or
        snaps to something other than the predicted sign pattern.
    """
    size = len(conns) + 1
    raw = np.ones((size, size))
    exact = np.ones((size, size))
    for n in range(size):
        for j in range(1, size):
            coef = compute_s_coefficient(spec, conns, n, j, cfg)
            raw[n, j] = coef.value
            snapped = round(coef.value)
            if abs(coef.value - snapped) > EXACTIFY_TOL:
                raise ExactificationFailure(
                    f"S[{n},{j}] = {coef.value!r} is not within {EXACTIFY_TOL} of an integer")
            if snapped != coef.predicted:
                raise ExactificationFailure(
                    f"S[{n},{j}] = {coef.value!r} disagrees with predicted sign {coef.predicted}")
            exact[n, j] = snapped
    return SMatrix(exact, raw)


def gauss_inverse(a: np.ndarray) -> np.ndarray:
    """Inverse by Gauss-Jordan elimination with partial pivoting."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"square matrix required, got shape {a.shape}")
    aug = np.hstack([a, np.eye(n)])
    scale = np.max(np.abs(a)) if a.size else 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(aug[k:, k])))
        if abs(aug[p, k]) <= n * np.finfo(float).eps * scale:
            raise SingularMatrix(f"zero pivot in column {k}")
        if p != k:
            aug[[k, p]] = aug[[p, k]]
        aug[k] /= aug[k, k]
        for i in range(n):
            if i != k and aug[i, k] != 0.0:
                aug[i] -= aug[i, k] * aug[k]
    return aug[:, n:]


def solve_auxiliary(s: SMatrix) -> AuxiliaryCombination:
    inv = gauss_inverse(s.entries)
    resid = np.max(np.abs(s.entries @ inv - np.eye(s.size)))
    if resid > RESIDUAL_TOL:
        raise SingularMatrix(f"inverse residual {resid:.3g} exceeds {RESIDUAL_TOL}")
    return AuxiliaryCombination(inv)


def assemble(spec: PiecewiseSpec, cfg: QuadratureConfig = QuadratureConfig()) -> AssembledApproximant:
    """Validate ``spec`` and build everything needed to evaluate the approximant."""
    spec = validate(spec)
    conns = make_connectors(spec)
    smatrix = build_s_matrix(spec, conns, cfg)
    aux = solve_auxiliary(smatrix)
    seed = aux.inverse @ np.ones(smatrix.size)
    if not np.array_equal(seed, np.eye(smatrix.size)[0]):
        raise ExactificationFailure(f"S^-1 applied to ones gives {seed}, not e_0")
    return AssembledApproximant(spec, conns, smatrix, aux)

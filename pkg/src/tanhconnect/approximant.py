"""Evaluating, rescaling, checking and serializing assembled approximants.

Evaluation is coefficient-major: rather than forming the auxiliary
functions F = S^-1 psi and summing F_0 + sum_j F_j chi_j, the interval
weights c = S^-T (1, chi_1, ..., chi_N) are computed first and the result is
sum_n c_n psi_n.  The two are algebraically identical, but a partition whose
weight is exactly zero is never evaluated, so a pole of psi_n outside its
own interval cannot leak into the result.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .assembly import (
    AssembledApproximant,
    AuxiliaryCombination,
    SMatrix,
    RESIDUAL_TOL,
    build_s_matrix,
    make_connectors,
)
from .errors import (
    ArtifactError,
    CorruptMatrix,
    DomainViolation,
    NonFiniteResult,
    NonPositiveScale,
    SchemaVersionMismatch,
)
from .expr import BinOp, Num, Var, substitute
from .piecewise import DomainInterval, PiecewiseSpec, spec_from_dict, spec_to_dict, validate
from .quadrature import QuadratureConfig

__all__ = [
    "SCHEMA_VERSION",
    "weights",
    "evaluate",
    "evaluate_batch",
    "evaluate_fform",
    "auxiliary",
    "BatchResult",
    "scale",
    "ErrorProfile",
    "ErrorSummary",
    "error_profile",
    "save",
    "load",
    "dumps",
    "loads",
]

SCHEMA_VERSION = 1


def _check_domain(a: AssembledApproximant, xv: np.ndarray) -> None:
    d = a.spec.domain
    bad = ~((xv >= d.x0) & (xv <= d.xf))
    if bad.any():
        raise DomainViolation(f"x={xv[bad][0]!r} outside domain [{d.x0}, {d.xf}]")


def _connector_stack(a: AssembledApproximant, xv: np.ndarray) -> np.ndarray:
    stack = np.empty((a.n_cuts + 1, xv.size))
    stack[0] = 1.0
    for j, conn in enumerate(a.connectors, start=1):
        stack[j] = conn(xv)
    return stack


def weights(a: AssembledApproximant, x) -> np.ndarray:
    """Interval weights c(x), shape ``(N+1,)`` for scalar x else ``(N+1, len(x))``."""
    scalar = np.ndim(x) == 0
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    _check_domain(a, xv)
    c = a.aux.inverse.T @ _connector_stack(a, xv)
    return c[:, 0] if scalar else c


class BatchResult(NamedTuple):
    values: np.ndarray
    """Omega at each point; NaN where evaluation failed."""
    failures: tuple[NonFiniteResult, ...]


def _combine(a: AssembledApproximant, xv: np.ndarray):
    c = a.aux.inverse.T @ _connector_stack(a, xv)
    out = np.zeros(xv.size)
    failed = np.zeros(xv.size, dtype=bool)
    failures = []
    for n, psi in enumerate(a.spec.partitions):
        active = c[n] != 0.0
        if not active.any():
            continue
        vals = psi(xv[active])
        out[active] += c[n, active] * vals
        bad = ~np.isfinite(vals)
        if bad.any():
            idx = np.flatnonzero(active)[bad]
            for i, v in zip(idx, vals[bad]):
                failures.append(NonFiniteResult(float(xv[i]), n, float(c[n, i]), float(v)))
            failed[idx] = True
    out[failed] = np.nan
    failures.sort(key=lambda f: f.x)
    return out, tuple(failures)


def evaluate(a: AssembledApproximant, x):
    """Omega at a point or over an array.

    Raises
    ------
    NonFiniteResult
        When a partition with nonzero weight is non-finite at some x.
    DomainViolation
        For x outside the closed domain.
    """
    scalar = np.ndim(x) == 0
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    _check_domain(a, xv)
    out, failures = _combine(a, xv)
    if failures:
        raise failures[0]
    return float(out[0]) if scalar else out


def evaluate_batch(a: AssembledApproximant, xs: Iterable[float]) -> BatchResult:
    """Evaluate over ``xs`` without aborting; failed points come back as NaN."""
    xv = np.asarray(list(xs) if not isinstance(xs, np.ndarray) else xs, dtype=float).ravel()
    if xv.size == 0:
        return BatchResult(np.empty(0), ())
    _check_domain(a, xv)
    return BatchResult(*_combine(a, xv))


def auxiliary(a: AssembledApproximant, x) -> np.ndarray:
    """Auxiliary functions F(x) = S^-1 psi(x); may be non-finite near poles."""
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    psi = np.vstack([p(xv) for p in a.spec.partitions])
    with np.errstate(all="ignore"):
        f = a.aux.inverse @ psi
    return f[:, 0] if np.ndim(x) == 0 else f


def evaluate_fform(a: AssembledApproximant, x):
    """Omega summed as F_0 + sum_j F_j chi_j, without skipping any partition.

    Kept for comparison only: it is non-finite wherever any partition is.
    """
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    _check_domain(a, xv)
    f = auxiliary(a, xv)
    stack = _connector_stack(a, xv)
    with np.errstate(all="ignore"):
        out = np.sum(f * stack, axis=0)
    return float(out[0]) if np.ndim(x) == 0 else out


def scale(a: AssembledApproximant, k: float) -> AssembledApproximant:
    """The same approximant stretched onto ``(k*x0, k*xf)``.

    Cuts and sigma are multiplied by ``k`` and each partition psi(x) becomes
    psi(x/k).  S is unchanged because it depends only on how intervals sit
    relative to the cuts.
    """
    if not (isinstance(k, (int, float)) and math.isfinite(k) and k > 0):
        raise NonPositiveScale(f"scale factor must be finite and positive, got {k!r}")
    if k == 1:
        return a
    spec = a.spec
    var = spec.variable
    shrink = BinOp("/", Var(var), Num(float(k)))
    new_spec = validate(PiecewiseSpec(
        domain=DomainInterval(k * spec.domain.x0, k * spec.domain.xf),
        cuts=tuple(k * c for c in spec.cuts),
        partitions=tuple(substitute(p, shrink) for p in spec.partitions),
        connector=replace(spec.connector, sigma=k * spec.connector.sigma),
    ))
    return AssembledApproximant(new_spec, make_connectors(new_spec), a.smatrix, a.aux)


# -- error profiles ----------------------------------------------------------

@dataclass(frozen=True)
class ErrorSummary:
    max_abs: float
    max_rel: float
    argmax_abs: float
    argmax_rel: float
    counted: int
    excluded: int


@dataclass(frozen=True)
class ErrorProfile:
    """Per-point comparison of Omega with the original piecewise function.

    ``rel_err`` is NaN where |psi| is at or below the floor (absolute error
    only).  Points inside a jump carry both lateral references in
    ``psi_left`` / ``psi_right`` and, like non-finite points and explicitly
    excluded neighbourhoods, are left out of the summary.  "Inside a jump"
    means exactly on a cut, or, for regularized connectors, anywhere that
    cut's connector has not saturated to +-1 (a zone of half-width of order
    sigma^2/L where the reference is double-valued at that resolution).
    """

    x: np.ndarray
    omega: np.ndarray
    psi: np.ndarray
    abs_err: np.ndarray
    rel_err: np.ndarray
    at_cut: np.ndarray
    psi_left: np.ndarray
    psi_right: np.ndarray
    excluded: np.ndarray
    summary: ErrorSummary


def error_profile(a: AssembledApproximant, grid: Sequence[float], rel_floor: float = 1e-12,
                  exclude: Iterable[tuple[float, float]] = (),
                  exclude_radius: float = 0.0) -> ErrorProfile:
    """Sample errors on ``grid``.

    ``exclude`` lists ``(center, radius)`` neighbourhoods to leave out of
    the summary; ``exclude_radius`` does the same around every cut.
    """
    x = np.asarray(grid, dtype=float).ravel()
    spec = a.spec
    omega, _ = evaluate_batch(a, x) if x.size else (np.empty(0), ())
    with np.errstate(all="ignore"):
        psi = spec.reference(x) if x.size else np.empty(0)
        at_cut = np.zeros(x.shape, dtype=bool)
        psi_left = np.full_like(x, np.nan)
        psi_right = np.full_like(x, np.nan)
        for j, (c, conn) in enumerate(zip(spec.cuts, a.connectors), start=1):
            hit = x == c
            if spec.connector.kind == "regularized" and x.size:
                hit |= np.abs(conn(x)) < 1.0
            at_cut |= hit
            if hit.any():
                psi_left[hit] = spec.partitions[j - 1](x[hit])
                psi_right[hit] = spec.partitions[j](x[hit])
        abs_err = np.abs(omega - psi)
        rel_err = np.where(np.abs(psi) > rel_floor, abs_err / np.abs(psi), np.nan)

    excluded = at_cut | ~np.isfinite(psi) | ~np.isfinite(omega)
    if exclude_radius > 0:
        for c in spec.cuts:
            excluded |= np.abs(x - c) <= exclude_radius
    for center, radius in exclude:
        excluded |= np.abs(x - center) <= radius

    keep = ~excluded
    if keep.any():
        ia = np.flatnonzero(keep)[np.argmax(abs_err[keep])]
        max_abs, argmax_abs = float(abs_err[ia]), float(x[ia])
    else:
        max_abs, argmax_abs = 0.0, math.nan
    rel_ok = keep & np.isfinite(rel_err)
    if rel_ok.any():
        ir = np.flatnonzero(rel_ok)[np.argmax(rel_err[rel_ok])]
        max_rel, argmax_rel = float(rel_err[ir]), float(x[ir])
    else:
        max_rel, argmax_rel = 0.0, math.nan
    summary = ErrorSummary(max_abs, max_rel, argmax_abs, argmax_rel,
                           int(keep.sum()), int(excluded.sum()))
    return ErrorProfile(x, omega, psi, abs_err, rel_err, at_cut, psi_left, psi_right,
                        excluded, summary)


# -- artifact documents ------------------------------------------------------

def save(a: AssembledApproximant) -> dict:
    """Artifact document for ``a`` (plain JSON-compatible dict)."""
    doc = {"schema_version": SCHEMA_VERSION}
    doc.update(spec_to_dict(a.spec))
    doc["s_matrix"] = a.smatrix.entries.tolist()
    doc["s_inverse"] = a.aux.inverse.tolist()
    return doc


def dumps(a: AssembledApproximant) -> str:
    # json writes floats with repr, the shortest string that round-trips.
    return json.dumps(save(a), indent=2) + "\n"


def _matrix(doc: dict, key: str, size: int) -> np.ndarray:
    value = doc.get(key)
    try:
        m = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise CorruptMatrix(f"{key} is not a numeric matrix: {exc}") from None
    if m.shape != (size, size):
        raise CorruptMatrix(f"{key} has shape {m.shape}, expected {(size, size)}")
    if not np.all(np.isfinite(m)):
        raise CorruptMatrix(f"{key} has non-finite entries")
    return m


def load(doc: dict, cfg: QuadratureConfig = QuadratureConfig()) -> AssembledApproximant:
    """Rebuild an approximant from :func:`save` output, re-checking everything.

    The spec is revalidated, S is recomputed by quadrature and compared with
    the stored matrix, and the stored inverse must pass the residual check.
    """
    if not isinstance(doc, dict):
        raise ArtifactError("artifact document must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionMismatch(
            f"artifact schema_version {version!r}, this library reads {SCHEMA_VERSION}")
    missing = {"s_matrix", "s_inverse"} - set(doc)
    if missing:
        raise ArtifactError(f"artifact is missing {sorted(missing)}")
    body = {k: v for k, v in doc.items() if k not in ("schema_version", "s_matrix", "s_inverse")}
    spec = spec_from_dict(body)
    size = spec.n_cuts + 1
    s = _matrix(doc, "s_matrix", size)
    inv = _matrix(doc, "s_inverse", size)
    conns = make_connectors(spec)
    fresh = build_s_matrix(spec, conns, cfg)
    if not np.array_equal(fresh.entries, s):
        raise CorruptMatrix("stored s_matrix does not match the recomputed one")
    resid = np.max(np.abs(s @ inv - np.eye(size)))
    if resid > RESIDUAL_TOL:
        raise CorruptMatrix(f"s_inverse residual {resid:.3g} exceeds {RESIDUAL_TOL}")
    return AssembledApproximant(spec, conns, SMatrix(s, fresh.raw), AuxiliaryCombination(inv))


def loads(text: str, cfg: QuadratureConfig = QuadratureConfig()) -> AssembledApproximant:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArtifactError(f"artifact is not valid JSON: {exc}") from None
    return load(doc, cfg)

"""Analytic approximants of piecewise continuous functions built from
hyperbolic-tangent connecting functions placed at each jump."""

from .approximant import (
    error_profile,
    evaluate,
    evaluate_batch,
    load,
    loads,
    dumps,
    save,
    scale,
    weights,
)
from .assembly import AssembledApproximant, assemble
from .connector import Connector, chi_raw, gamma_reg, transition_width
from .expr import Expression, evaluate as evaluate_expression, parse
from .piecewise import ConnectorParams, DomainInterval, PiecewiseSpec, make_spec, validate
from .quadrature import QuadratureConfig, integrate

__version__ = "0.1.0"

__all__ = [
    "AssembledApproximant",
    "Connector",
    "ConnectorParams",
    "DomainInterval",
    "Expression",
    "PiecewiseSpec",
    "QuadratureConfig",
    "assemble",
    "chi_raw",
    "dumps",
    "error_profile",
    "evaluate",
    "evaluate_batch",
    "evaluate_expression",
    "gamma_reg",
    "integrate",
    "load",
    "loads",
    "make_spec",
    "parse",
    "save",
    "scale",
    "transition_width",
    "validate",
    "weights",
]

"""Ready-made problem statements: a shifted sign step, a three-tooth sawtooth,
and a three-piece function whose last partition has a pole inside the middle
interval."""

from __future__ import annotations

from .piecewise import ConnectorParams, PiecewiseSpec, make_spec

__all__ = ["sign_step", "sawtooth", "pole_example", "CATALOG"]

# Constants of the three-piece example: the first partition at x = -0.3 and
# the offset of the last partition, quoted to six decimals.
POLE_EXAMPLE_LEFT = 0.086177
POLE_EXAMPLE_OFFSET = 2.770315


def sign_step(connector: ConnectorParams | None = None) -> PiecewiseSpec:
    """sign(x - 375) on (-1000, 1000)."""
    return make_spec((-1000.0, 1000.0), [375.0], ["-1", "1"], connector)


def sawtooth(connector: ConnectorParams | None = None) -> PiecewiseSpec:
    """x - floor(x) on [0, 3], jumps at 1 and 2."""
    return make_spec((0.0, 3.0), [1.0, 2.0], ["x", "x - 1", "x - 2"], connector)


def pole_example(connector: ConnectorParams | None = None) -> PiecewiseSpec:
    """ln(1+x^2) | oscillating ramp | shifted hyperbola on (-1, 1), jumps at -0.3 and 0.6.

    The last partition has a vertical asymptote at x = 0.5, which lies in the
    middle interval.
    """
    return make_spec(
        (-1.0, 1.0),
        [-0.3, 0.6],
        [
            "ln(1 + x^2)",
            f"{POLE_EXAMPLE_LEFT} * (20 + 20*x + 5*exp(-4*x)*sin(6*pi*x/0.6))",
            f"{POLE_EXAMPLE_OFFSET} + 0.2/(x - 0.5) - 0.5",
        ],
        connector,
    )


CATALOG = {
    "sign": sign_step,
    "sawtooth": sawtooth,
    "example3": pole_example,
}

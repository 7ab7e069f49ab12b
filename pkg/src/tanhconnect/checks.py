"""End-to-end reproductions of the worked examples with pass/fail verdicts.

Each ``check_*`` function builds the example with its reference parameters
and returns a list of :class:`Check` results; the ``demo`` CLI command
prints them.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

from .approximant import auxiliary, error_profile, evaluate
from .assembly import assemble
from .catalog import pole_example, sawtooth, sign_step
from .showcase import (
    REFERENCE_DELTA,
    REFERENCE_OSCILLATOR,
    check_unit_mass,
    delta_approximant,
    force_approximant,
    free_amplitude,
    oscillation_center,
    sift,
    solve_analytic,
    solve_rk4,
)

__all__ = ["Check", "DEMOS", "run_demo"]


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def _grid(spec, n: int = 10_000) -> np.ndarray:
    return np.linspace(spec.domain.x0, spec.domain.xf, n)


def check_sign() -> list[Check]:
    a = assemble(sign_step())
    probes = np.array([375.0 - 1e-9, 375.0 + 1e-9])
    grid = np.union1d(_grid(a.spec), probes)
    prof = error_profile(a, grid)
    s_ok = np.array_equal(a.smatrix.entries, [[1.0, -1.0], [1.0, 1.0]])
    return [
        Check("S matrix", s_ok, f"{a.smatrix.entries.tolist()}"),
        Check("max relative error < 1e-12", prof.summary.max_rel < 1e-12,
              f"{prof.summary.max_rel:.3g} at x={prof.summary.argmax_rel!r}"),
    ]


def check_sawtooth() -> list[Check]:
    a = assemble(sawtooth())
    grid = _grid(a.spec)
    near = np.min(np.abs(grid[:, None] - np.array(a.spec.cuts)[None, :]), axis=1) <= 1e-9
    err = np.abs(evaluate(a, grid) - a.spec.reference(grid))
    worst = float(err[~near].max())
    mids = [evaluate(a, c) for c in a.spec.cuts]
    return [
        Check("absolute error < 1e-12 away from cuts", worst < 1e-12, f"{worst:.3g}"),
        Check("value 0.5 at each cut", all(abs(m - 0.5) <= 1e-12 for m in mids), f"{mids}"),
    ]


def check_example3() -> list[Check]:
    a = assemble(pole_example())
    grid = _grid(a.spec)
    prof = error_profile(a, grid, exclude=[(0.5, 1e-3)])
    i = int(np.argmin(np.abs(grid - 0.5)))
    psi = a.spec.reference(grid[i])
    rel_near = abs(evaluate(a, grid[i]) - psi) / abs(psi)
    at_pole = evaluate(a, 0.5)
    return [
        Check("max relative error <= 1e-12 outside 0.5 +- 1e-3", prof.summary.max_rel <= 1e-12,
              f"{prof.summary.max_rel:.3g}"),
        Check("relative error at grid point nearest 0.5 <= 1e-2", rel_near <= 1e-2,
              f"{rel_near:.3g} at x={float(grid[i])!r}"),
        Check("finite at the pole x=0.5", math.isfinite(at_pole), f"Omega(0.5)={at_pole!r}"),
    ]


def check_delta() -> list[Check]:
    d = REFERENCE_DELTA
    a = delta_approximant(d)
    f = auxiliary(a, d.b)
    expect = np.array([0.0, 1 / (4 * d.h), -1 / (4 * d.h)])
    aux_ok = f[0] == 0.0 and np.allclose(f[1:], expect[1:], rtol=1e-12, atol=0)
    i1, e_i = check_unit_mass(d, approximant=a)
    i2, e2 = sift(d, "sin(x)", approximant=a)
    return [
        Check("auxiliary values (0, 1/(4h), -1/(4h))", bool(aux_ok), f"{f.tolist()}"),
        Check("|I1 - 1| <= 1e-9", abs(e_i) <= 1e-9, f"I1={i1!r} e_I={e_i:.4g}"),
        Check("I2 = 0.3271946968 to 8 digits", abs(i2 - 0.3271946968) < 5e-9, f"I2={i2:.10f}"),
        Check("|e2| <= 1e-8", abs(e2) <= 1e-8, f"e2={e2:.4g}"),
    ]


def check_oscillator() -> list[Check]:
    o = REFERENCE_OSCILLATOR
    a = force_approximant(o)
    rk = solve_rk4(o, 1e-3, approximant=a)
    an = solve_analytic(o, rk.t, approximant=a)
    dx = float(np.max(np.abs(rk.x - an.x)))
    during = oscillation_center(an, o.t1, o.t2, o.period)
    after = oscillation_center(an, o.t2, o.t_domain.xf, o.period)
    amp = free_amplitude(an, o)
    rk2 = solve_rk4(o, 5e-4, approximant=a)
    an2 = solve_analytic(o, rk2.t, approximant=a)
    ratio = dx / float(np.max(np.abs(rk2.x - an2.x)))
    return [
        Check("RK4 vs analytic max |dx| <= 1e-5 (dt=1e-3)", dx <= 1e-5, f"{dx:.3g}"),
        Check("center during forcing = 1 +- 1e-3", abs(during - 1) <= 1e-3, f"{during:.6f}"),
        Check("center after forcing = 0 +- 1e-3", abs(after) <= 1e-3, f"{after:.6f}"),
        Check("post-force amplitude = 1.744 +- 0.01", abs(amp - 1.744) <= 0.01, f"{amp:.4f}"),
        Check("RK4 halving ratio in [8, 32]", 8 <= ratio <= 32, f"{ratio:.2f}"),
    ]


DEMOS: dict[str, Callable[[], list[Check]]] = {
    "sign": check_sign,
    "sawtooth": check_sawtooth,
    "example3": check_example3,
    "delta": check_delta,
    "oscillator": check_oscillator,
}


def run_demo(name: str) -> list[Check]:
    return DEMOS[name]()

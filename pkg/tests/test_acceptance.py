"""Acceptance gate: one PASS/FAIL line per criterion, at the required tolerances.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly as ``python3 tests/test_acceptance.py``.
"""

import io
import math
from contextlib import redirect_stdout

import numpy as np

from tanhconnect.approximant import auxiliary, error_profile, evaluate, scale, weights
from tanhconnect.assembly import assemble, build_s_matrix, compute_s_coefficient, make_connectors
from tanhconnect.catalog import pole_example, sawtooth, sign_step
from tanhconnect.cli import main as cli_main
from tanhconnect.connector import Connector, transition_width
from tanhconnect.piecewise import ConnectorParams, DomainInterval, make_spec, spec_to_dict
from tanhconnect.showcase import (
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

RESULTS: list[str] = []


def _report(number, title, checks):
    """Record one line for the criterion and fail with every broken sub-check."""
    ok = all(passed for _, passed in checks)
    details = "; ".join(f"{text}{'' if passed else ' [FAIL]'}" for text, passed in checks)
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number} ({title}): {details}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _grid(spec, n=10_000):
    return np.linspace(spec.domain.x0, spec.domain.xf, n)


def test_criterion_1_sign_step():
    a = assemble(sign_step())
    grid = np.union1d(_grid(a.spec), [375.0 - 1e-9, 375.0 + 1e-9])
    prof = error_profile(a, grid)
    _report(1, "sign step", [
        (f"max rel err {prof.summary.max_rel:.3g} < 1e-12", prof.summary.max_rel < 1e-12),
        ("S == [[1,-1],[1,1]]", np.array_equal(a.smatrix.entries, [[1, -1], [1, 1]])),
    ])


def test_criterion_2_sawtooth():
    a = assemble(sawtooth())
    xs = np.random.default_rng(2).uniform(0, 3, 100)
    f = auxiliary(a, xs)
    expected = np.vstack([xs - 1, np.full_like(xs, -0.5), np.full_like(xs, -0.5)])
    aux_err = float(np.max(np.abs(f - expected)))
    grid = _grid(a.spec)
    near = np.min(np.abs(grid[:, None] - np.array(a.spec.cuts)), axis=1) <= 1e-9
    abs_err = float(np.max(np.abs(evaluate(a, grid) - a.spec.reference(grid))[~near]))
    mids = [evaluate(a, c) for c in a.spec.cuts]
    mid_err = max(abs(m - 0.5) for m in mids)
    _report(2, "sawtooth", [
        (f"auxiliary err {aux_err:.3g} <= 1e-13", aux_err <= 1e-13),
        (f"grid abs err {abs_err:.3g} < 1e-12", abs_err < 1e-12),
        (f"cut value err {mid_err:.3g} <= 1e-12", mid_err <= 1e-12),
    ])


def test_criterion_3_pole_example():
    a = assemble(pole_example())
    grid = _grid(a.spec)
    prof = error_profile(a, grid, exclude=[(0.5, 1e-3)])
    i = int(np.argmin(np.abs(grid - 0.5)))
    psi = a.spec.reference(grid[i])
    rel_near = abs(evaluate(a, grid[i]) - psi) / abs(psi)
    at_pole = evaluate(a, 0.5)
    _report(3, "pole example", [
        (f"max rel err {prof.summary.max_rel:.3g} <= 1e-12", prof.summary.max_rel <= 1e-12),
        (f"rel err nearest 0.5 {rel_near:.3g} <= 1e-2", rel_near <= 1e-2),
        (f"Omega(0.5) = {at_pole:.6g} finite", math.isfinite(at_pole)),
    ])


def test_criterion_4_delta():
    d = REFERENCE_DELTA
    a = delta_approximant(d)
    _, e_i = check_unit_mass(d, approximant=a)
    i2, e2 = sift(d, "sin(x)", approximant=a)
    f = auxiliary(a, d.b)
    q = 1 / (4 * d.h)
    aux_rel = max(abs(f[1] - q) / q, abs(f[2] + q) / q)
    _report(4, "delta", [
        (f"|I1 - 1| = {abs(e_i):.4g} <= 1e-9", abs(e_i) <= 1e-9),
        (f"I2 = {i2:.10f} matches 0.3271946968", abs(i2 - 0.3271946968) < 5e-9),
        (f"|e2| = {abs(e2):.4g} <= 1e-8", abs(e2) <= 1e-8),
        (f"auxiliary rel err {aux_rel:.3g} <= 1e-12, F0 = {f[0]}", aux_rel <= 1e-12 and f[0] == 0),
    ])


def test_criterion_5_oscillator():
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
    _report(5, "oscillator", [
        (f"max |dx| {dx:.3g} <= 1e-5", dx <= 1e-5),
        (f"center during {during:.6f} = 1 +- 1e-3", abs(during - 1) <= 1e-3),
        (f"center after {after:.2e} = 0 +- 1e-3", abs(after) <= 1e-3),
        (f"amplitude {amp:.4f} = 1.744 +- 0.01", abs(amp - 1.744) <= 0.01),
        (f"halving ratio {ratio:.2f} in [8, 32]", 8 <= ratio <= 32),
    ])


def _sign_pattern_holds(rng, n_sets=20):
    for _ in range(n_sets):
        n = int(rng.integers(1, 7))
        cuts = np.sort(rng.uniform(-0.9, 0.9, n))
        if np.min(np.diff(np.concatenate([[-1], cuts, [1]]))) < 1e-3:
            continue
        spec = make_spec((-1, 1), cuts, ["1"] * (n + 1))
        conns = make_connectors(spec)
        s = build_s_matrix(spec, conns)
        mids = np.array(spec.midpoints)
        pattern = np.hstack([np.ones((n + 1, 1)), np.sign(mids[:, None] - cuts[None, :])])
        if not np.array_equal(s.entries, pattern):
            return False
        for i in range(n + 1):
            for j in range(1, n + 1):
                c = compute_s_coefficient(spec, conns, i, j)
                if abs(c.value - c.predicted) > 1e-6:
                    return False
    return True


def test_criterion_6_properties():
    examples = [assemble(make()) for make in (sign_step, sawtooth, pole_example)]
    pou = max(float(np.max(np.abs(weights(a, np.union1d(_grid(a.spec), a.spec.cuts)).sum(axis=0) - 1)))
              for a in examples)

    pattern_ok = _sign_pattern_holds(np.random.default_rng(6))

    scale_err = 0.0
    for a in examples:
        xs = _grid(a.spec, 2001)
        saturated = np.all([np.abs(c(xs)) == 1.0 for c in a.connectors], axis=0)
        for k in (0.1, 2.0, 1000.0):
            diff = np.abs(evaluate(scale(a, k), k * xs) - evaluate(a, xs))[saturated]
            scale_err = max(scale_err, float(diff.max()))

    dom = DomainInterval(-1.0, 1.0)
    g = Connector(dom, 0.2, ConnectorParams("regularized", 1e-3))
    w = transition_width(g)
    at_cut = g(0.2)
    one_width = g(0.2 + w)

    xs = np.linspace(-1, 1, 20_001)
    recovery = 0.0
    for sigma in (1e-6, 1e-8):
        reg = Connector(dom, 0.2, ConnectorParams("regularized", sigma))
        raw = Connector(dom, 0.2, ConnectorParams("raw", sigma, 2))
        away = np.abs(xs - 0.2) > 100 * transition_width(reg)
        recovery = max(recovery, float(np.max(np.abs(reg(xs[away]) - raw(xs[away])))))

    step = assemble(make_spec((-1, 1), [0.2], ["-1", "1"], ConnectorParams(sigma=1e-3)))
    zone = np.linspace(0.2 - 50 * w, 0.2 + 50 * w, 5001)
    monotone = bool(np.all(np.diff(evaluate(step, zone)) >= 0))

    _report(6, "properties", [
        (f"partition of unity err {pou:.3g} <= 1e-15", pou <= 1e-15),
        ("random S sign patterns (N <= 6)", pattern_ok),
        (f"scale invariance err {scale_err:.3g} <= 1e-14", scale_err <= 1e-14),
        (f"Gamma(x_d) = {at_cut}", at_cut == 0.0),
        (f"Gamma(x_d + w) = {one_width:.4f} ~ tanh(1)",
         abs(one_width - math.tanh(1)) <= 0.02 * math.tanh(1)),
        (f"sigma -> 0 recovery err {recovery:.3g} <= 1e-12", recovery <= 1e-12),
        ("monotone step transition", monotone),
    ])


def test_criterion_7_figure_data(tmp_path):
    import json

    rows_ok = True
    for make in (sign_step, sawtooth, pole_example):
        path = tmp_path / f"{make.__name__}.json"
        path.write_text(json.dumps(spec_to_dict(make())))
        out = tmp_path / f"{make.__name__}.csv"
        code = cli_main(["sample", "--in", str(path), "--points", "1001", "--out", str(out)])
        lines = out.read_text().splitlines()
        values = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
        rows_ok &= code == 0 and lines[0] == "x,omega" and values.shape == (1001, 2) \
            and bool(np.all(np.isfinite(values)))
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main(["oscillator", "--dt", "0.01", "--method", "both",
                         "--out", str(tmp_path / "osc.csv")])
    _report(7, "figure data", [
        ("sample emits finite x,omega tables for each example", rows_ok),
        ("oscillator emits trajectory table", code == 0),
    ])


if __name__ == "__main__":
    import sys
    import tempfile
    from pathlib import Path

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                if "tmp_path" in fn.__code__.co_varnames[:fn.__code__.co_argcount]:
                    with tempfile.TemporaryDirectory() as d:
                        fn(Path(d))
                else:
                    fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)

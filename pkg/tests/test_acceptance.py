"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete.  The width sweep used by criteria 4 and 5 runs one
time and is shared.
"""

import math
import time
from decimal import Decimal, getcontext

import numpy as np
import pytest

from certirelu.bounds import SmoothnessCertificate, derived_constants
from certirelu.experiments import SweepConfig, certify_rho, emit_report, run_sweep
from certirelu.fitting import FitProblem, fit_least_squares
from certirelu.fourier import multiplier
from certirelu.network import ShallowReluNetwork, stack_parameters
from certirelu.policy_eval import (
    consistency_report,
    linear_benchmark,
    pde_residual,
    simulate_value,
    tanh_scalar_example,
)
from certirelu.sampling import derived_rng, sample_pairs, uniform_density

REFERENCE_CERT = SmoothnessCertificate(n=1, k=4, rho=2.0, R=1.0, p_min=0.25)


def _report(num: int, name: str, ok: bool, detail: str = "") -> None:
    print(f"ACCEPTANCE {num:02d} {name}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


@pytest.fixture(scope="module")
def full_sweep():
    config = SweepConfig()  # paper_vmod, m 16..4096, 10 seeds, delta 0.1
    t0 = time.perf_counter()
    rows = run_sweep(config)
    elapsed = time.perf_counter() - t0
    return config, rows, elapsed


def random_network(rng, n, m, coeff_scale=1.0):
    if n == 1:
        alphas = (2.0 * rng.integers(0, 2, size=m).astype(float) - 1.0).reshape(m, 1)
    else:
        alphas = rng.standard_normal((m, n))
        alphas /= np.linalg.norm(alphas, axis=1, keepdims=True)
    return ShallowReluNetwork(
        a=rng.standard_normal(n),
        b=float(rng.standard_normal()),
        alphas=alphas,
        ts=rng.uniform(-1.0, 1.0, size=m),
        coeffs=coeff_scale * rng.uniform(-1.0, 1.0, size=m),
    )


def test_criterion_01_rho_certification():
    t0 = time.perf_counter()
    base = certify_rho("paper_vmod", k=4)
    halved = certify_rho("paper_vmod", k=4, quad_step=base.quad_step / 2.0)
    elapsed = time.perf_counter() - t0
    drift = abs(halved.estimate.rho_hat - base.estimate.rho_hat) / base.estimate.rho_hat
    ok = base.estimate.rho_hat <= 2.0 and drift <= 0.05 and elapsed <= 30.0
    _report(
        1,
        "rho certification",
        ok,
        f"rho_hat={base.estimate.rho_hat:.6f} (<= 2.0), halving drift={drift:.2e}, "
        f"elapsed={elapsed:.1f}s",
    )


def _uniform_sum_cdf(s: float, n: int = 5) -> float:
    if s <= 0:
        return 0.0
    if s >= n:
        return 1.0
    total = 0.0
    for k in range(int(math.floor(s)) + 1):
        total += (-1) ** k * math.comb(n, k) * (s - k) ** n
    return total / math.factorial(n)


def _bump_oracle(x: float) -> float:
    cdf = lambda y: _uniform_sum_cdf(5.0 * y + 2.5)
    return cdf(x + 1.5) - cdf(x - 1.5)


def test_criterion_02_multiplier_reproduction():
    t0 = time.perf_counter()
    inner_grid = np.linspace(-1.0, 1.0, 401)
    plateau_dev = float(np.max(np.abs(multiplier(inner_grid) - 1.0)))
    outer_grid = np.concatenate([np.linspace(-3.0, -2.05, 60), np.linspace(2.05, 3.0, 60)])
    outer_dev = float(np.max(np.abs(multiplier(outer_grid))))
    full_grid = np.linspace(-3.0, 3.0, 481)
    oracle = np.array([_bump_oracle(float(x)) for x in full_grid])
    oracle_dev = float(np.max(np.abs(multiplier(full_grid) - oracle)))
    elapsed = time.perf_counter() - t0
    ok = plateau_dev <= 1e-3 and outer_dev <= 1e-3 and oracle_dev <= 1e-3 and elapsed <= 10.0
    _report(
        2,
        "multiplier reproduction",
        ok,
        f"plateau dev={plateau_dev:.2e}, tail dev={outer_dev:.2e}, "
        f"oracle dev={oracle_dev:.2e}, elapsed={elapsed:.1f}s",
    )


def test_criterion_03_constant_formula_fidelity():
    t0 = time.perf_counter()
    getcontext().prec = 50
    pi = Decimal("3.14159265358979323846264338327950288419716939937511")
    rho, R, p_min = Decimal(2), Decimal(1), Decimal("0.25")
    A = Decimal(2)
    expected = {
        "beta": 16 * pi**2 * rho * R / p_min + (4 + 8 * pi * R) * A * rho,
        "L": 8 * pi**2 * rho / p_min + 8 * pi * A * rho,
        "zeta0": 64 * pi**2 * 2 * rho / p_min,
        "zeta1": 8 * Decimal(2).sqrt() * pi**2 * rho / p_min,
        "kappa1": 4 * (16 * pi**2 * rho * R / p_min + (4 + 8 * pi * R) * A * rho),
        "kappa2": Decimal(2).sqrt()
        * (16 * pi**2 * rho * R / p_min + (4 + 8 * pi * R) * A * rho),
        "a_cap": 4 * pi * A * rho,
        "b_cap": (2 + 4 * pi * R) * A * rho,
    }
    report = derived_constants(REFERENCE_CERT)
    worst = 0.0
    for name, want in expected.items():
        got = Decimal(repr(getattr(report, name)))
        worst = max(worst, float(abs(got - want) / abs(want)))
    c_cap = Decimal(repr(report.c_cap(100)))
    c_want = 8 * pi**2 * rho / (100 * p_min)
    worst = max(worst, float(abs(c_cap - c_want) / c_want))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 1.0
    _report(
        3,
        "constant formula fidelity",
        ok,
        f"worst relative gap={worst:.2e} (12 significant digits), elapsed={elapsed:.2f}s",
    )


def test_criterion_04_bound_dominance(full_sweep):
    config, rows, elapsed = full_sweep
    good = [r for r in rows if not r.failed]
    dominance = all(r.err_f <= r.rhs_f and r.err_g2 <= r.rhs_g2 for r in good)
    min_gap_f = min(r.rhs_f / r.err_f for r in good)
    min_gap_g = min(r.rhs_g2 / r.err_g2 for r in good)
    ok = (
        len(good) == len(rows)
        and dominance
        and min_gap_f >= 10.0
        and min_gap_g >= 10.0
        and elapsed <= 600.0
    )
    _report(
        4,
        "bound dominance",
        ok,
        f"rows={len(rows)} failed={len(rows) - len(good)}, min f-gap={min_gap_f:.3g}x, "
        f"min g-gap={min_gap_g:.3g}x, sweep elapsed={elapsed:.0f}s",
    )


def test_criterion_05_decay_rate(full_sweep):
    config, rows, _ = full_sweep
    ms = sorted({r.m for r in rows if not r.failed})
    med_f = [float(np.median([r.err_f for r in rows if r.m == m])) for m in ms]
    slope = float(np.polyfit(np.log(ms), np.log(med_f), 1)[0])
    g64 = float(np.median([r.err_g2 for r in rows if r.m == 64]))
    g4096 = float(np.median([r.err_g2 for r in rows if r.m == 4096]))
    ok = slope <= -0.3 and g4096 <= 0.5 * g64
    _report(
        5,
        "decay rate",
        ok,
        f"slope={slope:.3f} (<= -0.3), err_g2(4096)/err_g2(64)={g4096 / g64:.3f} (<= 0.5)",
    )


def test_criterion_06_gradient_check_suite():
    rng = np.random.default_rng(2024)
    h = 1e-6
    checked_nets = 0
    worst = 0.0
    for n in (1, 2, 5):
        for m in (1, 10, 100):
            for _ in range(12):
                net = random_network(rng, n, m)
                points = 0
                while points < 20:
                    x = rng.uniform(-1.0, 1.0, size=n)
                    if net.min_kink_distance(x) <= 1e-3:
                        continue
                    g = net.gradient(x)
                    fd = np.zeros(n)
                    for k in range(n):
                        e = np.zeros(n)
                        e[k] = h
                        fd[k] = (net.value(x + e) - net.value(x - e)) / (2.0 * h)
                    rel = float(np.max(np.abs(fd - g)) / max(1.0, np.max(np.abs(g))))
                    worst = max(worst, rel)
                    points += 1
                checked_nets += 1
    ok = checked_nets >= 100 and worst <= 1e-6
    _report(
        6,
        "gradient check suite",
        ok,
        f"networks={checked_nets}, worst relative gap={worst:.2e} (<= 1e-6)",
    )


def test_criterion_07_realizable_target_recovery():
    rng = derived_rng(77)
    samples = sample_pairs(uniform_density(2, 1.0), 20, rng)
    generator = ShallowReluNetwork.from_samples(
        samples,
        a=rng.standard_normal(2),
        b=float(rng.standard_normal()),
        coeffs=rng.uniform(-1.0, 1.0, size=20),
    )
    points = rng.uniform(-1.0, 1.0, size=(10 * (20 + 2 + 1), 2))
    problem = FitProblem(samples=samples, points=points, targets=generator.value_batch(points))
    fitted = fit_least_squares(problem)
    sup = float(np.max(np.abs(fitted.value_batch(points) - generator.value_batch(points))))
    ok = sup <= 1e-8
    _report(7, "realizable target recovery", ok, f"sup training error={sup:.2e} (<= 1e-8)")


def test_criterion_08_policy_evaluation_diagnostics():
    lin_problem, lin_model = linear_benchmark()
    worst_lin = max(
        abs(pde_residual(lin_problem, lin_model, [x])) for x in np.linspace(-1, 1, 101)
    )
    sim = simulate_value(lin_problem, [1.0], step=1e-4, horizon=40.0, stop_radius=1e-7)
    sim_gap = abs(sim.value - 0.5)

    problem, model = tanh_scalar_example()
    res_02 = pde_residual(problem, model, [0.2])
    res_1 = pde_residual(problem, model, [1.0])
    _, consistent = consistency_report(problem, model, [0.2, 1.0], step=1e-3, horizon=60.0)
    values_match = (
        abs(res_02 - (-0.27001282919298696)) <= 1e-10
        and abs(res_1 - 9.0791615471903342e-05) <= 1e-12
    )
    ok = worst_lin <= 1e-12 and sim_gap <= 1e-5 and values_match and not consistent
    _report(
        8,
        "policy evaluation diagnostics",
        ok,
        f"linear residual={worst_lin:.2e} (<= 1e-12), |sim - 1/2|={sim_gap:.2e} (<= 1e-5), "
        f"residual(0.2)={res_02:.6f}, residual(1)={res_1:.3e}, flagged={not consistent}",
    )


def test_criterion_09_stacking_identity():
    rng = np.random.default_rng(99)
    worst = 0.0
    pairs = 0
    for _ in range(100):
        n = int(rng.integers(1, 4))
        m = int(rng.integers(0, 30))
        net = random_network(rng, n, m) if m else ShallowReluNetwork.affine(
            rng.standard_normal(n), float(rng.standard_normal())
        )
        stacked = stack_parameters(net)
        for _ in range(100):
            x = rng.uniform(-1.0, 1.0, size=n)
            worst = max(worst, abs(stacked.predict(x) - net.value(x)))
            pairs += 1
    ok = pairs == 10_000 and worst <= 1e-12
    _report(9, "stacking identity", ok, f"pairs={pairs}, worst gap={worst:.2e} (<= 1e-12)")


def test_criterion_10_sweep_determinism(tmp_path):
    outputs = []
    for sub in ("first", "second"):
        config = SweepConfig(
            m_list=(16, 64), seeds=(0, 1), out_dir=str(tmp_path / sub)
        )
        emit_report(run_sweep(config), config.out_dir, config)
        outputs.append((tmp_path / sub / "sweep.csv").read_bytes())
    ok = outputs[0] == outputs[1] and len(outputs[0]) > 0
    _report(10, "sweep determinism", ok, f"sweep.csv bytes={len(outputs[0])}, identical={ok}")

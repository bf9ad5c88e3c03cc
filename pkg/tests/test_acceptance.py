"""Acceptance battery: nine headline guarantees, one verdict line each.

Each test measures its quantity from scratch, appends a single
"criterion N PASS/FAIL: ..." line to the session log (echoed after the
run), and then asserts. Tolerances are pinned in the assertions.
"""

import math
import subprocess
import sys
import time

import numpy as np

from feller_kit import (
    InversionConfig,
    build_entry,
    c0_verdict,
    inversion_apply,
    inversion_convergence_sweep,
    make_heat_kernel,
    make_non_feller_drift,
    make_probes,
    make_two_state,
    resolvent_apply_quadrature,
    resolvent_identity_residual,
    run_battery,
    semigroup_apply,
    sup_norm,
)
from feller_kit.operators import Generator, OperatorFamily
from feller_kit.state_model import StateSpace

# --- frozen reference implementations (kept independent of the package) ---


def gaussian_widened(x, t, sigma=1.0):
    """Heat evolution of exp(-x^2 / (2 sigma^2)) on the line."""
    v = sigma * sigma + t
    return sigma / math.sqrt(v) * np.exp(-(x * x) / (2.0 * v))


def heat_resolvent_gaussian(x, lam, sigma=1.0):
    """R_lam applied to exp(-x^2/(2 sigma^2)) for the unit-diffusion heat
    semigroup: convolution with e^{-a|x-y|}/a at a = sqrt(2 lam), in
    closed form through the normal CDF."""
    a = math.sqrt(2.0 * lam)

    def phi(z):
        return 0.5 * math.erfc(-z / math.sqrt(2.0))

    out = np.empty_like(x)
    root = sigma * math.sqrt(2.0 * math.pi)
    for i, xi in enumerate(x):
        left = math.exp(-a * xi + 0.5 * a * a * sigma * sigma) * phi(
            (xi - a * sigma * sigma) / sigma
        )
        right = math.exp(a * xi + 0.5 * a * a * sigma * sigma) * (
            1.0 - phi((xi + a * sigma * sigma) / sigma)
        )
        out[i] = root * (left + right) / a
    return out


def seeded_probes(n, count=20, seed=2026):
    """Random probes with sup-norm exactly 1."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        f = rng.standard_normal(n)
        out.append(f / np.max(np.abs(f)))
    return out


def record(log, number, ok, detail):
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {detail}"
    log.append(line)
    print(line)
    return line


def test_criterion_1_resolvent_identity(acceptance_log):
    fam = build_entry("birth-death").family
    probes = seeded_probes(fam.space.n)
    grid = (0.5, 1.0, 2.0, 8.0)
    start = time.perf_counter()
    worst = 0.0
    for lam in grid:
        for mu in grid:
            for f in probes:
                worst = max(worst, resolvent_identity_residual(fam, lam, mu, f))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 2.0
    line = record(
        acceptance_log, 1, ok,
        f"max identity residual {worst:.3e} <= 1e-10 over 16 pairs x 20 "
        f"probes, birth-death n=50 ({elapsed:.2f}s < 2s)",
    )
    assert ok, line


def test_criterion_2_uniform_bound_sweep(acceptance_log):
    lambdas = (0.5, 1.0, 2.0, 4.0, 8.0)
    ts = (1e-3, 1e-2, 0.1, 1.0)
    start = time.perf_counter()
    violations = 0
    cases = 0
    worst_excess = -math.inf
    for name in ("birth-death", "two-state"):
        fam = build_entry(name).family
        F = np.column_stack(seeded_probes(fam.space.n))
        norms = np.max(np.abs(F), axis=0)
        for lam in lambdas:
            R = fam.resolvent_exact_block(lam, F)
            for t in ts:
                moved = fam.apply_semigroup(t, R)
                lhs = np.max(np.abs(moved - R), axis=0)
                bound = (2.0 / lam) * -np.expm1(-lam * t) * norms
                excess = lhs - bound - 1e-12 * norms
                violations += int(np.count_nonzero(excess > 0))
                cases += excess.size
                worst_excess = max(worst_excess, float(excess.max()))
    elapsed = time.perf_counter() - start
    ok = violations == 0 and elapsed < 2.0
    line = record(
        acceptance_log, 2, ok,
        f"{violations}/{cases} bound violations beyond 1e-12 slack "
        f"(worst excess {worst_excess:.3e}) over two processes "
        f"({elapsed:.2f}s < 2s)",
    )
    assert ok, line


def test_criterion_3_series_closed_form(acceptance_log):
    space = StateSpace.chain(3)
    fam = OperatorFamily(space, generator=Generator(space, np.zeros((3, 3))))
    f = np.array([1.0, -0.5, 0.25])
    res = inversion_apply(
        fam, InversionConfig(lam=2.0, t=0.5, term_tol=1e-12), f
    )
    target = (1.0 - math.exp(-math.e)) * f
    rel = float(np.max(np.abs(res.value.values - target)) / np.max(np.abs(target)))
    ok = rel <= 1e-6
    line = record(
        acceptance_log, 3, ok,
        f"series value within {rel:.3e} <= 1e-6 relative of "
        f"(1-exp(-e)) f = 0.93401... f (compensated, {res.terms_used} terms)",
    )
    assert ok, line


def test_criterion_4_reconstruction_convergence(acceptance_log):
    fam = make_two_state().family
    f = np.array([1.0, 0.0])
    rows = inversion_convergence_sweep(fam, 0.25, f, (1.0, 2.0, 4.0, 8.0, 16.0))
    errs = [r.sup_error for r in rows]
    decreasing = all(a > b for a, b in zip(errs, errs[1:]))
    res0 = inversion_apply(fam, InversionConfig(lam=64.0, t=0.0), f)
    err0 = float(np.max(np.abs(res0.value.values - f)))
    ok = decreasing and errs[-1] <= 2e-2 and err0 <= 2e-2
    line = record(
        acceptance_log, 4, ok,
        f"sup-errors strictly decreasing {errs[0]:.3f} -> {errs[-1]:.4f} "
        f"<= 2e-2 along lam=1..16; at t=0, lam=64 error {err0:.1e} <= 2e-2",
    )
    assert ok, line


def test_criterion_5_yosida_defect(acceptance_log):
    fam = make_two_state().family
    f = np.array([1.0, 0.0])
    defects = []
    worst_gap = 0.0
    for lam in (1.0, 4.0, 16.0, 64.0, 256.0):
        r = fam.resolvent_exact_block(lam, f)
        defect = sup_norm(lam * r - f)
        defects.append(defect)
        worst_gap = max(worst_gap, abs(defect - 1.0 / (lam + 2.0)))
    decreasing = all(a > b for a, b in zip(defects, defects[1:]))
    final = defects[-1]
    ok = worst_gap <= 1e-12 and decreasing and abs(final - 3.876e-3) < 5e-7
    line = record(
        acceptance_log, 5, ok,
        f"||lam R f - f|| matches 1/(lam+2) within {worst_gap:.2e} <= 1e-12; "
        f"decreasing along lam=1..256, final {final:.4e} ~ 3.876e-3",
    )
    assert ok, line


def test_criterion_6_verdict_unanimity(acceptance_log):
    expect = {
        "two-state": True,
        "birth-death": True,
        "killed-chain": True,
        "heat-kernel": True,
        "non-feller-drift": False,
    }
    thm = ("thm_a", "thm_b", "thm_c", "thm_d", "thm_e", "thm_f")
    splits = []
    wrong = []
    for name, expected in expect.items():
        rep = run_battery(build_entry(name))
        verdicts = [rep.check(c).passed for c in thm]
        if not rep.equivalence_consistent:
            splits.append(name)
        if any(v != expected for v in verdicts):
            wrong.append(name)
    ok = not splits and not wrong
    line = record(
        acceptance_log, 6, ok,
        "six bundled verdicts unanimous on all five entries; four regular, "
        "drift uniformly rejected"
        + (f" (splits: {splits}, wrong: {wrong})" if not ok else ""),
    )
    assert ok, line


def test_criterion_7_negative_detection(acceptance_log):
    t = 0.5  # ten coarse steps

    def step_probe(space):
        return dict(make_probes(space))["smoothed-step"]

    def continuity_defect(entry, probe):
        out = semigroup_apply(entry.family, t, probe)
        return c0_verdict(out, 1e-3, math.inf, space=entry.family.space).continuity_defect

    coarse = make_non_feller_drift(L=10.0, h=0.05)
    xs = coarse.family.space.coordinates
    fp = step_probe(coarse.family.space)
    i0 = int(np.searchsorted(xs, 0.0))
    it = int(np.searchsorted(xs, t))
    jump = abs(fp[it] - fp[i0])
    drift_defects = []
    for h in (0.05, 0.025):
        entry = make_non_feller_drift(L=10.0, h=h)
        drift_defects.append(continuity_defect(entry, step_probe(entry.family.space)))
    heat_defects = []
    for h in (0.05, 0.025):
        entry = make_heat_kernel(L=10.0, h=h)
        heat_defects.append(continuity_defect(entry, step_probe(entry.family.space)))

    drift_holds = all(d >= 0.4 * jump for d in drift_defects)
    drift_sticky = drift_defects[1] >= drift_defects[0] - 1e-3
    heat_ratio = heat_defects[0] / heat_defects[1]
    ok = drift_holds and drift_sticky and heat_ratio >= 2.0
    line = record(
        acceptance_log, 7, ok,
        f"drift tear persists under h -> h/2: defects "
        f"{drift_defects[0]:.4f}, {drift_defects[1]:.4f} >= 0.4*jump "
        f"{0.4 * jump:.4f}; heat defect shrinks {heat_ratio:.6f}x >= 2x",
    )
    assert ok, line


def test_criterion_8_heat_oracles(acceptance_log):
    entry = make_heat_kernel(L=10.0, h=0.05)
    fam = entry.family
    x = fam.space.coordinates
    interior = fam.space.interior_slice()
    f = np.exp(-(x * x) / 2.0)

    moved = semigroup_apply(fam, 0.5, f).values
    err_u = float(np.max(np.abs(moved - gaussian_widened(x, 0.5))[interior]))

    res = resolvent_apply_quadrature(fam, 2.0, f)
    err_r = float(
        np.max(np.abs(res.value.values - heat_resolvent_gaussian(x, 2.0))[interior])
    )
    ok = err_u <= 5e-3 and err_r <= 5e-3
    line = record(
        acceptance_log, 8, ok,
        f"U_0.5 vs widened gaussian {err_u:.2e} <= 5e-3 interior; "
        f"quadrature R_2 vs closed form {err_r:.2e} <= 5e-3 interior",
    )
    assert ok, line


def test_criterion_9_deterministic_reports(acceptance_log):
    cmd = [
        sys.executable, "-m", "feller_kit.cli",
        "check", "--process", "birth-death",
    ]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    ok = (
        a.returncode == 0
        and b.returncode == 0
        and len(a.stdout) > 0
        and a.stdout == b.stdout
    )
    line = record(
        acceptance_log, 9, ok,
        f"two identical check runs emit byte-identical JSON "
        f"({len(a.stdout)} bytes)",
    )
    assert ok, line

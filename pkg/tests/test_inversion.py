import math

import mpmath
import numpy as np
import pytest

from feller_kit import (
    CancellationError,
    Generator,
    GridFunction,
    InversionConfig,
    OperatorFamily,
    StateSpace,
    inversion_apply,
    inversion_convergence_sweep,
    make_non_feller_drift,
    make_two_state,
)

# --- frozen reference implementations (kept independent of the package) ---


def two_state_semigroup(t):
    """Closed form for the symmetric flip chain: eigenvalues 0 and -2."""
    p = 0.5 * (1.0 + math.exp(-2.0 * t))
    q = 1.0 - p
    return np.array([[p, q], [q, p]])


def series_limit_zero_generator():
    """High-precision limit of the alternating series when R_lam = I/lam.

    Every term collapses to (-1)^(n+1) e^(n lam t) / n!, so the series
    sums to 1 - exp(-exp(lam t)); at lam t = 1 that is 1 - exp(-e).
    """
    with mpmath.workdps(40):
        return float(1 - mpmath.exp(-mpmath.e))


def zero_generator_family(n=3):
    space = StateSpace.chain(n)
    return OperatorFamily(space, generator=Generator(space, np.zeros((n, n))))


class TestConfigValidation:
    def test_defaults(self):
        cfg = InversionConfig(lam=2.0, t=0.5)
        assert cfg.max_terms == 400
        assert cfg.term_tol == 1e-12
        assert cfg.summation == "compensated"
        assert cfg.lt_cap == 4.0

    def test_rejects_bad_lambda(self):
        with pytest.raises(ValueError):
            InversionConfig(lam=0.0, t=0.5)
        with pytest.raises(ValueError):
            InversionConfig(lam=-1.0, t=0.5)
        with pytest.raises(ValueError):
            InversionConfig(lam=math.inf, t=0.5)

    def test_rejects_negative_time(self):
        with pytest.raises(ValueError):
            InversionConfig(lam=1.0, t=-0.1)

    def test_rejects_bad_controls(self):
        with pytest.raises(ValueError):
            InversionConfig(lam=1.0, t=0.1, max_terms=0)
        with pytest.raises(ValueError):
            InversionConfig(lam=1.0, t=0.1, term_tol=0.0)
        with pytest.raises(ValueError):
            InversionConfig(lam=1.0, t=0.1, summation="kahan")
        with pytest.raises(ValueError):
            InversionConfig(lam=1.0, t=0.1, lt_cap=0.0)

    def test_rejects_growth_beyond_cap(self):
        # lam*t = 8 with the default cap of 4
        with pytest.raises(ValueError):
            InversionConfig(lam=32.0, t=0.25)
        # raising the cap admits the same product
        cfg = InversionConfig(lam=32.0, t=0.25, lt_cap=8.5)
        assert cfg.lam == 32.0

    def test_config_required(self):
        fam = make_two_state().family
        with pytest.raises(TypeError):
            inversion_apply(fam, {"lam": 1.0, "t": 0.1}, np.array([1.0, 0.0]))


class TestTimeZero:
    def test_returns_probe_unchanged(self):
        fam = make_two_state().family
        f = GridFunction(fam.space, np.array([0.3, -0.7]))
        res = inversion_apply(fam, InversionConfig(lam=4.0, t=0.0), f)
        assert res.value is f
        assert res.terms_used == 0
        assert res.cancellation_magnitude == 0.0
        assert res.tail_bound == (math.e - 1.0) * 0.7

    def test_array_probe_is_wrapped(self):
        fam = make_two_state().family
        res = inversion_apply(fam, InversionConfig(lam=4.0, t=0.0), [1.0, 0.0])
        assert isinstance(res.value, GridFunction)
        np.testing.assert_array_equal(res.value.values, [1.0, 0.0])


class TestZeroGeneratorClosedForm:
    # With Q = 0 the resolvent is I/lam and the series limit is known in
    # closed form, so the whole pipeline is testable to near machine
    # precision.

    def test_compensated_matches_closed_form(self):
        fam = zero_generator_family()
        f = np.array([1.0, -0.5, 0.25])
        res = inversion_apply(fam, InversionConfig(lam=2.0, t=0.5), f)
        limit = series_limit_zero_generator()
        assert limit == pytest.approx(0.9340119641546875, abs=1e-16)
        np.testing.assert_allclose(res.value.values, limit * f, rtol=1e-12)
        assert res.terms_used == 25
        assert res.tail_bound < 1e-12

    def test_plain_matches_closed_form(self):
        fam = zero_generator_family()
        f = np.array([1.0, -0.5, 0.25])
        cfg = InversionConfig(lam=2.0, t=0.5, summation="plain")
        res = inversion_apply(fam, cfg, f)
        limit = series_limit_zero_generator()
        np.testing.assert_allclose(res.value.values, limit * f, rtol=1e-12)

    def test_cancellation_magnitude_reports_peak_term(self):
        # growth = e, peak term e^3/3! ~ 3.35 relative to ||f|| = 1
        fam = zero_generator_family()
        f = np.array([1.0, -0.5, 0.25])
        res = inversion_apply(fam, InversionConfig(lam=2.0, t=0.5), f)
        assert 3.0 < res.cancellation_magnitude < 4.5


class TestTwoStateRegression:
    LAMBDAS = (1.0, 2.0, 4.0, 8.0, 16.0)
    ERRORS = (0.35728145, 0.250612248, 0.105791296, 0.0290124434, 0.0176674193)
    TERMS = (19, 21, 25, 41, 173)

    def sweep(self, **kw):
        fam = make_two_state().family
        return inversion_convergence_sweep(
            fam, 0.25, np.array([1.0, 0.0]), self.LAMBDAS, **kw
        )

    def test_errors_pinned(self):
        rows = self.sweep()
        np.testing.assert_allclose(
            [r.sup_error for r in rows], self.ERRORS, atol=1e-6
        )

    def test_errors_strictly_decreasing(self):
        rows = self.sweep()
        errs = [r.sup_error for r in rows]
        assert all(a > b for a, b in zip(errs, errs[1:]))
        assert errs[-1] <= 2e-2

    def test_terms_used_pinned(self):
        rows = self.sweep()
        assert [r.terms_used for r in rows] == list(self.TERMS)

    def test_cancellation_grows_to_twenty_two_digits(self):
        rows = self.sweep()
        assert 1e22 < rows[-1].cancellation_magnitude < 1e23

    def test_rows_sorted_by_lambda(self):
        fam = make_two_state().family
        shuffled = (8.0, 1.0, 16.0, 2.0, 4.0)
        rows = inversion_convergence_sweep(
            fam, 0.25, np.array([1.0, 0.0]), shuffled
        )
        assert [r.lam for r in rows] == sorted(shuffled)

    def test_sup_error_against_independent_reference(self):
        fam = make_two_state().family
        f = np.array([1.0, 0.0])
        rows = self.sweep()
        res = inversion_apply(fam, InversionConfig(lam=4.0, t=0.25), f)
        oracle = two_state_semigroup(0.25) @ f
        err = float(np.max(np.abs(res.value.values - oracle)))
        assert err == pytest.approx(rows[2].sup_error, abs=1e-13)


class TestTailBound:
    def test_truncation_error_within_reported_tail(self):
        fam = make_two_state().family
        f = np.array([1.0, 0.0])
        short = inversion_apply(
            fam, InversionConfig(lam=4.0, t=0.25, max_terms=12), f
        )
        full = inversion_apply(fam, InversionConfig(lam=4.0, t=0.25), f)
        assert short.terms_used == 12
        diff = float(np.max(np.abs(short.value.values - full.value.values)))
        assert diff <= short.tail_bound
        assert full.tail_bound < short.tail_bound


class TestSummationPaths:
    def test_plain_agrees_when_cancellation_is_mild(self):
        fam = make_two_state().family
        f = np.array([1.0, 0.0])
        rp = inversion_apply(
            fam, InversionConfig(lam=8.0, t=0.25, summation="plain"), f
        )
        rc = inversion_apply(fam, InversionConfig(lam=8.0, t=0.25), f)
        assert np.max(np.abs(rp.value.values - rc.value.values)) < 1e-10


class TestGuards:
    def test_plain_refuses_catastrophic_cancellation(self):
        # peak term ~ 2.8e22 at lam=16, far beyond the float64 budget
        fam = make_two_state().family
        cfg = InversionConfig(lam=16.0, t=0.25, summation="plain")
        with pytest.raises(CancellationError, match="cancellation budget"):
            inversion_apply(fam, cfg, np.array([1.0, 0.0]))

    def test_compensated_refuses_overflowing_peak(self):
        # lam*t = 12 makes the peak term overflow float64 entirely; the
        # guard must saturate and refuse rather than raise OverflowError
        fam = make_two_state().family
        cfg = InversionConfig(lam=48.0, t=0.25, lt_cap=12.1)
        with pytest.raises(CancellationError, match="cancellation budget"):
            inversion_apply(fam, cfg, np.array([1.0, 0.0]))

    def test_wrong_space_probe_rejected(self):
        fam = make_two_state().family
        other = GridFunction(StateSpace.chain(3), np.zeros(3))
        with pytest.raises(ValueError):
            inversion_apply(fam, InversionConfig(lam=1.0, t=0.1), other)


class TestKernelBacking:
    # The drift kernel carries an exact closed-form resolvent, so it
    # exercises the kernel branch of the series cheaply.

    def test_sweep_converges_on_drift(self):
        entry = make_non_feller_drift()
        x = entry.family.space.coordinates
        g = GridFunction(
            entry.family.space, np.exp(-((x - 2.0) ** 2) / (2.0 * 0.5**2))
        )
        rows = inversion_convergence_sweep(
            entry.family, 0.25, g, (2.0, 4.0, 8.0)
        )
        np.testing.assert_allclose(
            [r.sup_error for r in rows],
            [0.499506, 0.242741, 0.0887366],
            rtol=1e-4,
        )
        assert [r.terms_used for r in rows] == [21, 25, 41]

    def test_apply_returns_grid_function_on_same_space(self):
        entry = make_non_feller_drift()
        x = entry.family.space.coordinates
        g = GridFunction(
            entry.family.space, np.exp(-((x - 2.0) ** 2) / (2.0 * 0.5**2))
        )
        res = inversion_apply(entry.family, InversionConfig(lam=8.0, t=0.25), g)
        assert isinstance(res.value, GridFunction)
        assert res.value.space == entry.family.space
        assert res.terms_used == 41

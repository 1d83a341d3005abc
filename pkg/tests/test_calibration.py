"""Parameter specs, SSE objective, simplex search, synthetic data."""

import numpy as np
import pytest
from conftest import ORACLE_LOGNORMAL_MAD_005

from seiar import (
    FitConfig,
    FreeValue,
    ObservedSeries,
    ParameterSpec,
    control_reproduction_number,
    fit,
    sse_objective,
    synthesize_data,
)
from seiar.calibrate import INTEGRATION_FAILURE_PENALTY
from seiar.errors import FitError
from seiar.presets import VARIANT_614G
from seiar.simulate import IntegratorConfig


def fixed_spec(params, initial):
    return ParameterSpec(params=params.as_dict(), initial=initial)


def recovery_spec(truth, e1=1000.0):
    entries = truth.as_dict()
    entries["beta"] = FreeValue(lo=truth.beta / 4, hi=truth.beta * 4,
                                guess=truth.beta * 1.6)
    entries["epsilon"] = FreeValue(lo=0.05, hi=1.0, guess=0.25)
    entries["rho"] = FreeValue(lo=0.05, hi=0.95, guess=0.30)
    return ParameterSpec(params=entries,
                         initial={"S": truth.S0 - e1, "E1": e1})


@pytest.fixture
def truth():
    return VARIANT_614G


@pytest.fixture
def seeded_initial(truth):
    return np.array([truth.S0 - 1000.0, 1000.0, 0.0, 0.0, 0.0, 0.0, 0.0])


class TestFreeValue:
    def test_rejects_inverted_bounds(self):
        with pytest.raises(ValueError, match="lo < hi"):
            FreeValue(lo=2.0, hi=1.0, guess=1.5)

    def test_rejects_guess_outside_bounds(self):
        with pytest.raises(ValueError, match="outside"):
            FreeValue(lo=0.0, hi=1.0, guess=2.0)


class TestParameterSpec:
    def test_rejects_unknown_parameter(self, truth):
        entries = truth.as_dict()
        entries["betta"] = 1.0
        with pytest.raises(ValueError, match="unknown parameter"):
            ParameterSpec(params=entries)

    def test_rejects_missing_parameter(self, truth):
        entries = truth.as_dict()
        del entries["gamma2"]
        with pytest.raises(ValueError, match="missing"):
            ParameterSpec(params=entries)

    def test_rejects_negative_initial(self, truth):
        with pytest.raises(ValueError, match="nonnegative"):
            ParameterSpec(params=truth.as_dict(), initial={"E1": -5.0})

    def test_rejects_invalid_fixed_value(self, truth):
        entries = truth.as_dict()
        entries["rho"] = 1.4
        with pytest.raises(ValueError, match="rho"):
            ParameterSpec(params=entries)

    def test_free_names_canonical_and_order_independent(self, truth):
        entries_a = truth.as_dict()
        entries_a["rho"] = FreeValue(0.0, 1.0, 0.4)
        entries_a["beta"] = FreeValue(1e-10, 1e-7, 5e-9)
        entries_b = dict(reversed(list(entries_a.items())))
        spec_a = ParameterSpec(params=entries_a, initial={"E1": FreeValue(0, 1e6, 10)})
        spec_b = ParameterSpec(params=entries_b, initial={"E1": FreeValue(0, 1e6, 10)})
        assert spec_a.free_names == ("beta", "rho", "E1(0)")
        assert spec_b.free_names == spec_a.free_names

    def test_susceptible_pool_derived_from_seeds(self, truth):
        spec = ParameterSpec(params=truth.as_dict(),
                             initial={"E1": 300.0, "A": 200.0})
        _, y0 = spec.assemble([])
        assert y0[0] == truth.S0 - 500.0
        assert y0.sum() == pytest.approx(truth.S0, rel=1e-15)

    def test_explicit_susceptible_respected(self, truth):
        spec = ParameterSpec(params=truth.as_dict(),
                             initial={"S": 1234.5, "E1": 10.0})
        _, y0 = spec.assemble([])
        assert y0[0] == 1234.5

    def test_overdrawn_seeds_rejected(self, truth):
        # caught eagerly: construction assembles the guesses once to validate
        with pytest.raises(ValueError, match="exceed"):
            ParameterSpec(params=truth.as_dict(), initial={"E1": 2.0 * truth.S0})


class TestObservedSeries:
    def test_rejects_negative_counts(self):
        with pytest.raises(ValueError, match="nonnegative"):
            ObservedSeries(counts=np.array([1.0, -2.0]))

    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="nonempty"):
            ObservedSeries(counts=np.array([]))


class TestSseObjective:
    def test_zero_against_own_output(self, truth, seeded_initial):
        spec = fixed_spec(truth, {"S": truth.S0 - 1000.0, "E1": 1000.0})
        data = synthesize_data(truth, seeded_initial, days=30)
        assert sse_objective([], spec, data) == 0.0

    def test_unit_residuals_sum_to_day_count(self, truth, seeded_initial):
        spec = fixed_spec(truth, {"S": truth.S0 - 1000.0, "E1": 1000.0})
        clean = synthesize_data(truth, seeded_initial, days=30)
        shifted = ObservedSeries(counts=clean.counts + 1.0)
        assert sse_objective([], spec, shifted) == 30.0

    def test_truth_beats_perturbed_beta_on_noisy_data(self, truth, seeded_initial):
        spec = recovery_spec(truth)
        data = synthesize_data(truth, seeded_initial, days=60,
                               noise="lognormal", sigma=0.05, seed=7)
        at_truth = sse_objective([truth.beta, truth.epsilon, truth.rho], spec, data)
        at_doubled = sse_objective([2 * truth.beta, truth.epsilon, truth.rho],
                                   spec, data)
        assert at_truth < at_doubled

    def test_objective_invariant_to_free_listing_order(self, truth, seeded_initial):
        data = synthesize_data(truth, seeded_initial, days=20,
                               noise="lognormal", sigma=0.1, seed=1)
        entries = truth.as_dict()
        entries["beta"] = FreeValue(1e-10, 1e-7, truth.beta)
        entries["rho"] = FreeValue(0.0, 1.0, truth.rho)
        initial = {"S": truth.S0 - 1000.0, "E1": 1000.0}
        forward = ParameterSpec(params=dict(entries), initial=initial)
        backward = ParameterSpec(params=dict(reversed(list(entries.items()))),
                                 initial=initial)
        values = [truth.beta, truth.rho]
        assert sse_objective(values, forward, data) \
            == sse_objective(values, backward, data)

    def test_integration_failure_maps_to_penalty(self, truth, seeded_initial):
        spec = fixed_spec(truth, {"S": truth.S0 - 1000.0, "E1": 1000.0})
        data = synthesize_data(truth, seeded_initial, days=30)
        starving = IntegratorConfig(t0=0.0, t_end=30.0, sample_per_day=1,
                                    max_steps=5)
        assert sse_objective([], spec, data, starving) == INTEGRATION_FAILURE_PENALTY


class TestFit:
    def test_all_fixed_degenerates_to_evaluation(self, truth, seeded_initial):
        spec = fixed_spec(truth, {"S": truth.S0 - 1000.0, "E1": 1000.0})
        data = synthesize_data(truth, seeded_initial, days=25)
        result = fit(spec, data)
        assert result.iterations == 0
        assert result.objective == 0.0
        assert result.params == truth
        assert result.converged

    def test_synthetic_recovery_identifies_rc(self, truth, seeded_initial):
        data = synthesize_data(truth, seeded_initial, days=60,
                               noise="lognormal", sigma=0.05, seed=0)
        result = fit(recovery_spec(truth), data,
                     FitConfig(restarts=2, max_evals=300, seed=0))
        rc_true = control_reproduction_number(truth)
        assert abs(result.r_c - rc_true) / rc_true < 0.05
        assert result.objective <= result.history[0]

    def test_history_nonincreasing(self, truth, seeded_initial):
        data = synthesize_data(truth, seeded_initial, days=40,
                               noise="lognormal", sigma=0.05, seed=2)
        result = fit(recovery_spec(truth), data,
                     FitConfig(restarts=1, max_evals=150, seed=2))
        assert np.all(np.diff(result.history) <= 0.0)

    def test_bitwise_deterministic(self, truth, seeded_initial):
        data = synthesize_data(truth, seeded_initial, days=30,
                               noise="lognormal", sigma=0.05, seed=5)
        config = FitConfig(restarts=2, max_evals=120, seed=5)
        a = fit(recovery_spec(truth), data, config)
        b = fit(recovery_spec(truth), data, config)
        assert np.array_equal(a.free_values, b.free_values)
        assert a.objective == b.objective
        assert np.array_equal(a.history, b.history)
        assert a.params == b.params

    def test_fitted_values_respect_bounds(self, truth, seeded_initial):
        data = synthesize_data(truth, seeded_initial, days=30,
                               noise="lognormal", sigma=0.1, seed=9)
        spec = recovery_spec(truth)
        result = fit(spec, data, FitConfig(restarts=1, max_evals=100, seed=9))
        lo, hi = spec.bounds()
        assert np.all(result.free_values >= lo)
        assert np.all(result.free_values <= hi)

    def test_unintegrable_fixed_configuration_raises(self, truth, seeded_initial):
        spec = fixed_spec(truth, {"S": truth.S0 - 1000.0, "E1": 1000.0})
        data = synthesize_data(truth, seeded_initial, days=30)
        starving = FitConfig(integrator=IntegratorConfig(
            t0=0.0, t_end=30.0, sample_per_day=1, max_steps=5))
        with pytest.raises(FitError, match="integrate"):
            fit(spec, data, starving)


class TestSynthesizeData:
    def test_noiseless_equals_model_incidence(self, truth, seeded_initial):
        from seiar.simulate import daily_incidence, integrate
        days = 20
        cfg = IntegratorConfig(t0=0.0, t_end=float(days), sample_per_day=1)
        expected = daily_incidence(integrate(truth, seeded_initial, cfg)).values
        data = synthesize_data(truth, seeded_initial, days=days)
        assert np.array_equal(data.counts, expected)

    def test_same_seed_reproduces(self, truth, seeded_initial):
        a = synthesize_data(truth, seeded_initial, days=15, noise="lognormal",
                            sigma=0.05, seed=11)
        b = synthesize_data(truth, seeded_initial, days=15, noise="lognormal",
                            sigma=0.05, seed=11)
        assert np.array_equal(a.counts, b.counts)

    def test_lognormal_mean_relative_deviation(self, truth, seeded_initial):
        clean = synthesize_data(truth, seeded_initial, days=365)
        noisy = synthesize_data(truth, seeded_initial, days=365,
                                noise="lognormal", sigma=0.05, seed=4)
        deviation = np.abs(noisy.counts - clean.counts) / clean.counts
        # E|exp(0.05 Z) - 1| = 0.0399...; allow a few standard errors
        assert deviation.mean() == pytest.approx(ORACLE_LOGNORMAL_MAD_005, abs=0.006)

    def test_rounding_noise_yields_integers(self, truth, seeded_initial):
        data = synthesize_data(truth, seeded_initial, days=15, noise="round")
        assert np.array_equal(data.counts, np.rint(data.counts))

    def test_unknown_noise_rejected(self, truth, seeded_initial):
        with pytest.raises(ValueError, match="noise"):
            synthesize_data(truth, seeded_initial, days=5, noise="poisson")

"""Tests for the finite-sample worst-risk bounds."""

from __future__ import annotations

import math

import numpy as np
import pytest

from causal_reg.bounds import (
    BoundInputs,
    bound_core,
    eta,
    normalized_excess_risk,
    phi,
    predicted_excess_risk,
    sample_risk_bound,
    worst_risk_bound,
)
from causal_reg.config import AppConfig
from causal_reg.errors import InvalidInput
from causal_reg.estimation import compute_moments, empirical_risk, fit, risk_diff_hat, risk_sum_hat
from causal_reg.experiments.context import RunContext
from causal_reg.experiments.drivers import Convergence, convergence_slope
from causal_reg.population import compute_population, population_worst_risk
from causal_reg.sem import NoiseSpec, SemStructure, ShiftSpec, sample_sem


def _unit_inputs(p: int, n: float) -> BoundInputs:
    return BoundInputs(p=p, n_e=n, n_o=n, var_y_e=1.0, var_y_o=1.0, max_var_x_e=1.0, max_var_x_o=1.0)


class TestPhi:
    def test_log_term_vanishes_at_p_one(self):
        assert phi(1, 4, q=1.0) == pytest.approx(2.0)

    def test_benchmark_dimension(self):
        assert phi(6, 1000, q=1.0) == pytest.approx(0.1537, abs=5e-5)

    def test_linear_in_variances(self):
        base = phi(6, 500, 1.0, 1.5, 2.0)
        assert phi(6, 500, 1.0, 3.0, 2.0) == pytest.approx(2.0 * base)
        assert phi(6, 500, 1.0, 1.5, 4.0) == pytest.approx(2.0 * base)

    def test_infinite_n(self):
        assert phi(6, math.inf) == 0.0

    def test_monotone(self):
        ns = [10, 100, 1000, 10_000, 100_000]
        values = [phi(6, n) for n in ns]
        assert all(b < a for a, b in zip(values, values[1:]))
        assert phi(6, 100, q=2.0) > phi(6, 100, q=1.0)
        assert phi(7, 100) > phi(6, 100)

    def test_root_n_scaling_flattens(self):
        scaled = [phi(6, n) * math.sqrt(n) for n in (1e3, 1e4, 1e5)]
        assert all(b <= a for a, b in zip(scaled, scaled[1:]))
        assert scaled[-1] == pytest.approx(math.sqrt(4.0 + 8.0 * math.log(6)), rel=0.02)

    @pytest.mark.parametrize("args", [(0, 10), (2, 0.5), (2, 10, 0.0), (2, 10, 1.0, -1.0)])
    def test_rejects(self, args):
        with pytest.raises(InvalidInput):
            phi(*args)


class TestBoundInputs:
    def test_phi_plus_sums_environments(self):
        inputs = BoundInputs(p=3, n_e=100, n_o=400, var_y_e=2.0, var_y_o=1.0, max_var_x_e=1.0, max_var_x_o=3.0)
        assert inputs.phi_plus == pytest.approx(phi(3, 100, 1.0, 2.0, 1.0) + phi(3, 400, 1.0, 1.0, 3.0))
        assert predicted_excess_risk(inputs) == inputs.phi_plus

    def test_from_population_empty_graph(self):
        pq = compute_population(SemStructure(beta_pa=[0.0], beta_ch=[0.0], b_x=[[0.0]]))
        inputs = BoundInputs.from_population(pq, 100, 100)
        assert (inputs.var_y_e, inputs.var_y_o) == (1.0, 1.0)
        assert (inputs.max_var_x_e, inputs.max_var_x_o) == (2.0, 1.0)
        assert not inputs.plug_in

    def test_from_pair_uses_sample_variances(self, random_pair):
        pair = random_pair(0)
        inputs = BoundInputs.from_pair(pair, q=2.0)
        assert inputs.plug_in
        assert inputs.q == 2.0
        assert (inputs.n_e, inputs.n_o) == pair.sizes
        assert inputs.var_y_o == pytest.approx(np.var(pair.obs.y, ddof=1))
        assert inputs.max_var_x_e == pytest.approx(np.max(np.var(pair.shifted.x, axis=0, ddof=1)))


class TestBounds:
    def test_zero_model_reduces_to_phi_plus(self):
        inputs = _unit_inputs(4, 1000)
        assert worst_risk_bound(inputs, np.zeros(4), 0.0, 0.0, 0.0) == pytest.approx(inputs.phi_plus)

    def test_core(self):
        assert bound_core(4.0, -1.0, 1.0) == pytest.approx(2.0 + 1.5)

    def test_increasing_in_tau(self):
        inputs = _unit_inputs(4, 1000)
        beta = np.ones(4)
        values = [worst_risk_bound(inputs, beta, 3.0, 0.2, tau) for tau in (0.0, 1.0, 2.0, 4.0)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_eta(self):
        inputs = _unit_inputs(2, 100)
        assert eta(inputs, [1.0, -2.0], 1.0) == pytest.approx(2.0 * 10.0 * inputs.phi_plus)

    def test_infinite_new_sample_matches_population_bound(self):
        inputs = _unit_inputs(4, 1000)
        beta = np.array([0.5, -0.5, 1.0, 0.0])
        population = worst_risk_bound(inputs, beta, 2.0, 0.3, 5.0)
        assert sample_risk_bound(inputs, beta, 2.0, 0.3, 5.0, math.inf) == pytest.approx(population)

    def test_equal_sizes_give_three_phi(self):
        n = 1000
        inputs = _unit_inputs(6, n)
        beta = np.array([1.0, 0, 0, 0, 0, 0])
        slack = sample_risk_bound(inputs, beta, 0.0, 0.0, 0.0, n)
        assert slack == pytest.approx(2.0 * 3.0 * phi(6, n))

    def test_new_sample_variances_override(self):
        inputs = _unit_inputs(3, 1000)
        default = sample_risk_bound(inputs, np.zeros(3), 0.0, 0.0, 0.0, 500)
        larger = sample_risk_bound(inputs, np.zeros(3), 0.0, 0.0, 0.0, 500, var_y_new=2.0)
        assert larger - default == pytest.approx(phi(3, 500))

    def test_negative_tau(self):
        with pytest.raises(InvalidInput):
            eta(_unit_inputs(2, 10), [0.0, 0.0], -0.5)


class TestNormalizedExcessRisk:
    def test_exact_match_is_zero(self):
        assert normalized_excess_risk([1.0, 2.0], 5.0, 5.0, 3.0) == 0.0

    def test_zero_model_denominator(self):
        assert normalized_excess_risk([0.0, 0.0], 7.0, 3.0, 1.0) == pytest.approx(2.0)

    def test_l1_factor(self):
        assert normalized_excess_risk([1.0, -1.0], 6.0, 1.0, 0.0) == pytest.approx(1.0)


@pytest.mark.slow
class TestBoundsHold:
    def test_population_bound_frequency(self, benchmark_pq, benchmark_sample):
        tau = 10.0
        held = 0
        for rep in range(50):
            pair = benchmark_sample(1000, seed=500 + rep)
            beta = fit(compute_moments(pair), 0.2).coef
            bound = worst_risk_bound(
                BoundInputs.from_pair(pair), beta, risk_sum_hat(pair, beta), risk_diff_hat(pair, beta), tau,
            )
            held += bound >= population_worst_risk(benchmark_pq, beta, tau)
        assert held >= 48

    def test_sample_bound_against_fresh_shifted_data(self, benchmark, benchmark_sample):
        tau, n = 10.0, 10_000
        noise = NoiseSpec.identity(6)
        worst_shift = ShiftSpec.identity(6, 1.0 + tau)
        held = 0
        for rep in range(20):
            pair = benchmark_sample(n, seed=700 + rep)
            beta = fit(compute_moments(pair), 0.2).coef
            bound = sample_risk_bound(
                BoundInputs.from_pair(pair), beta, risk_sum_hat(pair, beta), risk_diff_hat(pair, beta), tau, n,
            )
            fresh = sample_sem(benchmark, noise, worst_shift, n, seed=900 + rep)
            held += bound >= empirical_risk(fresh, beta)
        assert held >= 19

    def test_convergence_slope(self):
        config = AppConfig.model_validate({
            "seed": 5,
            "threads": 4,
            "experiment": {
                "name": "convergence",
                "replications": 20,
                "sample_sizes": [100, 1000, 10_000, 100_000],
                "lam": 0.2,
                "tau": 10.0,
            },
        })
        table = Convergence().run(RunContext.from_config(config))
        assert -0.65 <= convergence_slope(table) <= -0.35

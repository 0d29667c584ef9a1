"""
Stacked intelligent metasurface cascade, gradient and configuration.
"""

import math

import numpy as np
import pytest

from src.core.exceptions import DegenerateChannelError, DimensionError
from src.physics.geometry import make_planar_array
from src.synthesis.sim import SimStack, make_sim_stack, sim_composite, sim_configure, sim_gradient, sim_objective
from tests.helpers import complex_normal, random_contraction

LAM = 0.01


def _random_stack(rng, elements=4, feeds=2, layers=3) -> SimStack:
    return SimStack(
        feed_coupling=random_contraction(rng, elements, feeds),
        couplings=tuple(random_contraction(rng, elements, elements) for _ in range(layers - 1)),
    )


def _random_phases(rng, stack):
    return [np.exp(1j * rng.uniform(-np.pi, np.pi, stack.element_count)) for _ in range(stack.layer_count)]


# ═══════════════════════════════════════════════════════════════
# CASCADE
# ═══════════════════════════════════════════════════════════════

class TestSimStack:

    def test_counts(self, rng):
        stack = _random_stack(rng, elements=5, feeds=3, layers=4)
        assert (stack.layer_count, stack.element_count, stack.feed_count) == (4, 5, 3)

    def test_mismatched_coupling_rejected(self, rng):
        with pytest.raises(DimensionError):
            SimStack(feed_coupling=complex_normal(rng, 4, 2), couplings=(complex_normal(rng, 3, 4),))

    def test_single_layer_composite(self, rng):
        stack = _random_stack(rng, layers=1)
        theta = np.exp(1j * rng.uniform(-np.pi, np.pi, 4))
        np.testing.assert_allclose(sim_composite(stack, [theta]), np.diag(theta) @ stack.feed_coupling)

    def test_composite_matches_explicit_product(self, rng):
        stack = _random_stack(rng, layers=3)
        thetas = _random_phases(rng, stack)
        expected = np.diag(thetas[0]) @ stack.feed_coupling
        for w, theta in zip(stack.couplings, thetas[1:]):
            expected = np.diag(theta) @ w @ expected
        np.testing.assert_allclose(sim_composite(stack, thetas), expected, atol=1e-14)

    def test_wrong_phase_count_rejected(self, rng):
        stack = _random_stack(rng, layers=2)
        with pytest.raises(DimensionError):
            sim_composite(stack, [np.ones(4)])

    def test_physical_stack_is_passive(self, carrier):
        layers = [make_planar_array(3, 3, LAM / 2, center=(-d, 0.0, 0.0)) for d in (LAM, 0.5 * LAM, 0.0)]
        feed = make_planar_array(1, 2, LAM / 2, center=(-6 * LAM, 0.0, 0.0))
        stack = make_sim_stack(layers, feed, carrier)
        assert stack.layer_count == 3
        assert np.linalg.svd(stack.feed_coupling, compute_uv=False)[0] <= 1.0 + 1e-12
        for w in stack.couplings:
            np.testing.assert_allclose(w @ w.conj().T, np.eye(9), atol=1e-12)

    def test_physical_gain_stays_below_fully_connected_bound(self, carrier, rng):
        layers = [make_planar_array(3, 3, LAM / 2, center=(-d, 0.0, 0.0)) for d in (LAM, 0.5 * LAM, 0.0)]
        stack = make_sim_stack(layers, make_planar_array(1, 2, LAM / 2, center=(-6 * LAM, 0.0, 0.0)), carrier)
        h = complex_normal(rng, 9)
        bound = np.linalg.norm(h) * np.linalg.svd(stack.feed_coupling, compute_uv=False)[0]
        assert sim_configure(stack, h, budget=100, restarts=2).gain <= bound + 1e-9

    def test_empty_stack_rejected(self, carrier):
        with pytest.raises(DimensionError):
            make_sim_stack([], make_planar_array(1, 1, LAM), carrier)


# ═══════════════════════════════════════════════════════════════
# GRADIENT
# ═══════════════════════════════════════════════════════════════

class TestSimGradient:

    @pytest.mark.parametrize("layers", [1, 2, 3])
    def test_matches_central_differences(self, rng, layers):
        stack = _random_stack(rng, elements=4, feeds=2, layers=layers)
        h = complex_normal(rng, 4)
        phis = [rng.uniform(-np.pi, np.pi, 4) for _ in range(layers)]
        analytic = np.concatenate(sim_gradient(stack, [np.exp(1j * p) for p in phis], h))

        step = 1e-6
        numeric = []
        for l in range(layers):
            for i in range(4):
                plus = [p.copy() for p in phis]
                minus = [p.copy() for p in phis]
                plus[l][i] += step
                minus[l][i] -= step
                numeric.append(
                    (
                        sim_objective(stack, [np.exp(1j * p) for p in plus], h)
                        - sim_objective(stack, [np.exp(1j * p) for p in minus], h)
                    )
                    / (2 * step)
                )
        numeric = np.array(numeric)
        assert np.linalg.norm(analytic - numeric) < 1e-5 * np.linalg.norm(numeric)

    def test_wrong_channel_length_rejected(self, rng):
        stack = _random_stack(rng)
        with pytest.raises(DimensionError):
            sim_gradient(stack, _random_phases(rng, stack), np.ones(3))


# ═══════════════════════════════════════════════════════════════
# CONFIGURATION
# ═══════════════════════════════════════════════════════════════

class TestSimConfigure:

    def test_single_layer_aligns_phase_only_target(self, rng):
        m = 6
        h = np.exp(1j * rng.uniform(-np.pi, np.pi, m))
        stack = SimStack(feed_coupling=np.ones((m, 1)) / math.sqrt(m))
        solution = sim_configure(stack, h, budget=500, restarts=1)
        assert solution.gain == pytest.approx(np.linalg.norm(h), abs=1e-6)

    def test_history_is_non_decreasing(self, rng):
        stack = _random_stack(rng, elements=5, feeds=2, layers=3)
        solution = sim_configure(stack, complex_normal(rng, 5), budget=60, restarts=3, rng_seed=4)
        history = np.array(solution.history)
        assert history.size > 1
        assert np.all(np.diff(history) > 0.0)

    def test_history_starts_from_the_all_zero_phase_start(self, rng):
        stack = _random_stack(rng, elements=5, feeds=2, layers=3)
        h = complex_normal(rng, 5)
        solution = sim_configure(stack, h, budget=60, restarts=1)
        ones = [np.ones(5, dtype=complex) for _ in range(3)]
        assert solution.history[0] == pytest.approx(sim_objective(stack, ones, h), rel=1e-12)
        assert solution.history[-1] > solution.history[0]

    def test_phases_stay_on_unit_circle(self, rng):
        stack = _random_stack(rng, layers=2)
        solution = sim_configure(stack, complex_normal(rng, 4), budget=40, restarts=2)
        assert len(solution.analog_config.phases) == 2
        assert solution.analog_config.satisfies_constraints()
        assert solution.is_feasible()

    def test_gain_is_realized_and_bounded(self, rng):
        stack = _random_stack(rng, layers=2)
        h = complex_normal(rng, 4)
        solution = sim_configure(stack, h, budget=60, restarts=2)
        composite = sim_composite(stack, solution.analog_config.phases)
        assert solution.gain == pytest.approx(abs(h @ composite @ solution.feed), rel=1e-12)
        assert solution.gain ** 2 == pytest.approx(solution.history[-1], rel=1e-9)
        assert solution.gain <= np.linalg.norm(h) + 1e-12

    def test_fixed_seed_is_deterministic(self, rng):
        stack = _random_stack(rng, layers=2)
        h = complex_normal(rng, 4)
        first = sim_configure(stack, h, budget=30, restarts=3, rng_seed=9)
        second = sim_configure(stack, h, budget=30, restarts=3, rng_seed=9)
        assert first.gain == second.gain
        for a, b in zip(first.analog_config.phases, second.analog_config.phases):
            np.testing.assert_array_equal(a, b)

    def test_zero_channel_rejected(self, rng):
        with pytest.raises(DegenerateChannelError):
            sim_configure(_random_stack(rng), np.zeros(4))

    def test_budget_must_be_positive(self, rng):
        with pytest.raises(DimensionError):
            sim_configure(_random_stack(rng), complex_normal(rng, 4), budget=0)

"""
Near-field coupling, passivity normalization, user channels and the cascade.
"""

import math

import numpy as np
import pytest

from src.core.exceptions import DimensionError, GeometryError, SingularityError
from src.physics.geometry import Direction, make_planar_array
from src.physics.propagation import (
    CouplingMatrix,
    LineOfSight,
    NearField,
    Rician,
    cascade_gain,
    lossless_coupling,
    near_field_coupling,
    normalize_passive,
    user_channel,
)
from tests.helpers import complex_normal

LAM = 0.01


def _coupling(entries):
    entries = np.asarray(entries, dtype=complex)
    rows, cols = entries.shape
    tx = make_planar_array(1, cols, LAM)
    rx = make_planar_array(1, rows, LAM, center=(0.05, 0.0, 0.0))
    return CouplingMatrix(entries=entries, tx_geom=tx, rx_geom=rx)


# ═══════════════════════════════════════════════════════════════
# RAYLEIGH-SOMMERFELD COUPLING
# ═══════════════════════════════════════════════════════════════

class TestNearFieldCoupling:

    def test_boresight_magnitude(self, carrier):
        area, d = 2.5e-5, 0.07
        tx = make_planar_array(1, 1, LAM, element_area=area)
        rx = make_planar_array(1, 1, LAM, center=(d, 0.0, 0.0))
        entry = near_field_coupling(tx, rx, carrier).entries[0, 0]
        expected = (area / d) * math.sqrt(1.0 / (2 * math.pi * d) ** 2 + 1.0 / LAM ** 2)
        assert abs(entry) == pytest.approx(expected, rel=1e-12)

    def test_shape_is_rx_by_tx(self, carrier):
        tx = make_planar_array(2, 2, LAM)
        rx = make_planar_array(3, 3, LAM / 2, center=(0.04, 0.0, 0.0))
        assert near_field_coupling(tx, rx, carrier).shape == (9, 4)

    def test_mirror_symmetric_grids(self, carrier):
        tx = make_planar_array(3, 3, LAM / 2)
        rx = make_planar_array(3, 3, LAM / 2, center=(0.03, 0.0, 0.0))
        g = near_field_coupling(tx, rx, carrier).entries
        np.testing.assert_allclose(g[::-1, ::-1], g, rtol=1e-10, atol=1e-14)

    def test_doubling_distances_decreases_every_entry(self, carrier):
        area = (LAM / 2) ** 2
        tx = make_planar_array(3, 3, LAM / 2, element_area=area)
        rx = make_planar_array(2, 2, LAM / 2, center=(0.02, 0.003, 0.0), element_area=area)
        near = near_field_coupling(tx, rx, carrier).entries
        tx_far = make_planar_array(3, 3, LAM, element_area=area)
        rx_far = make_planar_array(2, 2, LAM, center=(0.04, 0.006, 0.0), element_area=area)
        far = near_field_coupling(tx_far, rx_far, carrier).entries
        assert np.all(np.abs(far) < np.abs(near))

    def test_reciprocal_for_equal_areas(self, carrier):
        a = make_planar_array(2, 3, LAM / 2)
        b = make_planar_array(3, 2, LAM / 2, center=(0.05, 0.01, 0.0))
        np.testing.assert_allclose(
            near_field_coupling(a, b, carrier).entries,
            near_field_coupling(b, a, carrier).entries.T,
            rtol=1e-12,
        )

    def test_coincident_elements_rejected(self, carrier):
        geom = make_planar_array(2, 2, LAM)
        with pytest.raises(SingularityError):
            near_field_coupling(geom, geom, carrier)


# ═══════════════════════════════════════════════════════════════
# PASSIVITY
# ═══════════════════════════════════════════════════════════════

class TestNormalizePassive:

    def test_passive_input_unchanged(self):
        coupling = _coupling(0.3 * np.eye(2))
        out, factor = normalize_passive(coupling)
        assert factor == 1.0
        np.testing.assert_array_equal(out.entries, coupling.entries)

    def test_scaled_identity(self):
        out, factor = normalize_passive(_coupling(2.0 * np.eye(2)))
        assert factor == pytest.approx(0.5)
        np.testing.assert_allclose(out.entries, np.eye(2), atol=1e-15)

    def test_random_matrix_reaches_unit_spectral_norm(self, rng):
        for _ in range(20):
            entries = 3.0 * complex_normal(rng, 3, 4)
            coupling = _coupling(entries)
            out, factor = normalize_passive(coupling)
            assert coupling.sigma_max > 1.0
            assert out.sigma_max == pytest.approx(1.0, abs=1e-12)
            assert factor == pytest.approx(1.0 / coupling.sigma_max)

    def test_exact_scales_weak_coupling_up(self):
        out, factor = normalize_passive(_coupling(0.25 * np.eye(2)), exact=True)
        assert factor == pytest.approx(4.0)
        assert out.sigma_max == pytest.approx(1.0, abs=1e-15)

    def test_exact_rejects_zero_coupling(self):
        with pytest.raises(SingularityError):
            normalize_passive(_coupling(np.zeros((2, 2))), exact=True)

    def test_geometry_is_kept(self):
        coupling = _coupling(5.0 * np.ones((2, 3)))
        out, _ = normalize_passive(coupling)
        assert out.tx_geom is coupling.tx_geom
        assert out.rx_geom is coupling.rx_geom

    def test_entries_must_match_geometry(self):
        tx = make_planar_array(1, 2, LAM)
        rx = make_planar_array(1, 3, LAM, center=(0.05, 0.0, 0.0))
        with pytest.raises(DimensionError):
            CouplingMatrix(entries=np.ones((2, 3)), tx_geom=tx, rx_geom=rx)


class TestLosslessCoupling:

    def test_layer_link_becomes_unitary(self, carrier):
        tx = make_planar_array(3, 3, LAM / 2, center=(-LAM / 2, 0.0, 0.0))
        rx = make_planar_array(3, 3, LAM / 2)
        coupling = near_field_coupling(tx, rx, carrier)
        out = lossless_coupling(coupling)
        np.testing.assert_allclose(out.entries @ out.entries.conj().T, np.eye(9), atol=1e-12)
        assert out.rx_geom is coupling.rx_geom

    def test_scaled_unitary_recovers_the_unitary(self, rng):
        unitary, _ = np.linalg.qr(complex_normal(rng, 3, 3))
        out = lossless_coupling(_coupling(0.4 * unitary))
        np.testing.assert_allclose(out.entries, unitary, atol=1e-12)

    def test_non_square_rejected(self):
        with pytest.raises(DimensionError):
            lossless_coupling(_coupling(np.ones((2, 3))))


# ═══════════════════════════════════════════════════════════════
# USER CHANNELS
# ═══════════════════════════════════════════════════════════════

class TestUserChannel:

    def test_line_of_sight_broadside_is_all_ones(self, carrier):
        geom = make_planar_array(9, 9, LAM / 2)
        h = user_channel(geom, Direction(0.0), carrier, LineOfSight())
        np.testing.assert_allclose(h.gains, np.ones(81), atol=1e-12)
        assert h.count == 81

    def test_line_of_sight_gain_scales(self, carrier):
        geom = make_planar_array(3, 3, LAM / 2)
        base = user_channel(geom, Direction(0.4), carrier, LineOfSight())
        scaled = user_channel(geom, Direction(0.4), carrier, LineOfSight(gain=2.0 - 1.0j))
        np.testing.assert_allclose(scaled.gains, (2.0 - 1.0j) * base.gains)

    def test_rician_infinite_k_is_line_of_sight(self, carrier):
        geom = make_planar_array(3, 3, LAM / 2)
        direction = Direction.from_degrees(25.0)
        los = user_channel(geom, direction, carrier, LineOfSight())
        rician = user_channel(geom, direction, carrier, Rician(k_factor=math.inf), rng_seed=9)
        np.testing.assert_allclose(rician.gains, los.gains, atol=1e-12)

    def test_rician_large_k_converges(self, carrier):
        geom = make_planar_array(3, 3, LAM / 2)
        direction = Direction.from_degrees(-15.0)
        los = user_channel(geom, direction, carrier, LineOfSight()).gains
        errors = [
            np.max(np.abs(user_channel(geom, direction, carrier, Rician(k_factor=k), rng_seed=3).gains - los))
            for k in (1e2, 1e4, 1e8)
        ]
        assert errors[0] > errors[1] > errors[2]
        assert errors[2] < 1e-3

    def test_rician_is_deterministic(self, carrier):
        geom = make_planar_array(3, 3, LAM / 2)
        model = Rician.from_db(5.0)
        first = user_channel(geom, Direction(0.2), carrier, model, rng_seed=42)
        second = user_channel(geom, Direction(0.2), carrier, model, rng_seed=42)
        np.testing.assert_array_equal(first.gains, second.gains)

    def test_rician_seed_changes_realization(self, carrier):
        geom = make_planar_array(3, 3, LAM / 2)
        model = Rician.from_db(0.0)
        first = user_channel(geom, Direction(0.0), carrier, model, rng_seed=1)
        second = user_channel(geom, Direction(0.0), carrier, model, rng_seed=2)
        assert not np.allclose(first.gains, second.gains)

    def test_negative_k_factor_rejected(self):
        with pytest.raises(GeometryError):
            Rician(k_factor=-0.5)

    def test_far_near_field_approaches_line_of_sight(self, carrier):
        geom = make_planar_array(3, 3, LAM / 2)
        direction = Direction.from_degrees(10.0)
        los = user_channel(geom, direction, carrier, LineOfSight()).gains
        near = user_channel(geom, direction, carrier, NearField(range_m=1e4)).gains
        np.testing.assert_allclose(near, los, atol=1e-3)

    def test_near_field_is_not_planar_up_close(self, carrier):
        geom = make_planar_array(9, 9, LAM / 2)
        los = user_channel(geom, Direction(0.0), carrier, LineOfSight()).gains
        near = user_channel(geom, Direction(0.0), carrier, NearField(range_m=5 * LAM)).gains
        assert np.max(np.abs(near - los)) > 0.1


# ═══════════════════════════════════════════════════════════════
# CASCADE
# ═══════════════════════════════════════════════════════════════

class TestCascadeGain:

    def test_zero_transmission(self, rng):
        h, g, f = complex_normal(rng, 4), complex_normal(rng, 3, 2), complex_normal(rng, 2)
        assert cascade_gain(h, np.zeros((4, 3)), g, f) == 0

    def test_scalar_chain(self):
        assert cascade_gain(np.array([2.0]), np.array([[0.5]]), np.array([[0.25]]), np.array([1.0])) == pytest.approx(0.25)

    def test_matches_explicit_triple_sum(self, rng):
        for _ in range(10):
            h, t = complex_normal(rng, 4), complex_normal(rng, 4, 3)
            g, f = complex_normal(rng, 3, 2), complex_normal(rng, 2)
            expected = sum(
                h[m] * t[m, n] * g[n, k] * f[k]
                for m in range(4)
                for n in range(3)
                for k in range(2)
            )
            assert abs(cascade_gain(h, t, g, f) - expected) <= 1e-12 * max(1.0, abs(expected))

    def test_accepts_wrapped_types(self, carrier, rng):
        geom = make_planar_array(1, 2, LAM)
        h = user_channel(geom, Direction(0.0), carrier, LineOfSight())
        coupling = _coupling(np.array([[1.0, 0.0], [0.0, 1.0]]))
        assert cascade_gain(h, np.eye(2), coupling, np.array([1.0, 1.0])) == pytest.approx(2.0)

    @pytest.mark.parametrize(
        "h_size, t_shape, g_shape, f_size",
        [(3, (4, 3), (3, 2), 2), (4, (4, 2), (3, 2), 2), (4, (4, 3), (3, 2), 5)],
    )
    def test_dimension_mismatch(self, h_size, t_shape, g_shape, f_size):
        with pytest.raises(DimensionError):
            cascade_gain(np.ones(h_size), np.ones(t_shape), np.ones(g_shape), np.ones(f_size))

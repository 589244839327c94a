import math

import numpy as np
import pytest

from oamlink.channel import exact_channel_at
from oamlink.experiments import table1_scenario
from oamlink.metrics import channel_gain_and_imi
from oamlink.oam import make_fourier
from oamlink.steering import (
    abs_weights,
    closed_form_abs_entry,
    closed_form_dbs_entry,
    dbs_weights,
    dbs_weights_at,
    default_anchor,
    frequency_deviation,
    steered_oam_channel,
    steering_phases,
)


def steered_gain_imi(scenario, weights, subcarrier=0):
    f = make_fourier(scenario.modes, scenario.params.element_count)
    ch = exact_channel_at(scenario.params, scenario.grid.wavenumber(subcarrier))
    return channel_gain_and_imi(
        steered_oam_channel(ch, f, scenario.modes, weights)
    )


class TestWeights:
    def test_aligned_phases_vanish(self, reference):
        phases = steering_phases(
            reference.params.rx, reference.params.pose, reference.grid.wavenumber(810)
        )
        assert np.allclose(phases, 0.0, atol=1e-15)

    def test_unit_modulus(self, tilted):
        for w in (
            abs_weights(tilted.params.rx, tilted.params.pose, tilted.grid),
            dbs_weights(tilted.params.rx, tilted.params.pose, tilted.grid, 37),
        ):
            assert np.allclose(np.abs(w.weights), 1.0, atol=1e-14)

    def test_default_anchor_is_band_center(self, reference):
        assert default_anchor(reference.grid) == 810
        assert reference.grid.subcarrier_frequency(810) == pytest.approx(3.5e9)

    def test_anchor_range_checked(self, tilted):
        with pytest.raises(IndexError):
            abs_weights(tilted.params.rx, tilted.params.pose, tilted.grid, 0)
        with pytest.raises(IndexError):
            dbs_weights(tilted.params.rx, tilted.params.pose, tilted.grid, 1621)

    def test_frequency_deviation(self, reference):
        dev = frequency_deviation(reference.grid, 810, 810)
        assert dev.g == 0
        assert dev.k_g == 0.0
        dev = frequency_deviation(reference.grid, 0, 810)
        assert dev.g == -810
        assert dev.k_g == pytest.approx(
            reference.grid.wavenumber(0) - reference.grid.wavenumber(810), rel=1e-12
        )


class TestAnchorCoincidence:
    def test_abs_equals_dbs_at_anchor(self):
        s = table1_scenario(alpha_deg=10, gamma_deg=10)
        f = make_fourier(s.modes, 15)
        anchor = s.resolved_anchor
        ch = exact_channel_at(s.params, s.grid.wavenumber(anchor))
        h_abs = steered_oam_channel(
            ch, f, s.modes, abs_weights(s.params.rx, s.params.pose, s.grid, anchor)
        ).entries
        h_dbs = steered_oam_channel(
            ch, f, s.modes, dbs_weights(s.params.rx, s.params.pose, s.grid, anchor)
        ).entries
        assert np.array_equal(h_abs, h_dbs)

    def test_schemes_differ_off_anchor(self):
        s = table1_scenario(alpha_deg=10, gamma_deg=10)
        w_abs = abs_weights(s.params.rx, s.params.pose, s.grid)
        w_dbs = dbs_weights(s.params.rx, s.params.pose, s.grid, 1)
        assert np.max(np.abs(w_abs.weights - w_dbs.weights)) > 1e-6


class TestSteeredChannelValues:
    @pytest.mark.parametrize(
        "deg,cg_ref,imi_ref,imi_tol",
        [(5, 4.76e-1, 8.52e-4, 0.25), (15, 4.58e-1, 8.11e-3, 0.25)],
    )
    def test_analog_band_edge(self, deg, cg_ref, imi_ref, imi_tol):
        s = table1_scenario(alpha_deg=deg, gamma_deg=deg)
        w = abs_weights(s.params.rx, s.params.pose, s.grid)
        gi = steered_gain_imi(s, w, subcarrier=0)
        u = s.modes.index_of(1)
        assert gi.channel_gain[u] == pytest.approx(cg_ref, rel=0.10)
        assert gi.imi[u] == pytest.approx(imi_ref, rel=imi_tol)

    @pytest.mark.parametrize(
        "deg,cg_ref,imi_ref,imi_tol",
        [(5, 4.79e-1, 2.57e-5, 0.50), (15, 4.85e-1, 9.72e-4, 0.25)],
    )
    def test_digital_band_edge(self, deg, cg_ref, imi_ref, imi_tol):
        s = table1_scenario(alpha_deg=deg, gamma_deg=deg)
        w = dbs_weights_at(s.params.rx, s.params.pose, s.grid.wavenumber(0))
        gi = steered_gain_imi(s, w, subcarrier=0)
        u = s.modes.index_of(1)
        assert gi.channel_gain[u] == pytest.approx(cg_ref, rel=0.10)
        assert gi.imi[u] == pytest.approx(imi_ref, rel=imi_tol)

    def test_digital_suppression_invariant(self):
        # Per-subcarrier compensation cancels the first-order misalignment
        # phase only; a second-order residual remains and dominates modes
        # whose gain sits near a Bessel null (|l| >= 5 couple at the 1e-7
        # level here).  The two-orders-of-magnitude suppression claim is
        # therefore asserted for the dominant mode at all angles, and for
        # every meaningfully coupled mode at small tilt.
        for deg in (5, 10, 15, 20):
            s = table1_scenario(alpha_deg=deg, gamma_deg=deg)
            u = s.modes.index_of(1)
            for p in (0, 1, 405, 810, 1620):
                w = dbs_weights_at(s.params.rx, s.params.pose, s.grid.wavenumber(p))
                gi = steered_gain_imi(s, w, subcarrier=p)
                assert gi.imi[u] / gi.channel_gain[u] <= 1e-2
                if deg == 5:
                    strong = gi.channel_gain >= 1e-4
                    assert np.all((gi.imi / gi.channel_gain)[strong] <= 1e-2)

    def test_digital_gain_angle_stability(self):
        # Compensated gain stays within a few percent across tilt angles.
        gains = []
        for deg in (0, 5, 10, 15, 20):
            s = table1_scenario(alpha_deg=deg, gamma_deg=deg)
            w = dbs_weights_at(s.params.rx, s.params.pose, s.grid.wavenumber(0))
            gi = steered_gain_imi(s, w, subcarrier=0)
            gains.append(gi.channel_gain[s.modes.index_of(1)])
        assert (max(gains) - min(gains)) / max(gains) < 0.05


class TestAnalogResidual:
    def test_residual_grows_with_anchor_offset(self):
        # Total residual interference grows as the evaluated subcarrier
        # moves away from the analog anchor.
        s = table1_scenario(alpha_deg=10, gamma_deg=10)
        w = abs_weights(s.params.rx, s.params.pose, s.grid)
        totals = []
        for p in (810, 700, 500, 300, 100, 1):
            gi = steered_gain_imi(s, w, subcarrier=p)
            totals.append(float(np.sum(gi.imi)))
        assert all(b >= a for a, b in zip(totals, totals[1:]))

    def test_residual_grows_with_bandwidth(self):
        # Wider occupied band means a larger band-edge frequency deviation
        # and therefore more analog residual interference.
        from dataclasses import replace

        totals = []
        for bw_mhz in (50, 100, 200, 400):
            s = table1_scenario(alpha_deg=10, gamma_deg=10)
            grid = replace(
                s.grid, subcarrier_spacing=bw_mhz * 1e6 / s.grid.subcarrier_count
            )
            s = replace(s, grid=grid)
            w = abs_weights(s.params.rx, s.params.pose, s.grid)
            gi = steered_gain_imi(s, w, subcarrier=0)
            totals.append(float(np.sum(gi.imi)))
        assert all(b >= a for a, b in zip(totals, totals[1:]))

    def test_band_edge_worse_than_digital(self):
        for deg in (5, 10, 15, 20):
            s = table1_scenario(alpha_deg=deg, gamma_deg=deg)
            k0 = s.grid.wavenumber(0)
            gi_abs = steered_gain_imi(
                s, abs_weights(s.params.rx, s.params.pose, s.grid), subcarrier=0
            )
            gi_dbs = steered_gain_imi(
                s, dbs_weights_at(s.params.rx, s.params.pose, k0), subcarrier=0
            )
            assert np.sum(gi_abs.imi) > np.sum(gi_dbs.imi)


class TestClosedForms:
    @pytest.mark.parametrize("deg,kg_rr_rho", [(5, 1.07e-1), (20, 4.09e-1)])
    def test_deviation_bessel_argument(self, reference, deg, kg_rr_rho):
        from oamlink.geometry import LinkPose, oblique_factors

        pose = LinkPose(
            center_distance=reference.params.pose.center_distance,
            alpha=math.radians(deg),
            gamma=math.radians(deg),
        )
        dev = frequency_deviation(reference.grid, 0, 810)
        rho = oblique_factors(pose).rho
        assert abs(dev.k_g) * reference.params.rx.radius * rho == pytest.approx(
            kg_rr_rho, rel=0.01
        )

    def test_analog_entry_zero_deviation(self, tilted):
        # With no frequency deviation the off-diagonal residual vanishes.
        from oamlink.geometry import oblique_factors

        factors = oblique_factors(tilted.params.pose)
        k = tilted.grid.wavenumber(810)
        u, v = tilted.modes.index_of(1), tilted.modes.index_of(3)
        assert closed_form_abs_entry(
            u, v, tilted.modes, tilted.params, k, 0.0, factors
        ) == pytest.approx(0.0, abs=1e-15)

    def test_analog_diagonal_matches_digital(self, tilted):
        # On the diagonal the residual Bessel factor is J_0, which tends to
        # 1 as the deviation shrinks, recovering the digital expression.
        from oamlink.geometry import oblique_factors

        factors = oblique_factors(tilted.params.pose)
        k = tilted.grid.wavenumber(810)
        u = tilted.modes.index_of(1)
        a = closed_form_abs_entry(u, u, tilted.modes, tilted.params, k, 0.0, factors)
        d = closed_form_dbs_entry(u, u, tilted.modes, tilted.params, k)
        assert abs(a) == pytest.approx(abs(d), rel=1e-12)

    def test_digital_entry_gain(self, reference):
        # Closed-form compensated gain at the band edge for the +1 mode.
        k = reference.grid.wavenumber(0)
        u = reference.modes.index_of(1)
        value = closed_form_dbs_entry(u, u, reference.modes, reference.params, k)
        assert abs(value) ** 2 == pytest.approx(0.479, rel=0.10)

    def test_digital_entry_off_diagonal_zero(self, reference):
        k = reference.grid.wavenumber(0)
        for v in range(15):
            u = reference.modes.index_of(1)
            if v == u:
                continue
            assert closed_form_dbs_entry(u, v, reference.modes, reference.params, k) == 0.0

    def test_digital_entry_angle_independent(self):
        k = table1_scenario().grid.wavenumber(0)
        values = []
        for deg in (0, 10, 20):
            s = table1_scenario(alpha_deg=deg, gamma_deg=deg)
            u = s.modes.index_of(1)
            values.append(closed_form_dbs_entry(u, u, s.modes, s.params, k))
        assert values[0] == values[1] == values[2]


class TestSteeredChannelShapeChecks:
    def test_bad_weight_length(self, tilted):
        f = make_fourier(tilted.modes, 15)
        ch = exact_channel_at(tilted.params, tilted.grid.wavenumber(1))
        w = dbs_weights_at(tilted.params.rx, tilted.params.pose, ch.wavenumber)
        bad = type(w)(weights=w.weights[:10], scheme=w.scheme, wavenumber=w.wavenumber)
        with pytest.raises(ValueError, match="weight vector"):
            steered_oam_channel(ch, f, tilted.modes, bad)

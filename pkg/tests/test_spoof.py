import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from gnss_threat_sim.model import (
    SPEED_OF_LIGHT,
    Band,
    BandMeasurement,
    SatelliteId,
    SatelliteObservation,
    db_to_linear,
    gamma,
)
from gnss_threat_sim.rfi import Window
from gnss_threat_sim.spoof import (
    NonSmart,
    ReceiverKind,
    Smart,
    SpooferConfig,
    SpooferRuntimeState,
    combine_dual_frequency,
    drift_per_band,
    spoof_delay,
    spoof_satellite,
    ssr_at,
    update_lock,
)

SAT = (0.0, 0.0, 2.0e7)
G19 = SatelliteId.parse("G19")
coord = st.floats(min_value=-3e7, max_value=3e7)
vec = st.tuples(coord, coord, coord)


class TestDelay:
    def test_colocated_receiver_and_spoofer(self):
        assert spoof_delay(SAT, (10.0, 20.0, 30.0), (10.0, 20.0, 30.0), 1e-6, 2e-6) == 3e-6

    def test_geometry_oracle(self):
        want = oracles.relay_delay(SAT, (0, 0, 0), (3000, 0, 0))
        assert float(oracles.excess_path(SAT, (0, 0, 0), (3000, 0, 0))) == pytest.approx(
            2999.775, abs=1e-3)
        got = spoof_delay(SAT, (0.0, 0.0, 0.0), (3000.0, 0.0, 0.0))
        assert got == pytest.approx(1.00062e-5, abs=1e-9)
        assert got == pytest.approx(float(want), rel=1e-9)

    def test_spoofer_on_segment(self):
        assert spoof_delay(SAT, (0.0, 0.0, 1.0e7), (0.0, 0.0, 0.0), 1e-7, 0.0) == pytest.approx(
            1e-7, abs=1e-15)

    def test_degenerate(self):
        with pytest.raises(ValueError):
            spoof_delay(SAT, (0.0, 0.0, 0.0), SAT)

    @given(vec, vec, vec, st.floats(0, 1e-3), st.floats(0, 1e-3))
    def test_triangle_inequality(self, sat, spoofer, rx, dp, dc):
        if np.linalg.norm(np.subtract(sat, rx)) < 1.0 or np.linalg.norm(
                np.subtract(sat, spoofer)) < 1.0:
            return
        assert spoof_delay(sat, spoofer, rx, dp, dc) >= dp + dc

    def test_meaconing_drift_vanishes_near_the_line(self):
        spoofer = np.array([1000.0, 2000.0, 0.0])
        away = (spoofer - np.array(SAT)) / np.linalg.norm(spoofer - np.array(SAT))
        perp = np.cross(away, [1.0, 0.0, 0.0])
        perp /= np.linalg.norm(perp)
        excess = [spoof_delay(SAT, tuple(spoofer), tuple(spoofer + 3000 * away + eps * perp))
                  for eps in (1000.0, 100.0, 10.0, 1.0)]
        assert excess == sorted(excess, reverse=True)
        assert excess[-1] * SPEED_OF_LIGHT < 1e-3


class TestDrift:
    def test_meaconing_small_delay(self):
        for band in Band:
            drift, gated = drift_per_band(5e-8, 0.0, band)
            assert not gated and drift == pytest.approx(14.99, abs=1e-2)

    def test_between_chip_periods(self):
        assert drift_per_band(2e-7, 0.0, Band.L5) == (0.0, True)
        drift, gated = drift_per_band(2e-7, 0.0, Band.L1)
        assert not gated and drift == pytest.approx(59.96, abs=1e-2)

    def test_beyond_both(self):
        assert drift_per_band(2e-6, 0.0, Band.L1) == (0.0, True)
        assert drift_per_band(2e-6, 0.0, Band.L5) == (0.0, True)

    def test_boundary_is_gated(self):
        assert drift_per_band(Band.L5.chip_period, 0.0, Band.L5) == (0.0, True)

    def test_prediction_offset(self):
        drift, gated = drift_per_band(5e-7, 4.5e-7, Band.L5)
        assert not gated and drift == pytest.approx(SPEED_OF_LIGHT * 5e-8, rel=1e-9)
        assert drift_per_band(0.0, 5e-8, Band.L1)[0] == pytest.approx(-SPEED_OF_LIGHT * 5e-8)

    @given(st.floats(min_value=-2.5e-6, max_value=2.5e-6), st.sampled_from(list(Band)))
    def test_gating_rule(self, deviation, band):
        drift, gated = drift_per_band(deviation, 0.0, band)
        assert gated == (abs(deviation) >= band.chip_period)
        assert drift == (0.0 if gated else SPEED_OF_LIGHT * deviation)


class TestCombination:
    def test_equal_inputs(self):
        assert combine_dual_frequency(2.0e7, 2.0e7, gamma()) == pytest.approx(2.0e7, rel=1e-12)

    def test_l5_gated(self):
        rho, d = 2.0e7, 50.0
        got = combine_dual_frequency(rho, rho + d, gamma())
        assert got - rho == pytest.approx(2.2606 * d, abs=1e-3 * d)
        g = oracles.gamma_l1_l5()
        assert got - rho == pytest.approx(float(g / (g - 1) * d), rel=1e-6)

    def test_l1_gated(self):
        rho, d = 2.0e7, 50.0
        assert combine_dual_frequency(rho + d, rho, gamma()) - rho == pytest.approx(
            -1.2606 * d, abs=1e-3 * d)

    def test_singular(self):
        with pytest.raises(ValueError):
            combine_dual_frequency(1.0, 1.0, 1.0)

    @given(st.floats(min_value=1.0e6, max_value=1.0e8))
    def test_affine_identity(self, rho):
        assert combine_dual_frequency(rho, rho, gamma()) == pytest.approx(rho, rel=1e-9)


def spoofer(mode, window=(120.0, 160.0), **kw):
    return SpooferConfig(window=Window(*window), position=(0.0, 0.0, 0.0), mode=mode, **kw)


class TestPower:
    def test_non_smart_constant(self):
        cfg = spoofer(NonSmart(db_to_linear(15.0)))
        for t in (120.0, 133.3, 160.0):
            assert ssr_at(cfg, None, t) == pytest.approx(31.6228, abs=1e-4)
        assert ssr_at(cfg, None, 119.0) == 0.0

    def test_smart_ramp(self):
        cfg = spoofer(Smart(1.0, 100.0, 20.0))
        assert ssr_at(cfg, None, 120.0) == 1.0
        assert ssr_at(cfg, None, 130.0) == pytest.approx(10.0, abs=1e-6)
        assert ssr_at(cfg, None, 140.0) == 100.0
        assert ssr_at(cfg, None, 155.0) == 100.0
        assert ssr_at(cfg, None, 161.0) == 0.0

    def test_per_band_override(self):
        cfg = spoofer(NonSmart(10.0), ssr_per_band={Band.L5: 20.0})
        assert ssr_at(cfg, None, 130.0, Band.L1) == 10.0
        assert ssr_at(cfg, None, 130.0, Band.L5) == 20.0

    @given(st.lists(st.floats(min_value=100.0, max_value=170.0), min_size=2, max_size=30))
    def test_smart_non_decreasing_then_constant(self, ts):
        cfg = spoofer(Smart(1.0, 100.0, 20.0))
        inside = sorted(t for t in ts if 120.0 <= t <= 160.0)
        vals = [ssr_at(cfg, None, t) for t in inside]
        assert vals == sorted(vals)
        assert all(v == 100.0 for t, v in zip(inside, vals) if t >= 140.0)


class TestLock:
    def test_smart_lock_sequence(self):
        cfg = spoofer(Smart(1.0, 100.0, 20.0))
        st_ = SpooferRuntimeState()
        history = []
        for t in range(110, 171):
            update_lock(st_, cfg, float(t), [G19])
            history.append((t, st_.is_locked(G19)))
        locked_ts = [t for t, locked in history if locked]
        assert locked_ts == list(range(140, 161))
        assert st_.current_ssr[Band.L1] == 0.0

    def test_non_smart_locks_at_window_start(self):
        cfg = spoofer(NonSmart(31.6))
        st_ = update_lock(SpooferRuntimeState(), cfg, 120.0, [G19])
        assert st_.is_locked(G19)

    def test_untargeted_never_locked(self):
        other = SatelliteId.parse("G20")
        cfg = spoofer(NonSmart(31.6), targets=frozenset({G19}))
        st_ = update_lock(SpooferRuntimeState(), cfg, 130.0, [G19, other])
        assert st_.is_locked(G19) and not st_.is_locked(other)

    def test_proximity_drop_releases_lock(self):
        cfg = spoofer(NonSmart(31.6), max_range=4500.0)
        st_ = update_lock(SpooferRuntimeState(), cfg, 130.0, [G19], (1000.0, 0.0, 0.0))
        assert st_.is_locked(G19)
        update_lock(st_, cfg, 131.0, [G19], (5000.0, 0.0, 0.0))
        assert not st_.is_locked(G19)

    def test_time_regression(self):
        cfg = spoofer(NonSmart(31.6))
        st_ = update_lock(SpooferRuntimeState(), cfg, 130.0, [G19])
        with pytest.raises(ValueError):
            update_lock(st_, cfg, 129.0, [G19])

    @given(st.lists(st.floats(min_value=0.0, max_value=300.0), min_size=1, max_size=40))
    def test_lock_only_inside_window_and_monotone(self, ts):
        cfg = spoofer(Smart(1.0, 100.0, 15.0))
        st_ = SpooferRuntimeState()
        prev = False
        for t in sorted(ts):
            update_lock(st_, cfg, t, [G19])
            now = st_.is_locked(G19)
            if now:
                assert cfg.window.contains(t)
            if prev and cfg.window.contains(t):
                assert now
            prev = now


def observation(pr=2.0e7):
    return SatelliteObservation(G19, SAT, {Band.L1: BandMeasurement(pr, 45.0),
                                           Band.L5: BandMeasurement(pr + 3.0, 45.0)})


class TestSpoofSatellite:
    def test_inactive_is_identity(self):
        cfg = spoofer(NonSmart(31.6))
        res = spoof_satellite(observation(), (3000.0, 0.0, 0.0), cfg, SpooferRuntimeState(), 10.0)
        assert not res.active
        assert res.spoofed_pseudorange == {Band.L1: 2.0e7, Band.L5: 2.0e7 + 3.0}
        assert all(v == 0.0 for v in res.drift.values())
        assert all(v == 0.0 for v in res.ssr.values())

    def test_both_bands_equal_drift(self):
        # spoofer 10 m off the receiver, nearly on its line of sight
        cfg = SpooferConfig(window=Window(0.0, 100.0), position=(0.0, 1.0, 10.0),
                            mode=NonSmart(31.6))
        rx = (0.0, 0.0, 0.0)
        obs = SatelliteObservation(G19, SAT, {Band.L1: BandMeasurement(2.0e7, 45.0),
                                              Band.L5: BandMeasurement(2.0e7, 45.0)})
        res = spoof_satellite(obs, rx, cfg, SpooferRuntimeState(), 50.0)
        d = float(oracles.excess_path(SAT, (0, 1, 10), rx))
        assert not any(res.gated.values())
        assert res.drift[Band.L1] == pytest.approx(d, rel=1e-6)
        assert res.combined_pseudorange == pytest.approx(2.0e7 + d, abs=1e-6)

    def test_single_frequency_reports_its_band(self):
        cfg = SpooferConfig(window=Window(0.0, 100.0), position=(0.0, 1.0, 10.0),
                            mode=NonSmart(31.6))
        res = spoof_satellite(observation(), (0.0, 0.0, 0.0), cfg, SpooferRuntimeState(), 50.0,
                              ReceiverKind.single(Band.L5))
        assert res.combined_pseudorange == res.spoofed_pseudorange[Band.L5]

    def test_fixture_onset_drift(self, scenario_doc, fast_time_trace):
        from gnss_threat_sim.scenario import validate
        scen = validate(scenario_doc("fast_time_spoofing_nonsmart.json"))
        cfg = scen.spoofers[0]
        epoch = next(e for e in fast_time_trace if e.t == 120.0)
        obs = next(s for s in epoch.satellites if str(s.id) == "G20")
        state = update_lock(SpooferRuntimeState(), cfg, 120.0, [obs.id], epoch.receiver_position)
        res = spoof_satellite(obs, epoch.receiver_position, cfg, state, 120.0)
        assert float(oracles.norm(cfg.position, epoch.receiver_position)) == pytest.approx(
            800.0, abs=1e-6)
        excess = float(oracles.excess_path(obs.position, cfg.position, epoch.receiver_position))
        assert res.drift[Band.L1] == pytest.approx(excess, rel=1e-9)
        assert res.drift[Band.L5] == pytest.approx(excess, rel=1e-9)
        assert res.locked

import math

import pytest
from hypothesis import assume, given, strategies as st

import oracles
from gnss_threat_sim.model import (
    Band,
    BandMeasurement,
    MeasurementEpoch,
    SatelliteId,
    SatelliteObservation,
    db_to_linear,
)
from gnss_threat_sim.rfi import (
    ContinuousInterferer,
    PulsedInterferer,
    ReceiverRfConfig,
    Window,
    inr_continuous,
    inr_pulsed,
    snr_gain,
    snr_max,
    spnr,
    swap_locked,
)

ratio = st.floats(min_value=0.0, max_value=1e6)
betas = st.floats(min_value=0.0, max_value=0.5, exclude_max=True)


def epoch_with_snrs(snrs, band=Band.L1):
    sats = tuple(
        SatelliteObservation(SatelliteId.parse(f"G{i + 1:02d}"), (0.0, 0.0, 2.0e7),
                             {band: BandMeasurement(2.0e7, 10 * math.log10(s))})
        for i, s in enumerate(snrs))
    return MeasurementEpoch(0.0, (0.0, 0.0, 0.0), sats)


def test_snr_max():
    assert snr_max(epoch_with_snrs([1e4]), Band.L1) == pytest.approx(1e4)
    assert snr_max(epoch_with_snrs([1e4, 2e4, 5e3]), Band.L1) == pytest.approx(2e4)
    with pytest.raises(ValueError, match="absent"):
        snr_max(epoch_with_snrs([1e4]), Band.L5)


def cw(sir, start=0.0, end=10.0):
    return ContinuousInterferer(Window(start, end), {Band.L1: sir, Band.L5: sir})


def pulse(sir, duty, start=0.0, end=10.0):
    return PulsedInterferer(Window(start, end), {Band.L1: sir}, duty)


class TestContinuous:
    def test_inactive(self):
        assert inr_continuous(1e4, [], Band.L1, 5.0) == 0.0
        assert inr_continuous(1e4, [cw(1e5, 20, 80)], Band.L1, 5.0) == 0.0

    def test_single(self):
        assert inr_continuous(1e4, [cw(1e5)], Band.L1, 5.0) == pytest.approx(0.1, rel=1e-15)

    def test_sources_add_in_power(self):
        assert inr_continuous(1e4, [cw(1e5), cw(1e5)], Band.L1, 5.0) == pytest.approx(0.2)

    def test_window_edges_inclusive(self):
        assert inr_continuous(1e5, [cw(1e5, 20, 80)], Band.L1, 20.0) == 1.0
        assert inr_continuous(1e5, [cw(1e5, 20, 80)], Band.L1, 80.0) == 1.0
        assert inr_continuous(1e5, [cw(1e5, 20, 80)], Band.L1, 80.5) == 0.0


class TestPulsed:
    def test_inactive(self):
        assert inr_pulsed(1e4, [], Band.L1, 0.0, 5.0) == 0.0

    def test_blanker_disabled_is_duty_weighted_sum(self):
        pulses = [pulse(1e4, d) for d in (0.03, 0.04, 0.05)]
        assert inr_pulsed(1e4, pulses, Band.L1, 0.0, 5.0) == pytest.approx(0.12, abs=1e-12)

    def test_blanker_scaling(self):
        assert inr_pulsed(1e4, [pulse(1e4, 0.05)], Band.L1, 0.2, 5.0) == pytest.approx(0.25)

    @pytest.mark.parametrize("duty", [0.0, -0.1, 1.5])
    def test_duty_cycle_domain(self, duty):
        with pytest.raises(ValueError):
            pulse(1e4, duty)


def test_spnr():
    assert spnr(1e4, 0.0) == 0.0
    assert spnr(1e4, db_to_linear(15.0)) == pytest.approx(3.16228e5, rel=1e-5)
    assert spnr(1.0, 1.0) == 1.0


class TestGain:
    def test_identity(self):
        gb = snr_gain(0, 0, 0, 1e4, 0, 0.0, False)
        assert gb.gain == 1.0 and gb.output_snr == 1e4 and not gb.obscured

    def test_blanker_only(self):
        assert snr_gain(0, 0, 0, 1e4, 0, 0.1, False).gain == pytest.approx(0.9)

    def test_continuous_only(self):
        gb = snr_gain(0.1, 0, 0, 1e4, 0, 0.0, False)
        assert gb.gain == pytest.approx(0.90909, abs=1e-5)
        assert 10 * math.log10(gb.gain) == pytest.approx(-0.414, abs=1e-3)

    def test_spoofing_before_and_after_lock(self):
        snr, ssr = 1e4, db_to_linear(15.0)
        before = snr_gain(0, 0, spnr(snr, ssr), snr, ssr, 0.0, False)
        assert before.gain == pytest.approx(3.1623e-6, rel=1e-4)
        assert 10 * math.log10(before.gain) == pytest.approx(-55.0, abs=1e-3)
        after = snr_gain(0, 0, spnr(snr, ssr), snr, ssr, 0.0, True)
        assert after.output_snr == pytest.approx(31.62, abs=1e-2)
        assert 10 * math.log10(after.output_snr) == pytest.approx(15.0, abs=1e-3)
        assert after.gain * snr == pytest.approx(after.output_snr, rel=1e-12)

    def test_obscuration_threshold(self):
        rf = ReceiverRfConfig()
        assert rf.tracking_threshold == pytest.approx(10.0)
        gb = snr_gain(1e5, 0, 0, 1e4, 0, 0.0, False, rf.tracking_threshold)
        assert gb.output_snr < 10.0 and gb.obscured

    def test_rejects_negative_terms(self):
        with pytest.raises(ValueError):
            snr_gain(-1, 0, 0, 1, 0, 0, False)
        with pytest.raises(ValueError):
            snr_gain(0, 0, 0, 1, 0, 1.0, False)

    @given(betas, ratio, ratio, ratio)
    def test_matches_oracle(self, beta, a, b, c):
        got = snr_gain(a, b, c, 1.0, 0.0, beta, False).gain
        assert got == pytest.approx(float(oracles.gain_unlocked(beta, a, b, c)), rel=1e-12)

    @given(betas, ratio, ratio, ratio)
    def test_bounds(self, beta, a, b, c):
        g = snr_gain(a, b, c, 1.0, 0.0, beta, False).gain
        assert 0.0 < g <= 1.0 - beta
        if a == b == c == 0.0:
            assert g == 1.0 - beta
        elif a + b + c > 1e-12:  # smaller terms vanish against 1 in double precision
            assert g < 1.0 - beta

    @given(betas, ratio, ratio, ratio, st.floats(min_value=0.0, max_value=1e3),
           st.integers(min_value=0, max_value=2))
    def test_monotone(self, beta, a, b, c, extra, which):
        terms = [a, b, c]
        g0 = snr_gain(*terms, 1.0, 0.0, beta, False).gain
        terms[which] += extra
        assert snr_gain(*terms, 1.0, 0.0, beta, False).gain <= g0

    @given(st.floats(min_value=1e-3, max_value=1e6), st.floats(min_value=1e-3, max_value=1e6))
    def test_swap_involution(self, snr, ssr):
        sp = spnr(snr, ssr)
        assert swap_locked(*swap_locked(snr, sp)) == (snr, sp)
        tracked, interfering = swap_locked(*swap_locked(snr, sp))
        unlocked = snr_gain(0.3, 0.1, sp, snr, ssr, 0.0, False).gain
        again = 1.0 / (1.0 + 0.3 + 0.1 + interfering) * tracked / snr
        assert again == pytest.approx(unlocked, rel=1e-12)

    @given(ratio, ratio)
    def test_no_pulses_reduces_to_continuous_plus_spoofing(self, a, c):
        assert snr_gain(a, 0.0, c, 1.0, 0.0, 0.0, False).gain == pytest.approx(
            1.0 / (1.0 + a + c), rel=1e-15)

    @given(betas, ratio, ratio, st.floats(min_value=1e-2, max_value=1e6),
           st.floats(min_value=1e-2, max_value=1e6))
    def test_locked_matches_oracle(self, beta, a, b, snr, ssr):
        got = snr_gain(a, b, spnr(snr, ssr), snr, ssr, beta, True)
        want = oracles.gain_locked(beta, a, b, snr, ssr)
        assert got.gain == pytest.approx(float(want), rel=1e-12)
        assert got.output_snr == pytest.approx(float(want * snr), rel=1e-12)


def test_window_validation():
    with pytest.raises(ValueError, match="inversion"):
        Window(80.0, 20.0)
    with pytest.raises(ValueError):
        ReceiverRfConfig(blanker_beta=1.0)

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from aokrwalk import KickParams, RatchetSpec, run_walk
from aokrwalk.analysis import (
    DomainError,
    EnergySeries,
    central_fraction,
    compare_walks,
    fit_power_law,
    mean_energy,
    side_peak_bins,
    side_peak_mass,
)
from aokrwalk.evolution import DistributionHistory, original_protocol, swapped_protocol

from conftest import resonant_start


def history_from(p, momenta):
    p = np.atleast_2d(p)
    return DistributionHistory(np.asarray(momenta), p, np.zeros_like(p), p.sum(axis=1), {})


class TestEnergy:
    def test_ratchet_start(self):
        spec, lat, st0 = resonant_start(0, 1.45)
        h = run_walk(swapped_protocol(), st0, 0, KickParams(1.45))
        assert mean_energy(h).values[0] == pytest.approx(0.25, abs=1e-15)

    def test_delta(self):
        n = np.arange(-3, 4)
        assert mean_energy(history_from(n == 0, n)).values[0] == 0.0

    def test_reflection_invariant(self, rng):
        n = np.arange(-10, 11)
        p = rng.random((4, n.size))
        p /= p.sum(axis=1, keepdims=True)
        a = mean_energy(history_from(p, n)).values
        b = mean_energy(history_from(p[:, ::-1], n)).values
        np.testing.assert_allclose(a, b, rtol=1e-14)

    def test_series_csv(self):
        s = EnergySeries(np.arange(3), np.array([0.25, 1.0, 2.5]))
        assert s.to_csv().splitlines() == ["j,E", "0,0.25", "1,1", "2,2.5"]

    def test_ballistic_resonant_walk(self):
        spec, lat, st0 = resonant_start(15, 1.45)
        h = run_walk(original_protocol(), st0, 15, KickParams(1.45))
        assert fit_power_law(mean_energy(h), (5, 15)).exponent > 1.8


class TestFit:
    @pytest.mark.parametrize("pref,exp", [(3.0, 2.0), (5.0, 1.0), (0.7, 1.37)])
    def test_pure_power_law(self, pref, exp):
        j = np.arange(16)
        fit = fit_power_law(EnergySeries(j, pref * j.astype(float) ** exp))
        assert fit.exponent == pytest.approx(exp, abs=1e-12)
        assert fit.stderr < 1e-7  # sqrt of roundoff-level residuals
        assert fit.prefactor == pytest.approx(pref, rel=1e-12)
        assert fit.fit_range == (2, 15)

    @given(exp=st.floats(0.2, 3.0), pref=st.floats(0.01, 100.0))
    @settings(max_examples=40, deadline=None)
    def test_recovers_any_exponent(self, exp, pref):
        j = np.arange(1, 21)
        assert fit_power_law(EnergySeries(j, pref * j ** exp), (1, 20)).exponent == pytest.approx(exp, abs=1e-12)

    def test_window_too_small(self):
        j = np.arange(16)
        with pytest.raises(ValueError, match="need >= 3"):
            fit_power_law(EnergySeries(j, j ** 2.0), (14, 15))

    def test_nonpositive_energy(self):
        j = np.arange(6)
        with pytest.raises(DomainError):
            fit_power_law(EnergySeries(j, np.array([0, 1, 0, 2, 3, 4.0])))

    def test_zero_step_in_window(self):
        j = np.arange(6)
        with pytest.raises(DomainError):
            fit_power_law(EnergySeries(j, j + 1.0), (0, 5))

    def test_json(self):
        j = np.arange(1, 10)
        rec = json.loads(fit_power_law(EnergySeries(j, 2.0 * j)).to_json())
        assert rec["fit_range"] == [2, 9] and rec["exponent"] == pytest.approx(1.0)


class TestCentralFraction:
    def test_delta(self):
        n = np.arange(-4, 5)
        assert central_fraction((n == 0).astype(float), n, 0) == 1.0

    def test_uniform(self):
        n = np.arange(-10, 11)
        assert central_fraction(np.full(21, 1 / 21), n, 2) == pytest.approx(5 / 21, abs=1e-15)

    def test_negative_halfwidth(self):
        with pytest.raises(ValueError):
            central_fraction([1.0], [0], -1)

    def test_decreases_with_ratchet_size(self):
        vals = []
        for classes in ([0, 1], [0, 1, 2], [0, 1, 2, 3, 4]):
            spec, lat, st0 = resonant_start(20, 1.45, classes)
            h = run_walk(swapped_protocol(), st0, 20, KickParams(1.45))
            vals.append(central_fraction(h.at(20), lat.momenta, 2))
        assert vals[0] > vals[1] > vals[2]

    def test_side_peaks_pick_outermost(self):
        n = np.arange(-8, 9)
        p = np.zeros(n.size)
        p[n == -6] = 0.3   # largest on the left
        p[n == -8] = 0.1   # outermost and high enough
        p[n == 5] = 0.2
        p[n == 7] = 0.01   # too small to count
        assert side_peak_bins(p, n) == (-8, 5)
        assert side_peak_mass(p, n) == pytest.approx(0.3)


class TestCompare:
    def test_scaled_copy(self, rng):
        x = rng.random((5, 7)) + 0.1
        r = compare_walks(3 * x, x, 3.0)
        assert r.total_error == 0.0 and r.skipped == 0
        assert not r.pixels.any()

    def test_double(self, rng):
        x = rng.random((4, 4)) + 0.1
        r = compare_walks(2 * 1.5 * x, x, 1.5)
        np.testing.assert_allclose(r.pixels, 1.0, rtol=1e-15)
        assert r.total_error == pytest.approx(16.0)

    @given(arrays(np.float64, (3, 5), elements=st.floats(1e-6, 1e3)))
    def test_self_is_zero(self, x):
        assert compare_walks(x, x, 1.0).total_error == 0.0

    def test_zero_prediction_skipped(self):
        pred = np.array([[0.0, 1.0], [2.0, 0.0]])
        obs = np.array([[0.5, 1.0], [1.0, 0.0]])
        r = compare_walks(obs, pred)
        assert r.skipped == 2
        assert np.isnan(r.pixels[0, 0])
        assert r.total_error == pytest.approx(0.5)
        assert r.summary()["evaluated_pixels"] == 2

    @pytest.mark.parametrize("obs,pred,a", [
        (np.ones((2, 3)), np.ones((3, 2)), 1.0),
        (np.ones(3), -np.ones(3), 1.0),
        (np.ones(3), np.ones(3), 0.0),
    ])
    def test_bad_input(self, obs, pred, a):
        with pytest.raises(ValueError):
            compare_walks(obs, pred, a)

"""Tests for the two-peak resolution and repeated-measurement scenarios."""

import numpy as np
import pytest

from qmeasure.gridsim import GaussianSpec, Grid1D, sample_gaussian
from qmeasure.scenarios import (
    RESOLVED_RATIO,
    double_gaussian,
    repeated_measurement_scenario,
    two_peak_scenario,
)


def convolution_oracle(lam, separation, peak_width, probe_width):
    """Valley-to-peak ratio from direct evaluation of the smeared density.

    The readout density of a well-separated symmetric pair is the equal
    mix of two Gaussians at +/- lam*separation/2 whose variance picks up
    the probe width: v = probe_width^2 + (lam*peak_width)^2.
    """
    var = probe_width**2 + (lam * peak_width) ** 2
    centers = np.array([-lam * separation / 2, lam * separation / 2])
    grid = np.linspace(centers[0] - 6 * np.sqrt(var), centers[1] + 6 * np.sqrt(var), 20001)
    dens = np.exp(-((grid - centers[0]) ** 2) / (2 * var)) + np.exp(
        -((grid - centers[1]) ** 2) / (2 * var)
    )
    valley = dens[np.argmin(np.abs(grid))]
    return valley / dens.max()


class TestDoubleGaussian:
    def test_normalized_and_symmetric(self):
        grid = Grid1D.default()
        wf = double_gaussian(grid, 1.0, 0.1)
        assert wf.is_normalized(1e-10)
        np.testing.assert_allclose(wf.samples, wf.samples[::-1], atol=1e-12)


class TestTwoPeak:
    def test_coarse_probe_merges_at_unit_scaling(self):
        report = two_peak_scenario(lam=1.0, separation=1.0, probe_width=4.0)
        assert not report.unscaled.resolved
        assert not report.scaled.resolved  # scaled run is also lam=1 here

    def test_large_scaling_resolves(self):
        report = two_peak_scenario(lam=20.0, separation=1.0, probe_width=4.0)
        assert report.scaled.resolved
        assert not report.unscaled.resolved

    def test_narrow_probe_resolves_without_scaling(self):
        report = two_peak_scenario(lam=1.0, separation=1.0, probe_width=0.05)
        assert report.unscaled.resolved

    def test_ratio_matches_convolution_oracle(self):
        for lam, probe_width in ((1.0, 4.0), (20.0, 4.0), (6.0, 2.0)):
            report = two_peak_scenario(lam=lam, separation=1.0, probe_width=probe_width)
            oracle = convolution_oracle(lam, 1.0, report.peak_width, probe_width)
            got = report.scaled.valley_peak_ratio
            assert got == pytest.approx(min(oracle, 1.0), abs=0.02)
            assert report.scaled.resolved == (oracle < RESOLVED_RATIO)

    def test_distribution_normalized(self):
        report = two_peak_scenario(lam=20.0, separation=1.0, probe_width=4.0)
        assert report.scaled.distribution.integral() == pytest.approx(1.0, abs=1e-4)

    def test_validation(self):
        with pytest.raises(ValueError, match="separation"):
            two_peak_scenario(1.0, -1.0, 4.0)
        with pytest.raises(ValueError, match="probe width"):
            two_peak_scenario(1.0, 1.0, 0.0)

    def test_summary_shape(self):
        report = two_peak_scenario(lam=2.0, separation=1.0, probe_width=1.0)
        summary = report.summary()
        assert set(summary) == {
            "separation",
            "probe_width",
            "peak_width",
            "scaled",
            "unscaled",
        }
        assert set(summary["scaled"]) == {"lambda", "valley_peak_ratio", "resolved"}


class TestRepeatedMeasurement:
    def setup_method(self):
        self.grid = Grid1D.default()
        self.probe = sample_gaussian(GaussianSpec(0.0, 0.5), self.grid)

    def test_swap_scheme_pins_post_state(self):
        report = repeated_measurement_scenario("ssm", 10, self.probe, seed=7)
        assert report.center_spread < 1e-6

    def test_contractive_scheme_tracks_outcomes(self):
        lam = 2.0
        report = repeated_measurement_scenario("csm", 10, self.probe, seed=7, lam=lam)
        for round_ in report.rounds:
            assert round_.post_center == pytest.approx(round_.outcome / lam, abs=1e-3)
        assert report.center_spread > 0.01  # outcomes wander, unlike the swap scheme

    def test_single_round_rejected(self):
        with pytest.raises(ValueError, match="at least 2"):
            repeated_measurement_scenario("ssm", 1, self.probe, seed=7)

    def test_unknown_scheme_rejected(self):
        with pytest.raises(ValueError, match="scheme"):
            repeated_measurement_scenario("vnm", 5, self.probe, seed=7)

    def test_deterministic_given_seed(self):
        a = repeated_measurement_scenario("csm", 6, self.probe, seed=11)
        b = repeated_measurement_scenario("csm", 6, self.probe, seed=11)
        assert a.outcomes == b.outcomes
        assert a.post_centers == b.post_centers

    def test_summary_flags_artifact_metric(self):
        report = repeated_measurement_scenario("ssm", 4, self.probe, seed=3)
        summary = report.summary()
        assert "resolution_window" in summary
        assert "defined by this package" in summary["metric_note"]

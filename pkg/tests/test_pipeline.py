import pytest

from jcvitals.channel import Scene, simulate_capture
from jcvitals.pipeline import ProcessingConfig, process_capture, process_with_subcarriers
from jcvitals.vitals import spectral_correlation

from conftest import capture_of, make_target


class TestProcessCapture:
    def test_single_person_end_to_end(self, default_spec, default_symbol):
        target = make_target()
        capture = capture_of([target], default_spec, default_symbol, snr_db=20.0)
        result = process_capture(capture, symbol=default_symbol)
        assert len(result.targets) == 1
        tr = result.targets[0]
        assert abs(tr.detection.range_m - 2.0) <= result.profiles.bin_width_m
        assert tr.estimate.br_bpm == pytest.approx(16.0, abs=1.0)
        assert tr.estimate.hr_bpm == pytest.approx(73.0, abs=2.0)

    def test_two_persons_distinct_bins(self, default_spec, default_symbol):
        a = make_target(rest_range_m=1.6, rng_seed=1)
        b = make_target(rest_range_m=3.44, breathing_rate_hz=19 / 60,
                        heart_rate_hz=87 / 60, rng_seed=2)
        capture = capture_of([a, b], default_spec, default_symbol, snr_db=20.0)
        result = process_capture(capture, symbol=default_symbol)
        assert len(result.targets) == 2
        assert result.targets[0].detection.bin_index != result.targets[1].detection.bin_index
        assert result.targets[0].detection.range_m < result.targets[1].detection.range_m
        assert result.targets[0].estimate.br_bpm == pytest.approx(16.0, abs=1.0)
        assert result.targets[1].estimate.br_bpm == pytest.approx(19.0, abs=1.0)

    def test_empty_scene_zero_targets(self, default_spec, default_symbol):
        scene = Scene(targets=[])
        capture = simulate_capture(scene, default_symbol, default_spec, n_frames=800,
                                   frame_rate_hz=50.0)
        result = process_capture(capture, symbol=default_symbol)
        assert result.targets == []

    def test_record_serialization(self, default_spec, default_symbol):
        target = make_target()
        capture = capture_of([target], default_spec, default_symbol, snr_db=20.0)
        result = process_capture(capture, symbol=default_symbol)
        record = result.targets[0].to_record("sitting_still_2m")
        assert record["scenario_id"] == "sitting_still_2m"
        assert record["target_id"] == 0
        assert isinstance(record["br_bpm"], float)
        assert set(record) >= {"range_m", "hr_bpm", "br_confidence", "hr_confidence",
                               "harmonic_flag"}

    def test_averaging_factor_reduces_rate(self, default_spec, default_symbol):
        target = make_target()
        capture = capture_of([target], default_spec, default_symbol, snr_db=20.0)
        config = ProcessingConfig(averaging_factor=2)
        result = process_capture(capture, symbol=default_symbol, config=config)
        assert result.series.frame_rate_hz == pytest.approx(25.0)
        assert result.targets[0].estimate.br_bpm == pytest.approx(16.0, abs=1.0)


class TestSubcarrierSweep:
    def test_rates_invariant_across_counts(self, default_spec, default_symbol):
        target = make_target()
        capture = capture_of([target], default_spec, default_symbol, snr_db=20.0)
        results = process_with_subcarriers(capture, [10, 40, 1024], symbol=default_symbol)
        brs = {c: r.targets[0].estimate.br_bpm for c, r in results.items()}
        hrs = {c: r.targets[0].estimate.hr_bpm for c, r in results.items()}
        bin_bpm = 60 * 50.0 / (4 * capture.n_frames)
        assert max(brs.values()) - min(brs.values()) <= bin_bpm
        assert max(hrs.values()) - min(hrs.values()) <= bin_bpm

    def test_spectral_correlation_across_counts(self, default_spec, default_symbol):
        target = make_target()
        capture = capture_of([target], default_spec, default_symbol, snr_db=20.0)
        results = process_with_subcarriers(capture, [10, 1024], symbol=default_symbol)
        corr = spectral_correlation(
            results[10].targets[0].estimate.br_spectrum,
            results[1024].targets[0].estimate.br_spectrum,
        )
        assert corr >= 0.95

    def test_three_targets_resolved_only_at_full_band(self, default_spec, default_symbol):
        targets = [
            make_target(rest_range_m=1.6, rng_seed=1),
            make_target(rest_range_m=2.5, breathing_rate_hz=14 / 60, rng_seed=2),
            make_target(rest_range_m=3.44, breathing_rate_hz=19 / 60, rng_seed=3),
        ]
        capture = capture_of(targets, default_spec, default_symbol, snr_db=20.0,
                             duration_s=20.0)
        results = process_with_subcarriers(capture, [10, 40, 1024], symbol=default_symbol,
                                           config=ProcessingConfig(max_targets=3))
        assert len(results[1024].detections) == 3
        assert len(results[40].detections) < 3
        assert len(results[10].detections) < 3

import json

import numpy as np
import pytest

from jcvitals.config import ConfigError, config_digest, load_scenario, validate_scenario
from jcvitals.scenarios import describe_scenarios, get_scenario, scenario_ids


def minimal_config(**overrides):
    cfg = {
        "scenario_id": "test",
        "seed": 5,
        "duration_s": 16.0,
        "frame_rate_hz": 50.0,
        "scene": {
            "snr_db": 20.0,
            "targets": [
                {
                    "rest_range_m": 2.0,
                    "vitals": {"breathing_rate_hz": 0.25, "breathing_amplitude_m": 6e-3},
                }
            ],
        },
    }
    cfg.update(overrides)
    return cfg


class TestValidation:
    def test_minimal_config_accepted(self):
        scenario = validate_scenario(minimal_config())
        assert scenario.scenario_id == "test"
        assert scenario.n_frames == 800

    def test_unknown_key_rejected(self):
        cfg = minimal_config()
        cfg["unknown_setting"] = 1
        with pytest.raises(ConfigError, match="unknown_setting"):
            validate_scenario(cfg)

    def test_nested_unknown_key_rejected_with_path(self):
        cfg = minimal_config()
        cfg["scene"]["targets"][0]["vitals"]["typo_hz"] = 1.0
        with pytest.raises(ConfigError, match="scene/targets/0/vitals"):
            validate_scenario(cfg)

    def test_zero_duration_rejected(self):
        with pytest.raises(ConfigError, match="duration_s"):
            validate_scenario(minimal_config(duration_s=0.0))

    def test_syntax_error_reports_line(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "scenario_id": "x",\n  broken\n}\n')
        with pytest.raises(ConfigError, match="line 3"):
            load_scenario(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_scenario(tmp_path / "nope.json")

    def test_load_round_trip(self, tmp_path):
        path = tmp_path / "ok.json"
        path.write_text(json.dumps(minimal_config()))
        scenario = load_scenario(path)
        assert scenario.duration_s == 16.0


class TestSceneConstruction:
    def test_build_scene_deterministic(self):
        scenario = validate_scenario(minimal_config())
        a = scenario.build_scene()
        b = scenario.build_scene()
        assert np.array_equal(a.targets[0].trace.samples, b.targets[0].trace.samples)

    def test_seed_changes_sway_noise(self):
        cfg = minimal_config()
        cfg["scene"]["targets"][0]["vitals"]["sway_rms_m"] = 1e-3
        a = validate_scenario(cfg).build_scene(seed=1)
        b = validate_scenario(cfg).build_scene(seed=2)
        assert not np.array_equal(a.targets[0].trace.samples, b.targets[0].trace.samples)

    def test_schedule_converted_to_segments(self):
        cfg = minimal_config()
        cfg["scene"]["targets"][0]["schedule"] = [
            {"start_s": 0.0, "end_s": 8.0, "label": "normal"},
            {"start_s": 8.0, "end_s": None, "label": "breath_hold"},
        ]
        scene = validate_scenario(cfg).build_scene()
        segments = scene.targets[0].trace.segments
        assert [s.label for s in segments] == ["normal", "breath_hold"]
        assert segments[1].start == 400 and segments[1].end == 800

    def test_walking_target(self):
        cfg = minimal_config()
        cfg["scene"]["targets"][0]["walking_speed_m_s"] = 0.5
        scene = validate_scenario(cfg).build_scene()
        assert scene.targets[0].trace.samples.max() > 1.0

    def test_ground_truth_ordered_by_range(self):
        cfg = minimal_config()
        cfg["scene"]["targets"] = [
            {"rest_range_m": 3.44, "vitals": {"breathing_rate_hz": 19 / 60}},
            {"rest_range_m": 1.6, "vitals": {"breathing_rate_hz": 16 / 60}},
        ]
        truth = validate_scenario(cfg).ground_truth()
        assert [t["range_m"] for t in truth] == [1.6, 3.44]
        assert truth[0]["br_bpm"] == pytest.approx(16.0)

    def test_ground_truth_absent_for_zero_amplitude(self):
        cfg = minimal_config()
        cfg["scene"]["targets"][0]["vitals"]["breathing_amplitude_m"] = 0.0
        truth = validate_scenario(cfg).ground_truth()
        assert truth[0]["br_bpm"] is None

    def test_digest_stable_under_key_order(self):
        a = {"x": 1, "y": {"b": 2, "a": 3}}
        b = {"y": {"a": 3, "b": 2}, "x": 1}
        assert config_digest(a) == config_digest(b)


class TestScenarioLibrary:
    def test_all_builtins_validate(self):
        for sid in scenario_ids():
            scenario = get_scenario(sid)
            assert scenario.scenario_id == sid
            scenario.waveform_spec()
            scenario.processing_config()

    def test_library_covers_experiment_inventory(self):
        ids = set(scenario_ids())
        expected_flavors = {
            "sitting_still_1m", "sitting_still_2m", "sitting_still_3m", "sitting_still_4m",
            "sitting_still_2m_sweatshirt", "sitting_still_4m_sweatshirt",
            "holding_breath", "intermittent_breathing", "desk_moving",
            "lying_tshirt", "lying_blanket",
            "angle_0", "angle_30", "angle_60", "angle_90",
            "angle_m30", "angle_m60", "angle_m90", "angle_m180",
            "standing_still", "standing_moving",
            "walking_slow", "walking_fast",
            "nlos", "two_persons", "three_persons", "harmonic_confusion",
        }
        assert expected_flavors <= ids

    def test_unknown_id_raises(self):
        with pytest.raises(KeyError, match="unknown scenario"):
            get_scenario("does_not_exist")

    def test_seed_override(self):
        assert get_scenario("nlos", seed=1234).seed == 1234

    def test_descriptions_present(self):
        for item in describe_scenarios():
            assert item["description"]

    def test_builtin_scenes_buildable(self):
        # spot-check a representative subset end to end (traces + scene)
        for sid in ("sitting_still_2m", "nlos", "two_persons", "walking_fast",
                    "intermittent_breathing"):
            scene = get_scenario(sid).build_scene()
            assert scene.targets

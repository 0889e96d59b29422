"""Scenario configuration: JSON format, schema validation, and construction
of simulator/processing objects from a validated config.

All physical quantities carry units in their key names (_hz, _m, _s, _db).
Unknown keys are rejected.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import jsonschema
import numpy as np

from .channel import ClutterPoint, Scene, SceneTarget
from .physio import BREATH_HOLD, MOVING, NORMAL, Segment, VitalParams, synthesize_displacement, walking_trajectory
from .pipeline import ProcessingConfig
from .vitals import VitalsConfig
from .waveform import WaveformSpec, select_subcarriers


class ConfigError(ValueError):
    """Invalid scenario configuration; message carries the location."""


_VITALS_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "breathing_rate_hz": {"type": "number", "minimum": 0.1, "maximum": 0.7},
        "breathing_amplitude_m": {"type": "number", "minimum": 0.0, "maximum": 0.05},
        "breathing_harmonic_weights": {
            "type": "array",
            "items": {"type": "number", "minimum": -1.0, "maximum": 1.0},
            "maxItems": 4,
        },
        "heart_rate_hz": {"type": "number", "minimum": 0.7, "maximum": 3.0},
        "heart_amplitude_m": {"type": "number", "minimum": 0.0, "maximum": 0.002},
        "projection_angle_deg": {"type": "number", "minimum": -180.0, "maximum": 180.0},
        "sway_rms_m": {"type": "number", "minimum": 0.0},
    },
}

_SEGMENT_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["label"],
    "properties": {
        "start_s": {"type": "number", "minimum": 0.0},
        "end_s": {"type": ["number", "null"]},
        "label": {"enum": [NORMAL, BREATH_HOLD, MOVING]},
    },
}

_TARGET_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["rest_range_m"],
    "properties": {
        "rest_range_m": {"type": "number", "exclusiveMinimum": 0.0},
        "reflectivity": {"type": "number", "minimum": 0.0, "maximum": 1.0},
        "nlos_attenuation_db": {"type": "number", "minimum": 0.0},
        "walking_speed_m_s": {"type": "number", "minimum": 0.0},
        "vitals": _VITALS_SCHEMA,
        "schedule": {"type": "array", "items": _SEGMENT_SCHEMA},
    },
}

SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["scenario_id", "duration_s", "frame_rate_hz", "scene"],
    "properties": {
        "scenario_id": {"type": "string", "minLength": 1},
        "description": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "duration_s": {"type": "number", "exclusiveMinimum": 0.0},
        "frame_rate_hz": {"type": "number", "exclusiveMinimum": 0.0},
        "averaging_factor": {"type": "integer", "minimum": 1},
        "waveform": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "carrier_frequency_hz": {"type": "number", "exclusiveMinimum": 0.0},
                "num_subcarriers": {"type": "integer", "minimum": 1},
                "subcarrier_spacing_hz": {"type": "number", "exclusiveMinimum": 0.0},
                "samples_per_pulse": {"type": "integer", "minimum": 1},
                "pulse_duration_s": {"type": "number", "exclusiveMinimum": 0.0},
                "active_subcarriers": {"type": "integer", "minimum": 1},
            },
        },
        "scene": {
            "type": "object",
            "additionalProperties": False,
            "required": ["targets"],
            "properties": {
                "snr_db": {"type": ["number", "null"]},
                "cable_delay_range_m": {"type": "number", "minimum": 0.0},
                "targets": {"type": "array", "items": _TARGET_SCHEMA},
                "clutter": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["range_m", "amplitude"],
                        "properties": {
                            "range_m": {"type": "number", "minimum": 0.0},
                            "amplitude": {"type": "number", "minimum": 0.0},
                        },
                    },
                },
            },
        },
        "analysis": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "br_band_hz": {
                    "type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2,
                },
                "hr_band_hz": {
                    "type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2,
                },
                "zero_pad_factor": {"type": "integer", "minimum": 1},
                "confidence_threshold": {"type": "number", "minimum": 0.0, "maximum": 1.0},
                "harmonic_tolerance_hz": {"type": "number", "minimum": 0.0},
                "min_duration_s": {"type": "number", "minimum": 0.0},
                "detrend": {"type": "boolean"},
                "window": {"type": ["string", "null"]},
                "remove_static_clutter": {"type": "boolean"},
                "max_targets": {"type": "integer", "minimum": 1},
                "min_prominence_db": {"type": "number"},
                "max_below_peak_db": {"type": "number"},
                "subcarrier_counts": {
                    "type": "array", "items": {"type": "integer", "minimum": 1},
                },
            },
        },
    },
}


@dataclass
class Scenario:
    """A validated scenario: waveform, scene recipe and analysis settings."""

    raw: dict = field(repr=False)

    @property
    def scenario_id(self) -> str:
        return self.raw["scenario_id"]

    @property
    def seed(self) -> int:
        return self.raw.get("seed", 0)

    @property
    def duration_s(self) -> float:
        return self.raw["duration_s"]

    @property
    def frame_rate_hz(self) -> float:
        return self.raw["frame_rate_hz"]

    @property
    def n_frames(self) -> int:
        return int(round(self.duration_s * self.frame_rate_hz))

    @property
    def averaging_factor(self) -> int:
        return self.raw.get("averaging_factor", 1)

    @property
    def subcarrier_counts(self) -> list:
        return list(self.raw.get("analysis", {}).get("subcarrier_counts", [10, 40, 1024]))

    def waveform_spec(self) -> WaveformSpec:
        w = self.raw.get("waveform", {})
        spec = WaveformSpec(
            carrier_frequency_hz=w.get("carrier_frequency_hz", 26.5e9),
            num_subcarriers=w.get("num_subcarriers", 1024),
            subcarrier_spacing_hz=w.get("subcarrier_spacing_hz", 1.0e6),
            samples_per_pulse=w.get("samples_per_pulse", 2500),
            pulse_duration_s=w.get("pulse_duration_s", 1.0e-6),
        )
        if "active_subcarriers" in w:
            spec = select_subcarriers(spec, w["active_subcarriers"])
        return spec

    def _segments(self, schedule: list, n: int) -> list:
        segments = []
        for item in schedule:
            start = int(round(item.get("start_s", 0.0) * self.frame_rate_hz))
            end_s = item.get("end_s")
            end = n if end_s is None else int(round(end_s * self.frame_rate_hz))
            segments.append(Segment(start=start, end=min(end, n), label=item["label"]))
        return segments

    def build_scene(self, seed: int | None = None) -> Scene:
        """Instantiate the scene; target traces get per-target child seeds."""
        seed = self.seed if seed is None else seed
        cfg = self.raw["scene"]
        children = np.random.SeedSequence(seed).spawn(max(1, len(cfg["targets"])) + 1)
        targets = []
        for i, tc in enumerate(cfg["targets"]):
            params = VitalParams(**tc.get("vitals", {}))
            trace_seed = int(children[i].generate_state(1)[0])
            speed = tc.get("walking_speed_m_s")
            if speed is not None:
                trace = walking_trajectory(
                    start_range_m=tc["rest_range_m"],
                    speed_m_s=speed,
                    duration_s=self.duration_s,
                    frame_rate_hz=self.frame_rate_hz,
                    params=params,
                    rng_seed=trace_seed,
                )
            else:
                schedule = self._segments(tc.get("schedule", []), self.n_frames) or None
                trace = synthesize_displacement(
                    params,
                    duration_s=self.duration_s,
                    frame_rate_hz=self.frame_rate_hz,
                    schedule=schedule,
                    rng_seed=trace_seed,
                )
            targets.append(
                SceneTarget(
                    rest_range_m=tc["rest_range_m"],
                    trace=trace,
                    reflectivity=tc.get("reflectivity", 0.67),
                    nlos_attenuation_db=tc.get("nlos_attenuation_db", 0.0),
                )
            )
        clutter = [
            ClutterPoint(range_m=c["range_m"], amplitude=c["amplitude"])
            for c in cfg.get("clutter", [])
        ]
        return Scene(
            targets=targets,
            static_clutter=clutter,
            cable_delay_range_m=cfg.get("cable_delay_range_m", 0.0),
            snr_db=cfg.get("snr_db", 20.0),
        )

    def processing_config(self) -> ProcessingConfig:
        a = self.raw.get("analysis", {})
        vitals = VitalsConfig(
            br_band_hz=tuple(a.get("br_band_hz", (0.15, 0.5))),
            hr_band_hz=tuple(a.get("hr_band_hz", (0.8, 2.0))),
            zero_pad_factor=a.get("zero_pad_factor", 4),
            confidence_threshold=a.get("confidence_threshold", VitalsConfig().confidence_threshold),
            harmonic_tolerance_hz=a.get("harmonic_tolerance_hz", 0.05),
            min_duration_s=a.get("min_duration_s", 15.0),
            detrend=a.get("detrend", True),
        )
        return ProcessingConfig(
            cable_offset_m=self.raw["scene"].get("cable_delay_range_m", 0.0),
            averaging_factor=self.averaging_factor,
            window=a.get("window"),
            remove_static_clutter=a.get("remove_static_clutter", False),
            max_targets=a.get("max_targets", 4),
            min_prominence_db=a.get("min_prominence_db", 10.0),
            max_below_peak_db=a.get("max_below_peak_db", 10.0),
            vitals=vitals,
        )

    def ground_truth(self) -> list:
        """Per-target truth records, ordered by increasing rest range."""
        records = []
        targets = sorted(self.raw["scene"]["targets"], key=lambda t: t["rest_range_m"])
        for i, tc in enumerate(targets):
            params = VitalParams(**tc.get("vitals", {}))
            breathing = params.breathing_amplitude_m > 0 and params.radial_factor > 0
            heart = params.heart_amplitude_m > 0 and params.radial_factor > 0
            records.append(
                {
                    "scenario_id": self.scenario_id,
                    "target_id": i,
                    "range_m": tc["rest_range_m"],
                    "br_bpm": 60.0 * params.breathing_rate_hz if breathing else None,
                    "hr_bpm": 60.0 * params.heart_rate_hz if heart else None,
                }
            )
        return records


def validate_scenario(config: dict) -> Scenario:
    try:
        jsonschema.validate(config, SCENARIO_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"at {path}: {exc.message}") from exc
    return Scenario(raw=config)


def load_scenario(path) -> Scenario:
    try:
        with open(path) as fh:
            config = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from exc
    return validate_scenario(config)


def config_digest(config: dict) -> str:
    """Stable content hash of a config for run manifests."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()

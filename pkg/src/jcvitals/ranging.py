"""Range calibration of the impulse response and per-target peak selection."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .constants import SPEED_OF_LIGHT
from .receiver import ChannelFrameSeries

_POWER_FLOOR = 1e-300  # keeps log10 finite on exact zeros


@dataclass(eq=False)
class RangeProfileSeries:
    """Impulse-response magnitudes on a calibrated range axis."""

    range_axis_m: np.ndarray
    profiles: np.ndarray  # N x P, |h|
    range_resolution_m: float
    bin_width_m: float
    frame_rate_hz: float

    def mean_power_db(self) -> np.ndarray:
        power = np.mean(self.profiles**2, axis=0)
        return 10.0 * np.log10(np.maximum(power, _POWER_FLOOR))

    def to_csv(self, path) -> None:
        """Export the slow-time-averaged profile as (range_m, power_db)."""
        power = self.mean_power_db()
        with open(path, "w") as fh:
            fh.write("range_m,power_db\n")
            for r, p in zip(self.range_axis_m, power):
                fh.write(f"{r:.4f},{p:.3f}\n")


@dataclass
class TargetDetection:
    bin_index: int
    range_m: float
    mean_power_db: float
    prominence_db: float


def to_range_profiles(
    series: ChannelFrameSeries,
    cable_offset_m: float = 0.0,
    remove_static: bool = False,
) -> RangeProfileSeries:
    """Scale the fast-time axis to meters and subtract the cable offset.

    ``remove_static`` subtracts the per-bin slow-time mean of the complex
    impulse response before taking magnitudes (static-clutter suppression,
    off by default).
    """
    if cable_offset_m < 0:
        raise ValueError("cable_offset_m must be >= 0")
    spec = series.spec
    impulse = series.impulse
    if remove_static:
        impulse = impulse - impulse.mean(axis=0, keepdims=True)
    bin_width = SPEED_OF_LIGHT / (2.0 * spec.sample_rate_hz)
    axis = np.arange(spec.samples_per_pulse) * bin_width - cable_offset_m
    resolution = SPEED_OF_LIGHT / (2.0 * spec.occupied_bandwidth_hz)
    return RangeProfileSeries(
        range_axis_m=axis,
        profiles=np.abs(impulse),
        range_resolution_m=resolution,
        bin_width_m=bin_width,
        frame_rate_hz=series.frame_rate_hz,
    )


def detect_targets(
    profiles: RangeProfileSeries,
    max_targets: int = 4,
    min_prominence_db: float = 10.0,
    max_below_peak_db: float = 10.0,
) -> list[TargetDetection]:
    """Peaks of the slow-time-averaged power profile, strongest first.

    A peak must clear the noise floor (median of the dB profile) by
    ``min_prominence_db``, be at least one range resolution away from a
    stronger peak, and lie within ``max_below_peak_db`` of the strongest
    detection (rejects range sidelobes of strong returns). An empty list is a
    valid result: nothing exceeded the threshold.
    """
    if max_targets < 1:
        raise ValueError("max_targets must be >= 1")
    power_db = profiles.mean_power_db()
    floor_db = float(np.median(power_db))
    spacing_bins = max(1, int(round(profiles.range_resolution_m / profiles.bin_width_m)))
    peaks, _ = find_peaks(power_db, height=floor_db + min_prominence_db, distance=spacing_bins)
    if peaks.size == 0:
        return []

    order = np.argsort(power_db[peaks])[::-1]
    peaks = peaks[order]
    strongest = power_db[peaks[0]]
    peaks = [b for b in peaks if power_db[b] >= strongest - max_below_peak_db]

    return [
        TargetDetection(
            bin_index=int(b),
            range_m=float(profiles.range_axis_m[b]),
            mean_power_db=float(power_db[b]),
            prominence_db=float(power_db[b] - floor_db),
        )
        for b in peaks[:max_targets]
    ]


def extract_bin_series(series: ChannelFrameSeries, detection: TargetDetection) -> np.ndarray:
    """Complex impulse-response value at the detected bin, per frame."""
    if not 0 <= detection.bin_index < series.impulse.shape[1]:
        raise ValueError(f"bin_index {detection.bin_index} out of range")
    return series.impulse[:, detection.bin_index].copy()

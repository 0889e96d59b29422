"""Propagation of the OFDM pulse through a scene of moving reflectors.

The geometry is treated as monostatic (co-located antennas): every return is
delayed by the round trip 2*(range + displacement + cable offset)/c and the
carrier phase rotates by exp(-j*2*pi*f*tau). Fractional-sample delays are
applied in the frequency domain (per-subcarrier linear phase) so sub-mm
motion survives; time-domain frames are the inverse DFT of the delayed band,
which is exact for gapless periodic pulse transmission.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import SPEED_OF_LIGHT
from .physio import DisplacementTrace
from .waveform import BasebandSymbol, WaveformSpec


@dataclass
class SceneTarget:
    """One moving reflector (person)."""

    rest_range_m: float
    trace: DisplacementTrace
    reflectivity: float = 0.67  # amplitude coefficient, ~45% reflected power
    nlos_attenuation_db: float = 0.0

    def __post_init__(self):
        if self.rest_range_m <= 0:
            raise ValueError("rest_range_m must be positive")
        if not 0.0 <= self.reflectivity <= 1.0:
            raise ValueError("reflectivity must be in [0, 1]")
        if self.nlos_attenuation_db < 0:
            raise ValueError("nlos_attenuation_db must be >= 0")

    @property
    def amplitude(self) -> float:
        return self.reflectivity * 10.0 ** (-self.nlos_attenuation_db / 20.0)


@dataclass
class ClutterPoint:
    """Static reflector at a fixed range."""

    range_m: float
    amplitude: float

    def __post_init__(self):
        if self.range_m < 0:
            raise ValueError("clutter range_m must be >= 0")
        if self.amplitude < 0:
            raise ValueError("clutter amplitude must be >= 0")


@dataclass
class Scene:
    targets: list = field(default_factory=list)
    static_clutter: list = field(default_factory=list)
    cable_delay_range_m: float = 0.0
    snr_db: float | None = None  # None: noiseless; referenced to strongest target return

    def __post_init__(self):
        if self.cable_delay_range_m < 0:
            raise ValueError("cable_delay_range_m must be >= 0")


@dataclass(eq=False)
class SlowFastMatrix:
    """N x P complex received samples: rows = pulses (slow time), columns =
    samples within a pulse (fast time)."""

    frames: np.ndarray
    frame_rate_hz: float
    spec: WaveformSpec

    def __post_init__(self):
        self.frames = np.atleast_2d(np.asarray(self.frames))
        if self.frames.shape[1] != self.spec.samples_per_pulse:
            raise ValueError("fast-time length must equal spec.samples_per_pulse")
        if self.frames.shape[0] < 1:
            raise ValueError("need at least one frame")
        if not np.all(np.isfinite(self.frames)):
            raise ValueError("capture contains non-finite samples")

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]


def max_unambiguous_range(spec: WaveformSpec) -> float:
    """One-way range beyond which a return wraps into the next pulse."""
    return SPEED_OF_LIGHT * spec.pulse_duration_s / 2.0


def _round_trip_delays(scene: Scene, target: SceneTarget, n_frames: int) -> np.ndarray:
    path = target.rest_range_m + target.trace.samples[:n_frames] + scene.cable_delay_range_m
    return 2.0 * path / SPEED_OF_LIGHT


def simulate_capture(
    scene: Scene,
    symbol: BasebandSymbol,
    spec: WaveformSpec,
    n_frames: int,
    rng_seed: int = 0,
    frame_rate_hz: float | None = None,
) -> SlowFastMatrix:
    """Synthesize the raw slow/fast-time sample stream for ``scene``.

    Each frame is the superposition of every target's delayed, phase-rotated
    pulse plus static clutter plus (optionally) circular complex white noise
    whose power is set ``snr_db`` below the strongest target's return power.
    Deterministic for a given seed.
    """
    if symbol.spec != spec:
        raise ValueError("symbol was built for a different waveform spec")
    if n_frames < 1:
        raise ValueError("n_frames must be >= 1")

    rates = {t.trace.sample_rate_hz for t in scene.targets}
    if len(rates) > 1:
        raise ValueError("all target traces must share one frame rate")
    if rates:
        trace_rate = rates.pop()
        if frame_rate_hz is not None and not math.isclose(frame_rate_hz, trace_rate):
            raise ValueError("frame_rate_hz disagrees with target traces")
        frame_rate_hz = trace_rate
    elif frame_rate_hz is None:
        raise ValueError("frame_rate_hz is required for a scene with no targets")

    for t in scene.targets:
        if len(t.trace.samples) < n_frames:
            raise ValueError("target trace shorter than n_frames")

    f_rf = spec.carrier_frequency_hz + spec.baseband_frequencies_hz()  # (A,)
    active = spec.active_indices
    x_active = symbol.freq_domain[active]

    max_delay = spec.pulse_duration_s
    transfer = np.zeros((n_frames, active.size), dtype=complex)
    target_power = []
    for target in scene.targets:
        tau = _round_trip_delays(scene, target, n_frames)  # (N,)
        if tau.max() > max_delay:
            raise ValueError(
                f"target at {target.rest_range_m} m exceeds the unambiguous "
                f"range {max_unambiguous_range(spec):.1f} m (aliased delay)"
            )
        transfer += target.amplitude * np.exp(-2j * np.pi * np.outer(tau, f_rf))
        # flat band: every frame of this return carries the same mean power
        target_power.append(active.size * target.amplitude**2 / spec.samples_per_pulse)
    for clutter in scene.static_clutter:
        tau_c = 2.0 * (clutter.range_m + scene.cable_delay_range_m) / SPEED_OF_LIGHT
        if tau_c > max_delay:
            raise ValueError("clutter beyond the unambiguous range")
        transfer += clutter.amplitude * np.exp(-2j * np.pi * tau_c * f_rf)

    grid = np.zeros((n_frames, spec.samples_per_pulse), dtype=complex)
    grid[:, spec.active_bins % spec.samples_per_pulse] = x_active * transfer
    frames = np.fft.ifft(grid, axis=1) * math.sqrt(spec.samples_per_pulse)

    if scene.snr_db is not None and math.isfinite(scene.snr_db):
        if not target_power:
            raise ValueError("snr_db needs at least one target as power reference")
        noise_power = max(target_power) / 10.0 ** (scene.snr_db / 10.0)
        rng = np.random.default_rng(rng_seed)
        sigma = math.sqrt(noise_power / 2.0)
        frames = frames + sigma * (
            rng.standard_normal(frames.shape) + 1j * rng.standard_normal(frames.shape)
        )

    return SlowFastMatrix(frames=frames, frame_rate_hz=frame_rate_hz, spec=spec)


def analytic_transfer(scene: Scene, spec: WaveformSpec, n_frames: int) -> np.ndarray:
    """Noise-free channel transfer function on the active band, per frame.

    Reference for round-trip tests: what a perfect estimator should recover.
    """
    f_rf = spec.carrier_frequency_hz + spec.baseband_frequencies_hz()
    transfer = np.zeros((n_frames, spec.active_count), dtype=complex)
    for target in scene.targets:
        tau = _round_trip_delays(scene, target, n_frames)
        transfer += target.amplitude * np.exp(-2j * np.pi * np.outer(tau, f_rf))
    for clutter in scene.static_clutter:
        tau_c = 2.0 * (clutter.range_m + scene.cable_delay_range_m) / SPEED_OF_LIGHT
        transfer += clutter.amplitude * np.exp(-2j * np.pi * tau_c * f_rf)
    return transfer

import pytest

from jcvitals.channel import Scene, SceneTarget, simulate_capture
from jcvitals.physio import VitalParams, synthesize_displacement
from jcvitals.waveform import WaveformSpec, build_waveform


@pytest.fixture(scope="session")
def default_spec():
    return WaveformSpec()


@pytest.fixture(scope="session")
def default_symbol(default_spec):
    return build_waveform(default_spec)


@pytest.fixture(scope="session")
def small_spec():
    # fast grid for unit tests: 64 subcarriers on a 160-sample pulse
    return WaveformSpec(num_subcarriers=64, samples_per_pulse=160)


@pytest.fixture(scope="session")
def small_symbol(small_spec):
    return build_waveform(small_spec)


def make_target(
    rest_range_m=2.0,
    breathing_amplitude_m=6e-3,
    breathing_rate_hz=16 / 60,
    heart_amplitude_m=0.35e-3,
    heart_rate_hz=73 / 60,
    harmonic_weights=(),
    duration_s=40.0,
    frame_rate_hz=50.0,
    projection_angle_deg=0.0,
    reflectivity=0.67,
    nlos_attenuation_db=0.0,
    schedule=None,
    rng_seed=0,
):
    params = VitalParams(
        breathing_rate_hz=breathing_rate_hz,
        breathing_amplitude_m=breathing_amplitude_m,
        breathing_harmonic_weights=tuple(harmonic_weights),
        heart_rate_hz=heart_rate_hz,
        heart_amplitude_m=heart_amplitude_m,
        projection_angle_deg=projection_angle_deg,
    )
    trace = synthesize_displacement(
        params, duration_s=duration_s, frame_rate_hz=frame_rate_hz,
        schedule=schedule, rng_seed=rng_seed,
    )
    return SceneTarget(
        rest_range_m=rest_range_m,
        trace=trace,
        reflectivity=reflectivity,
        nlos_attenuation_db=nlos_attenuation_db,
    )


def capture_of(targets, spec, symbol, *, snr_db=None, duration_s=40.0, frame_rate_hz=50.0,
               clutter=(), cable=0.0, seed=1):
    scene = Scene(
        targets=list(targets),
        static_clutter=list(clutter),
        cable_delay_range_m=cable,
        snr_db=snr_db,
    )
    n_frames = int(round(duration_s * frame_rate_hz))
    return simulate_capture(
        scene, symbol, spec, n_frames=n_frames, rng_seed=seed, frame_rate_hz=frame_rate_hz
    )

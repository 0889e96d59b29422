import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jcvitals.capture_io import (
    FORMAT_VERSION,
    MAGIC,
    CaptureFormatError,
    read_capture,
    write_capture,
)
from jcvitals.channel import Scene, simulate_capture
from jcvitals.physio import DisplacementTrace
from jcvitals.channel import SceneTarget
from jcvitals.waveform import WaveformSpec, build_waveform, select_subcarriers


def small_capture(n=5, count=None, seed=2):
    spec = WaveformSpec(num_subcarriers=64, samples_per_pulse=160)
    if count:
        spec = select_subcarriers(spec, count)
    symbol = build_waveform(spec)
    trace = DisplacementTrace(sample_rate_hz=50.0, samples=np.zeros(n))
    scene = Scene(targets=[SceneTarget(2.0, trace)], snr_db=10.0)
    return simulate_capture(scene, symbol, spec, n_frames=n, rng_seed=seed)


class TestRoundTrip:
    def test_byte_exact_round_trip(self, tmp_path):
        capture = small_capture()
        first = tmp_path / "a.jcv"
        second = tmp_path / "b.jcv"
        write_capture(first, capture, averaging_factor=4, seed=99)
        loaded, meta = read_capture(first)
        write_capture(second, loaded, averaging_factor=meta.averaging_factor, seed=meta.seed)
        assert first.read_bytes() == second.read_bytes()
        assert meta.averaging_factor == 4
        assert meta.seed == 99
        assert meta.format_version == FORMAT_VERSION

    def test_spec_reconstructed(self, tmp_path):
        capture = small_capture(count=10)
        path = tmp_path / "c.jcv"
        write_capture(path, capture)
        loaded, _ = read_capture(path)
        assert loaded.spec == capture.spec
        assert loaded.frame_rate_hz == capture.frame_rate_hz
        assert loaded.n_frames == capture.n_frames

    def test_values_match_at_float32(self, tmp_path):
        capture = small_capture()
        path = tmp_path / "d.jcv"
        write_capture(path, capture)
        loaded, _ = read_capture(path)
        assert np.allclose(loaded.frames, capture.frames, rtol=1e-6, atol=1e-9)

    @settings(max_examples=10, deadline=None)
    @given(n=st.integers(min_value=1, max_value=9), seed=st.integers(0, 1000))
    def test_round_trip_property(self, tmp_path_factory, n, seed):
        capture = small_capture(n=n, seed=seed)
        path = tmp_path_factory.mktemp("cap") / "x.jcv"
        write_capture(path, capture, seed=seed)
        loaded, meta = read_capture(path)
        assert meta.seed == seed
        assert loaded.frames.shape == capture.frames.shape
        assert np.allclose(loaded.frames, capture.frames, rtol=1e-6, atol=1e-9)


class TestErrors:
    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.jcv"
        capture = small_capture()
        write_capture(path, capture)
        raw = bytearray(path.read_bytes())
        raw[:4] = b"XXXX"
        path.write_bytes(bytes(raw))
        with pytest.raises(CaptureFormatError, match="magic"):
            read_capture(path)

    def test_version_mismatch_names_both(self, tmp_path):
        path = tmp_path / "ver.jcv"
        write_capture(path, small_capture())
        raw = bytearray(path.read_bytes())
        raw[4:8] = struct.pack("<I", 7)
        path.write_bytes(bytes(raw))
        with pytest.raises(CaptureFormatError, match=r"7.*expected 1"):
            read_capture(path)

    def test_truncated_payload_names_offset(self, tmp_path):
        path = tmp_path / "trunc.jcv"
        write_capture(path, small_capture())
        raw = path.read_bytes()
        path.write_bytes(raw[:-13])
        with pytest.raises(CaptureFormatError, match=f"byte offset {len(raw) - 13}"):
            read_capture(path)

    def test_truncated_header(self, tmp_path):
        path = tmp_path / "hdr.jcv"
        path.write_bytes(MAGIC + b"\x01")
        with pytest.raises(CaptureFormatError, match="header"):
            read_capture(path)

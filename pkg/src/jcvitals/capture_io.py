"""Binary IQ capture files.

Layout (little endian): a fixed header followed by the frames in row-major
slow-time order, each complex sample stored as interleaved float32 I/Q.

header: magic "JCV1" | format version u32 | carrier f64 | sample rate f64 |
        samples_per_pulse u32 | frame rate f64 | frame count u32 |
        averaging factor u32 | num_subcarriers u32 | subcarrier spacing f64 |
        active start u32 | active count u32 | seed i64
"""
from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .channel import SlowFastMatrix
from .waveform import WaveformSpec

MAGIC = b"JCV1"
FORMAT_VERSION = 1
_HEADER_FMT = "<4sIddIdIIIdIIq"
_HEADER_SIZE = struct.calcsize(_HEADER_FMT)
_BYTES_PER_SAMPLE = 8  # float32 I + float32 Q


class CaptureFormatError(ValueError):
    """Raised for malformed, truncated or mismatched capture files."""


@dataclass
class CaptureMeta:
    format_version: int
    averaging_factor: int
    seed: int


def write_capture(path, capture: SlowFastMatrix, averaging_factor: int = 1, seed: int = 0) -> None:
    spec = capture.spec
    idx = spec.active_indices
    header = struct.pack(
        _HEADER_FMT,
        MAGIC,
        FORMAT_VERSION,
        spec.carrier_frequency_hz,
        spec.sample_rate_hz,
        spec.samples_per_pulse,
        capture.frame_rate_hz,
        capture.n_frames,
        averaging_factor,
        spec.num_subcarriers,
        spec.subcarrier_spacing_hz,
        int(idx[0]),
        int(idx.size),
        seed,
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(capture.frames, dtype=np.complex64).tobytes())


def read_capture(path) -> tuple[SlowFastMatrix, CaptureMeta]:
    with open(path, "rb") as fh:
        header = fh.read(_HEADER_SIZE)
        if len(header) < _HEADER_SIZE:
            raise CaptureFormatError(
                f"truncated header: got {len(header)} bytes, need {_HEADER_SIZE}"
            )
        (
            magic,
            version,
            carrier_hz,
            sample_rate_hz,
            samples_per_pulse,
            frame_rate_hz,
            frame_count,
            averaging_factor,
            num_subcarriers,
            spacing_hz,
            active_start,
            active_count,
            seed,
        ) = struct.unpack(_HEADER_FMT, header)
        if magic != MAGIC:
            raise CaptureFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
        if version != FORMAT_VERSION:
            raise CaptureFormatError(
                f"unsupported format version {version}, expected {FORMAT_VERSION}"
            )
        payload = fh.read()

    expected = frame_count * samples_per_pulse * _BYTES_PER_SAMPLE
    if len(payload) != expected:
        raise CaptureFormatError(
            f"truncated payload at byte offset {_HEADER_SIZE + len(payload)}: "
            f"expected {_HEADER_SIZE + expected} bytes total"
        )

    mask = np.zeros(num_subcarriers, dtype=bool)
    mask[active_start : active_start + active_count] = True
    spec = WaveformSpec(
        carrier_frequency_hz=carrier_hz,
        num_subcarriers=num_subcarriers,
        subcarrier_spacing_hz=spacing_hz,
        samples_per_pulse=samples_per_pulse,
        pulse_duration_s=samples_per_pulse / sample_rate_hz,
        active_mask=mask,
    )
    frames = np.frombuffer(payload, dtype=np.complex64).reshape(frame_count, samples_per_pulse)
    capture = SlowFastMatrix(frames=frames, frame_rate_hz=frame_rate_hz, spec=spec)
    return capture, CaptureMeta(
        format_version=version, averaging_factor=averaging_factor, seed=seed
    )

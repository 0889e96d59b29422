"""OFDM sensing waveform: subcarrier grid, low-crest-factor pulse synthesis,
and contiguous subcarrier-subset selection.

The pulse carries no data; all active subcarriers have unit magnitude and a
deterministic quadratic (Schroeder-style) phase ramp that keeps the multitone
peak-to-average power ratio low. Subcarriers are constrained to lie exactly on
the DFT grid of the sampled pulse so that per-subcarrier channel estimates are
free of inter-carrier interference.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .constants import SPEED_OF_LIGHT


def _centered_mask(num_subcarriers: int, count: int) -> np.ndarray:
    mask = np.zeros(num_subcarriers, dtype=bool)
    start = num_subcarriers // 2 - count // 2
    mask[start : start + count] = True
    return mask


@dataclass(eq=False)
class WaveformSpec:
    """Static description of the transmitted OFDM pulse.

    ``active_mask`` selects a contiguous block of subcarriers centered on the
    carrier; for even counts the block center sits half a subcarrier spacing
    below the carrier (see ``effective_carrier_hz``).
    """

    carrier_frequency_hz: float = 26.5e9
    num_subcarriers: int = 1024
    subcarrier_spacing_hz: float = 1.0e6
    samples_per_pulse: int = 2500
    pulse_duration_s: float = 1.0e-6
    active_mask: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.carrier_frequency_hz <= 0:
            raise ValueError("carrier_frequency_hz must be positive")
        if self.num_subcarriers < 1:
            raise ValueError("num_subcarriers must be >= 1")
        if self.samples_per_pulse < self.num_subcarriers:
            raise ValueError("samples_per_pulse must be >= num_subcarriers")
        if self.pulse_duration_s <= 0:
            raise ValueError("pulse_duration_s must be positive")
        if self.subcarrier_spacing_hz <= 0:
            raise ValueError("subcarrier_spacing_hz must be positive")

        cycles = self.subcarrier_spacing_hz * self.pulse_duration_s
        if abs(cycles - round(cycles)) > 1e-9 * max(1.0, cycles) or round(cycles) < 1:
            raise ValueError(
                "subcarrier_spacing_hz must be an integer multiple of "
                "1/pulse_duration_s so subcarriers fall on the pulse DFT grid"
            )
        if self.num_subcarriers * round(cycles) > self.samples_per_pulse:
            raise ValueError("subcarrier band exceeds the sampled bandwidth")

        if self.active_mask is None:
            self.active_mask = np.ones(self.num_subcarriers, dtype=bool)
        else:
            self.active_mask = np.asarray(self.active_mask, dtype=bool)
        if self.active_mask.shape != (self.num_subcarriers,):
            raise ValueError("active_mask length must equal num_subcarriers")
        count = int(self.active_mask.sum())
        if count == 0:
            raise ValueError("active_mask selects zero subcarriers")
        if not np.array_equal(self.active_mask, _centered_mask(self.num_subcarriers, count)):
            raise ValueError("active_mask must be a contiguous band centered on the carrier")

    # -- derived quantities -------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, WaveformSpec):
            return NotImplemented
        return (
            self.carrier_frequency_hz == other.carrier_frequency_hz
            and self.num_subcarriers == other.num_subcarriers
            and self.subcarrier_spacing_hz == other.subcarrier_spacing_hz
            and self.samples_per_pulse == other.samples_per_pulse
            and self.pulse_duration_s == other.pulse_duration_s
            and np.array_equal(self.active_mask, other.active_mask)
        )

    @property
    def sample_rate_hz(self) -> float:
        return self.samples_per_pulse / self.pulse_duration_s

    @property
    def grid_step(self) -> int:
        """DFT bins per subcarrier spacing."""
        return round(self.subcarrier_spacing_hz * self.pulse_duration_s)

    @property
    def active_count(self) -> int:
        return int(self.active_mask.sum())

    @property
    def active_indices(self) -> np.ndarray:
        return np.flatnonzero(self.active_mask)

    @property
    def active_bins(self) -> np.ndarray:
        """Signed DFT bin index of each active subcarrier (0 = carrier)."""
        return (self.active_indices - self.num_subcarriers // 2) * self.grid_step

    def baseband_frequencies_hz(self) -> np.ndarray:
        """Frequency offset of each active subcarrier from the carrier."""
        return self.active_bins / self.pulse_duration_s

    @property
    def occupied_bandwidth_hz(self) -> float:
        return self.active_count * self.subcarrier_spacing_hz

    @property
    def effective_carrier_hz(self) -> float:
        """Center of the occupied band (carrier - spacing/2 for even counts)."""
        return self.carrier_frequency_hz + float(np.mean(self.baseband_frequencies_hz()))

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency_hz

    @property
    def effective_wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.effective_carrier_hz


@dataclass
class BasebandSymbol:
    """One transmitted pulse in both domains.

    ``freq_domain`` holds one complex value per subcarrier slot (zeros on
    inactive slots); ``time_domain`` is the interpolated pulse, scaled so the
    energies of both domains are equal.
    """

    spec: WaveformSpec
    freq_domain: np.ndarray
    time_domain: np.ndarray


def build_waveform(spec: WaveformSpec) -> BasebandSymbol:
    """Synthesize the pulse for ``spec``.

    Active subcarriers get unit magnitude and the quadratic phase profile
    phi_i = pi * i^2 / A over the A active subcarriers; the time-domain pulse
    is the inverse DFT of the band embedded in the full sampled grid.
    Deterministic: identical specs produce bit-identical symbols.
    """
    idx = spec.active_indices
    count = idx.size
    phases = np.pi * np.arange(count) ** 2 / count
    freq = np.zeros(spec.num_subcarriers, dtype=complex)
    freq[idx] = np.exp(1j * phases)

    grid = np.zeros(spec.samples_per_pulse, dtype=complex)
    grid[spec.active_bins % spec.samples_per_pulse] = freq[idx]
    time = np.fft.ifft(grid) * math.sqrt(spec.samples_per_pulse)
    return BasebandSymbol(spec=spec, freq_domain=freq, time_domain=time)


def papr_db(symbol: BasebandSymbol) -> float:
    """Peak-to-average power ratio of the pulse envelope, in dB (>= 0)."""
    power = np.abs(symbol.time_domain) ** 2
    mean = power.mean()
    if mean == 0:
        raise ValueError("all-zero symbol has no defined PAPR")
    return 10.0 * math.log10(power.max() / mean)


def select_subcarriers(spec: WaveformSpec, count: int) -> WaveformSpec:
    """Return a spec with a centered contiguous mask of ``count`` subcarriers.

    Spacing is kept fixed; deselected subcarriers are zeroed, so the occupied
    bandwidth is count * spacing while the band center stays on the carrier.
    """
    if not 1 <= count <= spec.num_subcarriers:
        raise ValueError(
            f"count must be in [1, {spec.num_subcarriers}], got {count}"
        )
    return replace(spec, active_mask=_centered_mask(spec.num_subcarriers, count))

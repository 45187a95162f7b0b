"""Transmit-side WDM signal synthesis.

Symbols are drawn per polarization, shaped with a root-raised-cosine
response applied in the frequency domain on a periodic window (no edge
transients, exact matched-filter pair), optionally predistorted with a
quadratic spectral phase, frequency-shifted onto the WDM grid and summed
into a single dual-polarization sampled field.

The waveform model is circular throughout: channel offsets must land on
discrete spectral bins, which `sampling_grid` guarantees for uniform
grids whose spacing times window duration is an integer.
"""

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.fft as fft

from .dispersion import dispersion_multiplier
from .errors import ConfigurationError
from .units import dbm2watt, watt2dbm

MODULATIONS = ("pm-qpsk", "gaussian")

_QPSK_POINTS = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / np.sqrt(2.0)


@dataclass(frozen=True)
class ChannelSpec:
    """One channel of the WDM comb.

    index 0 is the channel under test and sits at the band centre;
    pumps carry signed indices and offsets in GHz relative to it.
    Power is the dual-polarization launch power. `predistortion` is an
    accumulated-dispersion amount (ps/nm) applied before launch.
    """

    index: int
    center_offset: float  # GHz
    symbol_rate: float  # GBaud
    power_dbm: float
    modulation: str
    rolloff: float = 0.1
    predistortion: float = 0.0  # ps/nm
    seed: int = 0

    def __post_init__(self):
        if self.modulation not in MODULATIONS:
            raise ConfigurationError(
                f"unknown modulation {self.modulation!r}; expected one of {MODULATIONS}"
            )
        if self.symbol_rate <= 0:
            raise ConfigurationError("symbol_rate must be positive")
        if not 0.0 <= self.rolloff <= 1.0:
            raise ConfigurationError("rolloff must be in [0, 1]")
        if not np.isfinite(self.power_dbm):
            raise ConfigurationError("power_dbm must be finite")

    @property
    def power_w(self):
        return dbm2watt(self.power_dbm)

    @property
    def occupied_bandwidth(self):
        """Spectral support Rs*(1+rolloff) in GHz."""
        return self.symbol_rate * (1.0 + self.rolloff)


@dataclass
class SampledField:
    """Dual-polarization complex baseband waveform on a periodic window.

    `samples` has shape (2, n), one row per polarization, in sqrt(W)
    units so that mean(|x|^2 + |y|^2) is the instantaneous total power
    in W.  `accumulated_dispersion` (ps/nm) tracks the quadratic phase
    the field has picked up and is what ideal CDC removes.
    """

    samples: np.ndarray
    sample_rate: float  # GHz
    center_frequency_offset: float = 0.0  # GHz relative to the WDM band centre
    accumulated_dispersion: float = 0.0  # ps/nm

    def __post_init__(self):
        self.samples = np.asarray(self.samples)
        if self.samples.ndim != 2 or self.samples.shape[0] != 2:
            raise ConfigurationError("samples must have shape (2, n)")
        if not np.iscomplexobj(self.samples):
            raise ConfigurationError("samples must be complex")
        n = self.samples.shape[1]
        if n < 2 or n & (n - 1):
            raise ConfigurationError(f"sample count must be a power of two, got {n}")

    @property
    def n_samples(self):
        return self.samples.shape[1]

    @property
    def duration(self):
        """Window duration in ns."""
        return self.n_samples / self.sample_rate

    @property
    def power(self):
        """Mean total power across both polarizations, in W."""
        return float(np.mean(np.abs(self.samples[0]) ** 2 + np.abs(self.samples[1]) ** 2))

    @property
    def x(self):
        return self.samples[0]

    @property
    def y(self):
        return self.samples[1]

    def copy(self):
        return replace(self, samples=self.samples.copy())


def generate_symbols(modulation, n_symbols, seed):
    """Draw a dual-polarization symbol sequence, unit mean power per pol.

    pm-qpsk draws uniformly from {(+-1 +-1j)/sqrt(2)}; gaussian draws
    circularly-symmetric complex normals with unit variance.  The result
    is a (2, n_symbols) complex array, deterministic for a fixed seed.
    """
    if n_symbols < 1:
        raise ConfigurationError("n_symbols must be >= 1")
    rng = np.random.default_rng(seed)
    if modulation == "pm-qpsk":
        return _QPSK_POINTS[rng.integers(0, 4, size=(2, n_symbols))]
    if modulation == "gaussian":
        draws = rng.standard_normal((2, 2 * n_symbols))
        return np.sqrt(0.5) * (draws[:, ::2] + 1j * draws[:, 1::2])
    raise ConfigurationError(
        f"unknown modulation {modulation!r}; expected one of {MODULATIONS}"
    )


def root_raised_cosine_response(freqs_ghz, symbol_rate, rolloff):
    """RRC amplitude response on the given frequency grid.

    The squared response is a raised cosine, so the alias sum over
    multiples of the symbol rate is exactly flat (Nyquist criterion);
    shaping plus matched filtering on a circular window is then
    ISI-free to machine precision.
    """
    af = np.abs(np.asarray(freqs_ghz, dtype=float))
    half = symbol_rate / 2.0
    if rolloff == 0.0:
        h2 = np.where(af < half, 1.0, 0.0)
        h2[np.isclose(af, half)] = 0.5
        return np.sqrt(h2)
    f1 = (1.0 - rolloff) * half
    f2 = (1.0 + rolloff) * half
    h2 = np.zeros_like(af)
    h2[af <= f1] = 1.0
    trans = (af > f1) & (af < f2)
    h2[trans] = np.cos(np.pi / (2.0 * rolloff * symbol_rate) * (af[trans] - f1)) ** 2
    return np.sqrt(h2)


def _integer_ratio(num, den, what):
    ratio = num / den
    rounded = int(round(ratio))
    if rounded < 1 or abs(ratio - rounded) > 1e-9:
        raise ConfigurationError(f"{what} = {ratio} is not a positive integer")
    return rounded


def shape_and_modulate(symbols, spec, sample_rate, n_samples):
    """Shape a symbol sequence into a SampledField on the shared grid.

    Applies circular RRC shaping at `spec.rolloff`, the predistortion
    phase, an exact spectral shift to `spec.center_offset`, and scales
    the waveform so its mean total power equals `spec.power_dbm`.
    """
    symbols = np.asarray(symbols)
    n_symbols = symbols.shape[-1]
    sps = _integer_ratio(sample_rate, spec.symbol_rate, "samples per symbol")
    if sps < 2.0 * (1.0 + spec.rolloff):
        raise ConfigurationError(
            f"samples per symbol {sps} below 2*(1+rolloff) for Rs={spec.symbol_rate}"
        )
    if n_samples != n_symbols * sps:
        raise ConfigurationError(
            f"n_samples {n_samples} != n_symbols {n_symbols} * sps {sps}"
        )
    if abs(spec.center_offset) + spec.occupied_bandwidth / 2.0 > sample_rate / 2.0:
        raise ConfigurationError(
            f"channel {spec.index} at {spec.center_offset} GHz does not fit the "
            f"{sample_rate} GHz grid"
        )

    freqs = np.fft.fftfreq(n_samples, d=1.0 / sample_rate)
    spectrum = np.tile(fft.fft(symbols, axis=-1), (1, sps))
    spectrum *= root_raised_cosine_response(freqs, spec.symbol_rate, spec.rolloff)
    if spec.predistortion != 0.0:
        spectrum *= dispersion_multiplier(n_samples, sample_rate, spec.predistortion)

    shift_bins = spec.center_offset * n_samples / sample_rate
    bins = int(round(shift_bins))
    if abs(shift_bins - bins) > 1e-6:
        raise ConfigurationError(
            f"channel offset {spec.center_offset} GHz is not on the spectral grid "
            f"(resolution {sample_rate / n_samples} GHz)"
        )
    if bins:
        spectrum = np.roll(spectrum, bins, axis=-1)

    samples = fft.ifft(spectrum, axis=-1)
    mean_power = np.mean(np.abs(samples[0]) ** 2 + np.abs(samples[1]) ** 2)
    if mean_power == 0.0:
        raise ValueError("degenerate all-zero symbol sequence")
    samples *= np.sqrt(spec.power_w / mean_power)
    return SampledField(
        samples,
        sample_rate,
        center_frequency_offset=0.0,
        accumulated_dispersion=spec.predistortion,
    )


def multiplex(fields):
    """Pointwise sum of per-channel fields sharing one sampling grid.

    Channels with disjoint spectral support add in power.  The composite
    keeps the constituents' accumulated-dispersion metadata only when
    they all agree (per-channel predistortion is not representable in a
    single scalar; the receiver then compensates link dispersion only).
    """
    fields = list(fields)
    if not fields:
        raise ConfigurationError("multiplex needs at least one field")
    first = fields[0]
    for f in fields[1:]:
        if f.sample_rate != first.sample_rate or f.n_samples != first.n_samples:
            raise ConfigurationError("multiplex requires identical sampling grids")
        if f.center_frequency_offset != first.center_frequency_offset:
            raise ConfigurationError("multiplex requires a common grid centre")
    if len(fields) == 1:
        return first.copy()
    disp = {f.accumulated_dispersion for f in fields}
    total = np.sum([f.samples for f in fields], axis=0)
    return SampledField(
        total,
        first.sample_rate,
        center_frequency_offset=first.center_frequency_offset,
        accumulated_dispersion=disp.pop() if len(disp) == 1 else 0.0,
    )


def sampling_grid(channels, n_symbols, guard=0.2, min_sps=4):
    """Choose (sample_rate, n_samples) for a channel set.

    The samples-per-symbol of the channel under test is the smallest
    power of two >= `min_sps` whose rate covers the occupied band plus
    the relative `guard`, keeping samples-per-symbol integral for every
    channel and every channel offset on a spectral bin.
    """
    channels = list(channels)
    cut = [c for c in channels if c.index == 0]
    if len(cut) != 1:
        raise ConfigurationError("expected exactly one channel with index 0")
    rs0 = cut[0].symbol_rate
    needed = 2.0 * (1.0 + guard) * max(
        abs(c.center_offset) + c.occupied_bandwidth / 2.0 for c in channels
    )
    sps = min_sps
    while sps * rs0 < needed:
        sps *= 2
        if sps > 1 << 20:
            raise ConfigurationError("cannot cover the requested band")
    sample_rate = sps * rs0
    n_samples = n_symbols * sps
    if n_samples & (n_samples - 1):
        raise ConfigurationError(
            f"n_symbols * sps = {n_samples} must be a power of two"
        )
    duration = n_samples / sample_rate
    for c in channels:
        _integer_ratio(sample_rate, c.symbol_rate, f"samples per symbol (channel {c.index})")
        m = duration * c.symbol_rate
        if abs(m - round(m)) > 1e-6:
            raise ConfigurationError(
                f"channel {c.index} symbol count {m} not integral on the window"
            )
        bins = c.center_offset * duration
        if abs(bins - round(bins)) > 1e-6:
            raise ConfigurationError(
                f"channel {c.index} offset {c.center_offset} GHz is off-grid "
                f"(resolution {1.0 / duration} GHz)"
            )
    return sample_rate, n_samples


def power_spectral_density(field):
    """Two-sided PSD in W/GHz, with its frequency axis (sorted, GHz)."""
    n = field.n_samples
    spectrum = fft.fft(field.samples, axis=-1)
    psd = (np.abs(spectrum[0]) ** 2 + np.abs(spectrum[1]) ** 2) / n**2
    psd /= field.sample_rate / n  # per-bin power -> density
    freqs = np.fft.fftfreq(n, d=1.0 / field.sample_rate)
    order = np.argsort(freqs)
    return freqs[order], psd[order]

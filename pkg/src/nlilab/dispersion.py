"""Chromatic-dispersion helpers shared by transmitter, fiber and receiver.

Sign convention: propagation through accumulated dispersion A (ps/nm)
multiplies the spectrum by exp(1j * (beta2_equiv / 2) * omega^2) with
beta2_equiv = -A * lambda^2 / (2 pi c) < 0 for A > 0.  Compensation is
the complex conjugate of the same multiplier.
"""

import numpy as np

from .units import REF_WAVELENGTH_NM, SPEED_OF_LIGHT_NM_PS


def beta2_from_dispersion(dispersion_ps_nm_km, wavelength_nm=REF_WAVELENGTH_NM):
    """Convert D (ps/(nm km)) to beta2 (ps^2/km) at the given carrier."""
    return -dispersion_ps_nm_km * wavelength_nm**2 / (2.0 * np.pi * SPEED_OF_LIGHT_NM_PS)


def dispersion_from_beta2(beta2_ps2_km, wavelength_nm=REF_WAVELENGTH_NM):
    """Inverse of :func:`beta2_from_dispersion`."""
    return -beta2_ps2_km * 2.0 * np.pi * SPEED_OF_LIGHT_NM_PS / wavelength_nm**2


def angular_frequencies(n_samples, sample_rate_ghz):
    """FFT-ordered baseband angular frequencies in rad/ns."""
    return 2.0 * np.pi * np.fft.fftfreq(n_samples, d=1.0 / sample_rate_ghz)


def dispersion_multiplier(n_samples, sample_rate_ghz, accumulated_ps_nm):
    """Spectral multiplier of propagating through `accumulated_ps_nm`.

    `accumulated_ps_nm` is the D*z product; the quadratic phase is applied
    around the grid centre (zero group delay at the centre frequency).
    """
    # D*z (ps/nm) -> beta2*z (ps^2), then ps^2 -> ns^2 for rad/ns frequencies
    b2z_ns2 = beta2_from_dispersion(accumulated_ps_nm) * 1e-6
    w = angular_frequencies(n_samples, sample_rate_ghz)
    return np.exp((0.5j * b2z_ns2) * w * w)

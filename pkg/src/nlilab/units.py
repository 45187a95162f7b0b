"""Unit conversions and physical constants.

Internal conventions: time in ns, frequency in GHz, distance in km and
power in W, so that GHz * ns products are dimensionless.  Fiber
parameters are carried in the usual engineering units (dB/km, ps/nm/km,
ps^2/km, 1/(W km)) and converted where the math needs natural units.
"""

import numpy as np

SPEED_OF_LIGHT_NM_PS = 2.99792458e5  # nm/ps
REF_WAVELENGTH_NM = 1550.0


def db2lin(value_db):
    return 10.0 ** (np.asarray(value_db) / 10.0)


def lin2db(value):
    return 10.0 * np.log10(value)


def dbm2watt(power_dbm):
    return 1e-3 * 10.0 ** (power_dbm / 10.0)


def watt2dbm(power_w):
    return 10.0 * np.log10(power_w / 1e-3)


def attenuation_to_linear(alpha_db_km):
    """dB/km field-power attenuation to 1/km natural units."""
    return alpha_db_km * np.log(10.0) / 10.0

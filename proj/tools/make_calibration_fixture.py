#!/usr/bin/env python3
"""Writes the synthetic calibration fixtures in data/.

pzt_s21_707mV.csv  network-analyzer export of an interferometric PZT sweep
sensor_sa.csv      spectrum-analyzer export of the sensor driven by that PZT

The PZT displacement is a sum of damped resonances over a compliant baseline.
The sensor responsivity is a single Lorentzian at 315 kHz over a flat floor.
"""
import numpy as np
from scipy.special import fresnel

WAVELENGTH = 1555e-9
V_MAX = 1.0
V_REF = 0.001
F_REF = 20e3
Z = 413.0
C_SOUND = 343.0
L = 0.1
APERTURE = 7e-3
RBW = 1.0
R_LOAD = 50.0


def pzt_displacement(f):
    base = 2e-11 / (1 + (f / 400e3) ** 2)
    res = 0j
    for f0, q, a in [(95e3, 25, 2.5), (230e3, 40, 1.5), (480e3, 30, 4.0)]:
        res += a / (1 - (f / f0) ** 2 - 1j * f / (q * f0))
    return base * np.abs(1 + res)


def air_db_per_m(f, T=293.15, hr=50.0, p=101325.0):
    pr = p / 101325.0
    tr = T / 293.15
    psat = 10 ** (-6.8346 * (273.16 / T) ** 1.261 + 4.6151)
    h = hr * psat / pr
    fro = pr * (24 + 4.04e4 * h * (0.02 + h) / (0.391 + h))
    frn = pr * tr ** -0.5 * (9 + 280 * h * np.exp(-4.170 * (tr ** (-1 / 3) - 1)))
    return 8.686 * f**2 * (1.84e-11 / pr * tr**0.5 + tr**-2.5 * (
        0.01275 * np.exp(-2239.1 / T) / (fro + f**2 / fro)
        + 0.1068 * np.exp(-3352.0 / T) / (frn + f**2 / frn)))


def main():
    f = np.union1d(np.round(np.geomspace(1e3, 1e6, 600)), [F_REF])
    d = pzt_displacement(f)
    # Around the strongest PZT resonance the 707 mV drive saturates the
    # fringe, so that segment is recorded at 250 mV and rescaled.
    scale = np.where((f > 440e3) & (f < 520e3), 707.0 / 250.0, 1.0)
    d_raw = d / scale
    d_ref = d[f == F_REF][0]
    # d = (lambda/4)(V_ref/V_max) sqrt(S21/S21_ref); the reference sits 30 dB below 0 dB.
    s21 = 1e-3 * (d_raw / d_ref) ** 2
    np.savetxt("data/pzt_s21_707mV.csv", np.column_stack([f, 10 * np.log10(s21), scale]),
               delimiter=",", header="freq_hz,s21_db,segment_scale", comments="", fmt="%.12g")

    d_cal = WAVELENGTH / 4 * V_REF / V_MAX * (d_raw / d_ref) * scale
    p_pzt = np.pi * f * d_cal * Z
    lam = C_SOUND / f
    u = APERTURE / 2 * np.sqrt(2 / (lam * L))
    s, c = fresnel(u)
    c_diff = 2 * (c**2 + s**2)
    gamma = 10 ** (air_db_per_m(f) * L / 20)
    p_sensor = c_diff * p_pzt / gamma
    resp = 0.05 + 2.0 / np.abs(1 - (f / 315e3) ** 2 - 1j * f / (100 * 315e3))
    v = resp * p_sensor
    psd_dbm = 10 * np.log10(v**2 / (R_LOAD * RBW) / 1e-3)
    np.savetxt("data/sensor_sa.csv", np.column_stack([f, psd_dbm]),
               delimiter=",", header="freq_hz,psd_dbm_hz", comments="", fmt="%.12g")
    np.savetxt("data/sensor_responsivity_true.csv", np.column_stack([f, resp]),
               delimiter=",", header="freq_hz,responsivity_v_per_pa", comments="", fmt="%.12g")


if __name__ == "__main__":
    main()

"""Flat-sea L-band radiometric forward model.

Maps a sea state (salinity, temperature, wind) and an incidence angle to a
noise-free first-Stokes brightness temperature TB_H + TB_V:

    TB = (e_H + e_V) * (sst + 273.15) + wind_coeff * wind

with emissivities from the Fresnel reflection coefficients of a specular sea
surface and the seawater dielectric constant from the Klein & Swift (1977)
model.  Wind enters through a configurable linear term only; roughness
spectra, foam and atmospheric terms are out of scope.

Sign convention: complex permittivity is written eps' + j*eps'' with the time
factor exp(+j*omega*t), so the lossy part is carried as a *negative* imaginary
component.  Downstream code only consumes |reflection coefficient|^2, which is
convention-independent.

All operations are pure and accept numpy arrays (broadcasting) in place of
scalars.
"""

from dataclasses import dataclass

import numpy as np

FREEZING_POINT_K = 273.15
VACUUM_PERMITTIVITY = 8.854e-12  # F/m

SSS_BOUNDS = (0.0, 45.0)    # psu
SST_BOUNDS = (-2.0, 35.0)   # degC
WIND_BOUNDS = (0.0, 30.0)   # m/s
FREQUENCY_BOUNDS = (1.0e9, 2.0e9)  # Hz, L-band validity window
MAX_INCIDENCE_DEG = 65.0

SENSITIVITY_STEP_PSU = 0.01


class DomainError(ValueError):
    """An input is outside the forward model's validity range."""


def _check_range(name, value, lo, hi):
    arr = np.asarray(value, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    if np.any(arr < lo) or np.any(arr > hi):
        raise DomainError(f"{name} outside [{lo}, {hi}]")


@dataclass(frozen=True)
class SeaState:
    """One geophysical triplet: salinity (psu), temperature (degC), wind (m/s),
    with optional geolocation."""

    sss: float
    sst: float
    wind: float
    lat: float | None = None
    lon: float | None = None

    def __post_init__(self):
        _check_range("sss", self.sss, *SSS_BOUNDS)
        _check_range("sst", self.sst, *SST_BOUNDS)
        _check_range("wind", self.wind, *WIND_BOUNDS)
        if self.lat is not None:
            _check_range("lat", self.lat, -90.0, 90.0)
        if self.lon is not None:
            if not (-180.0 <= self.lon < 180.0):
                raise DomainError("lon outside [-180, 180)")


@dataclass(frozen=True)
class Permittivity:
    """Relative permittivity; imag_part < 0 for lossy seawater (see module
    docstring for the sign convention)."""

    real_part: float
    imag_part: float

    def as_complex(self):
        return complex(self.real_part, self.imag_part)


@dataclass(frozen=True)
class RadiometerSpec:
    """Instrument constants: frequency (Hz) and the linear wind coefficient
    applied to the first Stokes parameter (K per m/s)."""

    frequency: float = 1.413e9
    wind_coeff: float = 0.4

    def __post_init__(self):
        if not self.frequency > 0:
            raise DomainError("frequency must be > 0")
        if self.wind_coeff < 0:
            raise DomainError("wind_coeff must be >= 0")


def _permittivity(sst, sss, frequency):
    """Klein & Swift (1977) seawater dielectric constant (array-capable).

    Static permittivity, relaxation time and ionic conductivity are cubic
    polynomials in temperature T (degC) and salinity S (psu); the ionic
    conductivity term vanishes identically at S = 0.
    """
    t = np.asarray(sst, dtype=np.float64)
    s = np.asarray(sss, dtype=np.float64)
    eps_inf = 4.9
    eps_s_t = 87.134 - 1.949e-1 * t - 1.276e-2 * t**2 + 2.491e-4 * t**3
    a_st = (1.0 + 1.613e-5 * s * t - 3.656e-3 * s
            + 3.210e-5 * s**2 - 4.232e-7 * s**3)
    eps_static = eps_s_t * a_st

    tau_t = (1.768e-11 - 6.086e-13 * t + 1.104e-14 * t**2
             - 8.111e-17 * t**3)
    b_st = (1.0 + 2.282e-5 * s * t - 7.638e-4 * s
            - 7.760e-6 * s**2 + 1.105e-8 * s**3)
    tau = tau_t * b_st

    delta = 25.0 - t
    beta = (2.0333e-2 + 1.266e-4 * delta + 2.464e-6 * delta**2
            - s * (1.849e-5 - 2.551e-7 * delta + 2.551e-8 * delta**2))
    sigma_25 = s * (0.182521 - 1.46192e-3 * s + 2.09324e-5 * s**2
                    - 1.28205e-7 * s**3)
    sigma = sigma_25 * np.exp(-delta * beta)

    omega = 2.0 * np.pi * frequency
    return (eps_inf + (eps_static - eps_inf) / (1.0 + 1j * omega * tau)
            - 1j * sigma / (omega * VACUUM_PERMITTIVITY))


def permittivity_klein_swift(sst, sss, frequency=1.413e9):
    """Complex seawater permittivity at L-band.

    Parameters
    ----------
    sst : degC, within SST_BOUNDS
    sss : psu, within SSS_BOUNDS
    frequency : Hz, within the L-band validity window

    Returns
    -------
    Permittivity with the loss carried as a negative imaginary part.
    """
    _check_range("sst", sst, *SST_BOUNDS)
    _check_range("sss", sss, *SSS_BOUNDS)
    _check_range("frequency", frequency, *FREQUENCY_BOUNDS)
    eps = _permittivity(sst, sss, frequency)
    if not np.all(np.isfinite(eps)):
        raise DomainError("permittivity evaluation produced non-finite values")
    if np.ndim(eps) == 0:
        return Permittivity(float(eps.real), float(eps.imag))
    return eps


def _emissivity_hv(eps, incidence_deg):
    """Fresnel H/V emissivities of a specular surface (array-capable)."""
    theta = np.deg2rad(np.asarray(incidence_deg, dtype=np.float64))
    cos_t = np.cos(theta)
    sin2 = np.sin(theta) ** 2
    root = np.sqrt(eps - sin2)
    r_h = (cos_t - root) / (cos_t + root)
    r_v = (eps * cos_t - root) / (eps * cos_t + root)
    return 1.0 - np.abs(r_h) ** 2, 1.0 - np.abs(r_v) ** 2


def _check_incidence(incidence_deg):
    arr = np.asarray(incidence_deg, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError("incidence must be finite")
    if np.any(arr < 0.0) or np.any(arr > MAX_INCIDENCE_DEG):
        raise DomainError(
            f"incidence outside [0, {MAX_INCIDENCE_DEG}] degrees")


def fresnel_emissivity(eps, incidence_deg, polarization):
    """Specular-sea emissivity 1 - |Fresnel reflection coefficient|^2.

    ``eps`` may be a Permittivity or a complex value/array.  Incidence angles
    above MAX_INCIDENCE_DEG are rejected rather than extrapolated.
    """
    _check_incidence(incidence_deg)
    if isinstance(eps, Permittivity):
        eps = eps.as_complex()
    e_h, e_v = _emissivity_hv(eps, incidence_deg)
    pol = str(polarization).upper()
    if pol == "H":
        out = e_h
    elif pol == "V":
        out = e_v
    else:
        raise DomainError(f"polarization must be 'H' or 'V', got {polarization!r}")
    return float(out) if np.ndim(out) == 0 else out


def first_stokes_grid(sss, sst, wind, incidence_deg, spec=RadiometerSpec()):
    """Noise-free first-Stokes TB for arrays of states and angles.

    ``sss``/``sst``/``wind`` broadcast together; ``incidence_deg`` of shape
    (k,) yields an output of shape broadcast_shape + (k,).
    """
    _check_range("sss", sss, *SSS_BOUNDS)
    _check_range("sst", sst, *SST_BOUNDS)
    _check_range("wind", wind, *WIND_BOUNDS)
    _check_incidence(incidence_deg)
    sss, sst, wind = np.broadcast_arrays(
        np.asarray(sss, dtype=np.float64),
        np.asarray(sst, dtype=np.float64),
        np.asarray(wind, dtype=np.float64))
    inc = np.atleast_1d(np.asarray(incidence_deg, dtype=np.float64))
    eps = _permittivity(sst, sss, spec.frequency)
    e_h, e_v = _emissivity_hv(eps[..., None], inc)
    tb = (e_h + e_v) * (sst[..., None] + FREEZING_POINT_K) \
        + spec.wind_coeff * wind[..., None]
    if np.ndim(incidence_deg) == 0:
        tb = tb[..., 0]
    return tb


def first_stokes_tb(state, incidence_deg, spec=RadiometerSpec()):
    """First Stokes parameter TB_H + TB_V (K) for one sea state."""
    tb = first_stokes_grid(state.sss, state.sst, state.wind,
                           incidence_deg, spec)
    return float(tb) if np.ndim(tb) == 0 else tb


def sss_sensitivity(state, incidence_deg, spec=RadiometerSpec(),
                    step=SENSITIVITY_STEP_PSU):
    """dTB/dSSS (K/psu) by central finite difference.

    The perturbed salinities are clipped into SSS_BOUNDS before evaluation,
    so states at the domain edge degrade to a one-sided estimate.
    """
    lo, hi = SSS_BOUNDS
    s_plus = min(state.sss + 0.5 * step, hi)
    s_minus = max(state.sss - 0.5 * step, lo)
    tb_plus = first_stokes_grid(s_plus, state.sst, state.wind,
                                incidence_deg, spec)
    tb_minus = first_stokes_grid(s_minus, state.sst, state.wind,
                                 incidence_deg, spec)
    out = (tb_plus - tb_minus) / (s_plus - s_minus)
    return float(out) if np.ndim(out) == 0 else out

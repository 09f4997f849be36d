import cmath
import math

import numpy as np
import pytest

from sssinv.forward_model import (DomainError, Permittivity, RadiometerSpec,
                                  SeaState, first_stokes_grid, first_stokes_tb,
                                  fresnel_emissivity, permittivity_klein_swift,
                                  sss_sensitivity)

F_LBAND = 1.413e9


# --- independent scalar transcription of the published seawater dielectric
# equations, used as the oracle for the vectorized implementation

def eps_oracle(t, s, f):
    e_inf = 4.9
    e0_t = 87.134 - 0.1949 * t - 1.276e-2 * t * t + 2.491e-4 * t ** 3
    a = 1.0 + 1.613e-5 * s * t - 3.656e-3 * s + 3.210e-5 * s * s - 4.232e-7 * s ** 3
    tau_t = 1.768e-11 - 6.086e-13 * t + 1.104e-14 * t * t - 8.111e-17 * t ** 3
    b = 1.0 + 2.282e-5 * s * t - 7.638e-4 * s - 7.760e-6 * s * s + 1.105e-8 * s ** 3
    d = 25.0 - t
    beta = (2.0333e-2 + 1.266e-4 * d + 2.464e-6 * d * d
            - s * (1.849e-5 - 2.551e-7 * d + 2.551e-8 * d * d))
    s25 = s * (0.182521 - 1.46192e-3 * s + 2.09324e-5 * s * s - 1.28205e-7 * s ** 3)
    sigma = s25 * math.exp(-d * beta)
    omega = 2.0 * math.pi * f
    return (e_inf + (e0_t * a - e_inf) / (1.0 + 1j * omega * tau_t * b)
            - 1j * sigma / (omega * 8.854e-12))


def emissivity_oracle(eps, inc_deg, pol):
    # Snell-form Fresnel coefficients: a different algebraic route than the
    # implementation's sqrt(eps - sin^2) form
    th = math.radians(inc_deg)
    n = cmath.sqrt(eps)
    cos_t = cmath.sqrt(1.0 - (math.sin(th) / n) ** 2)
    if pol == "H":
        r = (math.cos(th) - n * cos_t) / (math.cos(th) + n * cos_t)
    else:
        r = (n * math.cos(th) - cos_t) / (n * math.cos(th) + cos_t)
    return 1.0 - abs(r) ** 2


class TestPermittivity:
    def test_matches_oracle_transcription(self):
        for t, s in [(20.0, 35.0), (5.0, 33.0), (28.0, 37.5), (0.0, 34.0)]:
            got = permittivity_klein_swift(t, s, F_LBAND)
            want = eps_oracle(t, s, F_LBAND)
            assert got.real_part == pytest.approx(want.real, rel=1e-12)
            assert got.imag_part == pytest.approx(want.imag, rel=1e-12)

    def test_regression_fixture(self):
        # frozen from the oracle transcription; consistent with published
        # L-band seawater permittivity curves (real part ~70-75 at 20 degC)
        eps = permittivity_klein_swift(20.0, 35.0, F_LBAND)
        assert eps.real_part == pytest.approx(72.03618850684249, rel=1e-9)
        assert eps.imag_part == pytest.approx(-66.33236290494723, rel=1e-9)

    def test_zero_salinity_drops_conductivity(self):
        # at S = 0 the ionic term vanishes; the loss must equal the pure
        # Debye relaxation term exactly
        eps = permittivity_klein_swift(20.0, 0.0, F_LBAND)
        t = 20.0
        e0_t = 87.134 - 0.1949 * t - 1.276e-2 * t * t + 2.491e-4 * t ** 3
        tau = 1.768e-11 - 6.086e-13 * t + 1.104e-14 * t * t - 8.111e-17 * t ** 3
        omega = 2 * math.pi * F_LBAND
        debye = (4.9 + (e0_t - 4.9) / (1 + 1j * omega * tau)).imag
        assert eps.imag_part == pytest.approx(debye, rel=1e-12)

    def test_loss_grows_with_salinity(self):
        lo = permittivity_klein_swift(20.0, 30.0, F_LBAND)
        hi = permittivity_klein_swift(20.0, 36.0, F_LBAND)
        assert abs(hi.imag_part) > abs(lo.imag_part)

    def test_real_part_above_one(self):
        for t in (-2.0, 6.0, 20.0, 35.0):
            for s in (0.0, 20.0, 45.0):
                assert permittivity_klein_swift(t, s, F_LBAND).real_part > 1.0

    @pytest.mark.parametrize("kwargs,field", [
        (dict(sst=40.0, sss=35.0), "sst"),
        (dict(sst=20.0, sss=-1.0), "sss"),
        (dict(sst=20.0, sss=35.0, frequency=5e9), "frequency"),
    ])
    def test_domain_errors_name_field(self, kwargs, field):
        kwargs.setdefault("frequency", F_LBAND)
        with pytest.raises(DomainError, match=field):
            permittivity_klein_swift(**kwargs)


class TestFresnelEmissivity:
    def test_nadir_h_equals_v(self):
        for t, s in [(20.0, 35.0), (2.0, 33.0), (30.0, 37.0)]:
            eps = permittivity_klein_swift(t, s, F_LBAND)
            e_h = fresnel_emissivity(eps, 0.0, "H")
            e_v = fresnel_emissivity(eps, 0.0, "V")
            assert abs(e_h - e_v) < 1e-12

    def test_vacuum_is_transparent(self):
        for inc in (0.0, 30.0, 60.0):
            assert fresnel_emissivity(Permittivity(1.0, 0.0), inc, "H") == \
                pytest.approx(1.0, abs=1e-14)
            assert fresnel_emissivity(Permittivity(1.0, 0.0), inc, "V") == \
                pytest.approx(1.0, abs=1e-14)

    def test_v_exceeds_h_off_nadir(self):
        eps = permittivity_klein_swift(20.0, 35.0, F_LBAND)
        assert fresnel_emissivity(eps, 40.0, "V") > fresnel_emissivity(eps, 40.0, "H")

    def test_matches_snell_form_oracle(self):
        eps = permittivity_klein_swift(20.0, 35.0, F_LBAND)
        for inc in (0.0, 15.0, 40.0, 62.0):
            for pol in ("H", "V"):
                want = emissivity_oracle(eps.as_complex(), inc, pol)
                assert fresnel_emissivity(eps, inc, pol) == \
                    pytest.approx(want, rel=1e-12)

    def test_bounds_over_domain(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            t = rng.uniform(-2, 35)
            s = rng.uniform(0, 45)
            inc = rng.uniform(0, 65)
            eps = permittivity_klein_swift(t, s, F_LBAND)
            for pol in ("H", "V"):
                e = fresnel_emissivity(eps, inc, pol)
                assert 0.0 < e < 1.0

    def test_rejects_high_incidence(self):
        eps = permittivity_klein_swift(20.0, 35.0, F_LBAND)
        for inc in (66.0, 90.0, 120.0):
            with pytest.raises(DomainError):
                fresnel_emissivity(eps, inc, "H")

    def test_rejects_bad_polarization(self):
        eps = permittivity_klein_swift(20.0, 35.0, F_LBAND)
        with pytest.raises(DomainError):
            fresnel_emissivity(eps, 30.0, "X")


class TestFirstStokes:
    def test_definition_at_nadir_without_wind(self):
        state = SeaState(sss=35.0, sst=20.0, wind=0.0)
        eps = permittivity_klein_swift(20.0, 35.0, F_LBAND)
        e_nadir = fresnel_emissivity(eps, 0.0, "H")
        want = 2.0 * e_nadir * (20.0 + 273.15)
        assert first_stokes_tb(state, 0.0) == pytest.approx(want, rel=1e-12)

    def test_oracle_fixture(self):
        state = SeaState(sss=35.0, sst=20.0, wind=7.0)
        got = first_stokes_tb(state, 30.0, RadiometerSpec(wind_coeff=0.4))
        assert got == pytest.approx(187.99342743010476, rel=1e-9)

    def test_positive_and_wind_linear(self):
        base = first_stokes_tb(SeaState(35.0, 20.0, 0.0), 30.0)
        windy = first_stokes_tb(SeaState(35.0, 20.0, 10.0), 30.0,
                                RadiometerSpec(wind_coeff=0.4))
        assert base > 0
        assert windy == pytest.approx(base + 4.0, rel=1e-12)

    def test_monotone_in_salinity(self):
        grid = np.linspace(30.0, 40.0, 51)
        for sst, inc in [(5.0, 0.0), (20.0, 30.0), (30.0, 50.0)]:
            tb = first_stokes_grid(grid, sst, 5.0, inc)
            assert np.all(np.diff(tb) < 0)

    def test_nadir_std_under_band_variability(self):
        # southern-band conditions: per-polarization nadir TB std under
        # 0.3 psu salinity variability should be about 0.09 K; reproduce
        # within a factor of 2 (the first-Stokes sum is twice that)
        rng = np.random.default_rng(11)
        sss = np.clip(34.0 + 0.3 * rng.standard_normal(20000), 0, 45)
        tb = first_stokes_grid(sss, 6.0, 9.0, 0.0,
                               RadiometerSpec(wind_coeff=0.4))
        tb_pol = tb / 2.0
        assert 0.045 <= tb_pol.std() <= 0.18

    def test_grid_shape(self):
        tb = first_stokes_grid(np.array([34.0, 35.0]), 20.0, 5.0,
                               np.array([0.0, 30.0, 50.0]))
        assert tb.shape == (2, 3)


class TestSensitivity:
    def test_cold_less_sensitive_than_warm(self):
        for sss in (33.0, 35.0, 37.0):
            for inc in (0.0, 30.0, 50.0):
                cold = sss_sensitivity(SeaState(sss, 5.0, 0.0), inc)
                warm = sss_sensitivity(SeaState(sss, 25.0, 0.0), inc)
                assert abs(cold) < abs(warm)

    def test_step_halving_converged(self):
        state = SeaState(35.0, 15.0, 0.0)
        full = sss_sensitivity(state, 0.0, step=0.01)
        half = sss_sensitivity(state, 0.0, step=0.005)
        assert abs(full - half) < 1e-4

    def test_oracle_fixture(self):
        got = sss_sensitivity(SeaState(35.0, 15.0, 0.0), 0.0)
        assert got == pytest.approx(-0.9126669797780096, rel=1e-6)


class TestSeaState:
    def test_bounds_enforced(self):
        with pytest.raises(DomainError):
            SeaState(sss=50.0, sst=20.0, wind=5.0)
        with pytest.raises(DomainError):
            SeaState(sss=35.0, sst=-5.0, wind=5.0)
        with pytest.raises(DomainError):
            SeaState(sss=35.0, sst=20.0, wind=40.0)

    def test_geo_optional(self):
        state = SeaState(sss=35.0, sst=20.0, wind=5.0, lat=-47.0, lon=12.5)
        assert state.lat == -47.0
        with pytest.raises(DomainError):
            SeaState(sss=35.0, sst=20.0, wind=5.0, lat=100.0)

    def test_radiometer_validation(self):
        with pytest.raises(DomainError):
            RadiometerSpec(frequency=-1.0)
        with pytest.raises(DomainError):
            RadiometerSpec(wind_coeff=-0.1)

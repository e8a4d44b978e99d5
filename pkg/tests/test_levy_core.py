import math

import numpy as np
import pytest

from symlevy.errors import DomainError, MeasureChangeError, ParameterError
from symlevy.levy_core import (
    BesselGenerator,
    CharacteristicTriplet,
    GaussianGenerator,
    MeasureChange,
    NIGGenerator,
    SymmetricFamily,
    TripletGenerator,
    apply_change,
    char_exponent,
    family_from_triplet,
    marginal_at_t,
    natural_change,
    nig_triplet,
    scale_jumps,
    scaling_change,
    vg_triplet,
)

SIGMA2 = 0.19**2
LAM = 0.75
# NIG fixture with zeta = alpha * delta = 0.75 and variance delta / alpha = 0.0361
NIG_ALPHA = math.sqrt(LAM / SIGMA2)
NIG_DELTA = math.sqrt(LAM * SIGMA2)


@pytest.fixture(scope="module")
def vg():
    return vg_triplet(0.0, SIGMA2, LAM)


@pytest.fixture(scope="module")
def nig():
    return nig_triplet(0.0, NIG_ALPHA, NIG_DELTA)


class TestGenerators:
    def test_normalisation(self):
        for psi in (GaussianGenerator(), BesselGenerator(0.3), BesselGenerator(50.0), NIGGenerator(0.2), NIGGenerator(1e4)):
            assert psi(0.0) == 1.0
            h = 1e-7
            assert (1.0 - psi(h)) / h == pytest.approx(1.0, abs=1e-5)

    def test_closed_forms(self):
        v = 0.37
        assert BesselGenerator(1.5)(v) == pytest.approx((1 + v / 1.5) ** -1.5, rel=1e-14)
        assert NIGGenerator(0.4)(v) == pytest.approx(math.exp(0.4 * (1 - math.sqrt(1 + 2 * v / 0.4))), rel=1e-14)
        assert GaussianGenerator()(v) == pytest.approx(math.exp(-v), rel=1e-15)

    def test_nig_large_zeta_is_gaussian(self):
        # the cancellation-free form must stay accurate as zeta grows
        assert NIGGenerator(1e12).log(0.8) == pytest.approx(-0.8, rel=1e-10)

    def test_exponential_moment_domain(self):
        assert BesselGenerator(0.75).log(-0.5 * SIGMA2) == pytest.approx(-0.75 * math.log1p(-SIGMA2 / 1.5), rel=1e-14)
        with pytest.raises(DomainError):
            BesselGenerator(0.75)(-0.75)
        NIGGenerator(0.75)(-0.375)  # boundary value is finite
        with pytest.raises(DomainError):
            NIGGenerator(0.75)(-0.3751)

    @pytest.mark.parametrize("psi", [BesselGenerator(0.75), NIGGenerator(0.75), GaussianGenerator()])
    def test_at_time_matches_power(self, psi):
        t = 2.7
        psi_t = psi.at_time(t)
        for v in (0.0, 0.2, 3.0):
            assert psi_t(v) == pytest.approx(psi(v / t) ** t, rel=1e-13)

    def test_invalid_shape(self):
        with pytest.raises(ParameterError):
            BesselGenerator(0.0)
        with pytest.raises(ParameterError):
            NIGGenerator(-1.0)


class TestCharExponent:
    def test_zero(self, vg):
        assert char_exponent(vg, 0.0) == 0

    def test_pure_brownian(self):
        assert char_exponent(CharacteristicTriplet(0.0, 1.0), 2.0) == pytest.approx(-2.0, abs=1e-15)

    def test_drift_is_imaginary_part(self):
        assert char_exponent(CharacteristicTriplet(0.3, 0.5), 2.0).imag == pytest.approx(0.6, abs=1e-15)

    def test_vg_closed_form(self, vg):
        expected = -LAM * math.log1p(SIGMA2 / (2 * LAM))
        assert char_exponent(vg, 1.0).real == pytest.approx(expected, abs=1e-8)

    @pytest.mark.parametrize("u", [-10.0, -3.0, -0.5, 0.7, 4.0, 10.0])
    def test_agrees_with_family(self, u):
        tri = vg_triplet(0.05, SIGMA2, LAM)
        fam = family_from_triplet(tri)
        lhs = np.exp(char_exponent(tri, u))
        rhs = np.exp(1j * u * fam.mu) * BesselGenerator(LAM)(0.5 * fam.sigma2 * u * u)
        assert abs(lhs - rhs) < 1e-7

    @pytest.mark.parametrize("u", [-10.0, -1.0, 2.5, 10.0])
    def test_nig_agrees_with_closed_form(self, nig, u):
        fam = family_from_triplet(nig)
        lhs = np.exp(char_exponent(nig, u))
        rhs = NIGGenerator(LAM)(0.5 * fam.sigma2 * u * u)
        assert abs(lhs - rhs) < 1e-7


class TestFamilyFromTriplet:
    def test_gaussian(self):
        fam = family_from_triplet(CharacteristicTriplet(0.1, 0.3))
        assert fam.sigma2 == pytest.approx(0.09, rel=1e-15)
        assert isinstance(fam.psi, GaussianGenerator)
        assert fam.psi(1.3) == pytest.approx(math.exp(-1.3))

    def test_vg_variance_and_generator(self, vg):
        fam = family_from_triplet(vg)
        assert fam.sigma2 == pytest.approx(SIGMA2, rel=1e-9)
        closed = BesselGenerator(LAM)
        for v in np.linspace(0.0, 5.0, 21):
            assert abs(fam.psi(v) - closed(v)) < 1e-7

    def test_nig_variance_and_generator(self, nig):
        fam = family_from_triplet(nig)
        assert fam.sigma2 == pytest.approx(SIGMA2, rel=1e-9)
        closed = NIGGenerator(LAM)
        for v in np.linspace(0.0, 5.0, 11):
            assert abs(fam.psi(v) - closed(v)) < 1e-7

    def test_generator_slope(self, vg):
        psi = family_from_triplet(vg).psi
        assert (1.0 - psi(1e-6)) / 1e-6 == pytest.approx(1.0, abs=1e-4)

    def test_negative_argument_is_exponential_moment(self, vg):
        psi = family_from_triplet(vg).psi
        v = -0.5 * SIGMA2
        assert psi.log(v) == pytest.approx(BesselGenerator(LAM).log(v), abs=1e-8)

    def test_brownian_plus_jumps(self):
        tri = vg_triplet(0.0, SIGMA2, LAM, c=0.1)
        fam = family_from_triplet(tri)
        assert fam.sigma2 == pytest.approx(0.01 + SIGMA2, rel=1e-9)
        v = 0.8
        expected = math.exp(-0.01 * v / fam.sigma2) * BesselGenerator(LAM)(SIGMA2 * v / fam.sigma2)
        assert fam.psi(v) == pytest.approx(expected, abs=1e-8)

    def test_divergent_second_moment(self):
        # stable-like density y^{-2.5}: a Levy measure with infinite variance
        tri = CharacteristicTriplet(0.0, 0.0, lambda y: y**-2.5)
        with pytest.raises(ParameterError):
            family_from_triplet(tri)

    def test_not_a_levy_measure(self):
        with pytest.raises(ParameterError):
            CharacteristicTriplet(0.0, 0.0, lambda y: y**-3.5).validate()

    def test_validate_accepts_fixtures(self, vg, nig):
        vg.validate()
        nig.validate()

    def test_zero_variance(self):
        with pytest.raises(ParameterError):
            family_from_triplet(CharacteristicTriplet(0.0, 0.0))

    def test_negative_brownian_coefficient(self):
        with pytest.raises(ParameterError):
            CharacteristicTriplet(0.0, -0.1)


class TestMarginal:
    def test_identity(self):
        fam = SymmetricFamily(0.1, 0.2, BesselGenerator(LAM))
        assert marginal_at_t(fam, 1.0) is fam

    def test_gaussian_stable(self):
        fam = marginal_at_t(SymmetricFamily(0.1, 0.2, GaussianGenerator()), 3.0)
        assert fam.psi(0.7) == pytest.approx(math.exp(-0.7))
        assert (fam.mu, fam.sigma2) == pytest.approx((0.3, 0.6))

    def test_bessel_shape_scales(self):
        fam = marginal_at_t(SymmetricFamily(0.0, 1.0, BesselGenerator(LAM)), 2.0)
        for v in (0.1, 1.0, 4.0):
            assert fam.psi(v) == pytest.approx((1 + v / (2 * LAM)) ** (-2 * LAM), rel=1e-13)

    def test_powered_generic_generator(self, vg):
        fam = family_from_triplet(vg)
        fam_t = marginal_at_t(fam, 0.5)
        assert fam_t.psi(0.3) == pytest.approx(BesselGenerator(LAM * 0.5)(0.3), abs=1e-7)

    def test_char_fn_at_time(self):
        fam = SymmetricFamily(0.02, 0.04, NIGGenerator(0.6))
        fam_t = marginal_at_t(fam, 4.0)
        u = 3.1
        assert fam_t.char_fn(u) == pytest.approx(fam.char_fn(u) ** 4, rel=1e-12)

    def test_bad_time(self):
        with pytest.raises(ParameterError):
            marginal_at_t(SymmetricFamily(0.0, 1.0, GaussianGenerator()), 0.0)


class TestMeasureChange:
    def test_identity(self, vg):
        out = apply_change(vg, MeasureChange())
        assert out.mu == vg.mu and out.c == vg.c
        assert out.nu_density(0.3) == vg.nu_density(0.3)

    def test_girsanov_drift(self):
        tri = vg_triplet(0.01, SIGMA2, LAM, c=0.2)
        out = apply_change(tri, MeasureChange(eta=0.5))
        assert out.mu == pytest.approx(0.01 + 0.04 * 0.5, rel=1e-15)
        assert out.c == tri.c
        assert out.nu_density(0.2) == tri.nu_density(0.2)

    def test_jump_tilt_density(self, vg):
        out = apply_change(vg, MeasureChange(phi=lambda y: -y))
        for y in (0.01, 0.2, 1.5):
            assert out.nu_density(y) == pytest.approx(math.exp(-y) * vg.nu_density(y), rel=1e-15)

    @pytest.mark.parametrize("beta", [0.5, 0.9, 1.3])
    def test_scaling_change_variance(self, vg, beta):
        out = apply_change(vg, scaling_change(vg, beta))
        assert family_from_triplet(out).sigma2 == pytest.approx(beta**2 * SIGMA2, abs=1e-7)

    def test_scaling_change_matches_pushforward(self, vg):
        beta = 1.3
        tilted = apply_change(vg, scaling_change(vg, beta))
        pushed = scale_jumps(vg, beta)
        for y in (0.001, 0.05, 0.4, 2.0):
            assert tilted.nu_density(y) == pytest.approx(pushed.nu_density(y), rel=1e-12)

    def test_divergent_hellinger_integral(self, vg):
        # (exp(phi/2) - 1)^2 ~ exp(y) against nu ~ exp(-16 y) / y is fine, exp(40 y) is not
        apply_change(vg, MeasureChange(phi=lambda y: 2 * y))
        with pytest.raises(MeasureChangeError, match="exp\\(phi/2\\) - 1"):
            apply_change(vg, MeasureChange(phi=lambda y: 40.0 * y))

    def test_symmetry_preserved(self, vg):
        psi = family_from_triplet(apply_change(vg, MeasureChange(phi=lambda y: -0.5 * y))).psi
        assert psi(0.0) == 1.0
        assert (1.0 - psi(1e-6)) / 1e-6 == pytest.approx(1.0, abs=1e-4)
        assert isinstance(psi(0.7), float)


class TestGeneratorInvariance:
    @pytest.mark.parametrize("beta", [0.5, 0.9, 1.3])
    @pytest.mark.parametrize("name", ["vg", "nig"])
    def test_natural_scaling(self, name, beta, request):
        tri = request.getfixturevalue(name)
        psi = BesselGenerator(LAM) if name == "vg" else NIGGenerator(LAM)
        changed = natural_change(tri, beta=beta)
        s2 = changed.variance()
        assert abs(math.sqrt(s2) - beta * math.sqrt(SIGMA2)) < 1e-7
        psi_new = TripletGenerator(changed, s2)
        gap = max(abs(psi_new(v) - psi(v)) for v in np.linspace(0.0, 10.0, 41))
        assert gap < 1e-6

    def test_brownian_case_moves_drift_only(self):
        tri = vg_triplet(0.0, SIGMA2, LAM, c=0.1)
        out = natural_change(tri, eta=2.0, beta=5.0)
        assert out.mu == pytest.approx(0.02)
        assert out.nu_density(0.3) == tri.nu_density(0.3)

    def test_bad_beta(self, vg):
        with pytest.raises(ParameterError):
            scale_jumps(vg, 0.0)

import math

import pytest

from models.domain.quad_domain import Domain
from services.analysis.quadrature_service import quadrature_service
from services.exceptions import DomainError, InvalidInputError
from services.series.poincare_service import poincare_service
from services.verification.verification_service import verification_service

PETERSSON_NORM_DELTA = 1.0353620568043209e-06


class TestClosedForms:
    @pytest.mark.parametrize("a", [0, 1, -1, 1 + 1j, 3 - 2j])
    @pytest.mark.parametrize("b", [0, 2, 4, 8])
    def test_I_ab_matches_quadrature(self, a, b):
        closed, numeric = quadrature_service.I_ab(a, b)
        assert numeric == pytest.approx(closed, rel=1e-9)

    def test_I_ab_zero_exponent(self):
        closed, _ = quadrature_service.I_ab(0, 2)
        assert closed == pytest.approx(math.pi / 2)

    def test_I_ab_removable_pole(self):
        closed, numeric = quadrature_service.I_ab(2j, 2)
        assert closed == numeric

    def test_I_ab_rejects_odd_b(self):
        with pytest.raises(InvalidInputError):
            quadrature_service.I_ab(1.0, 3)

    @pytest.mark.parametrize("m", [-2, -1, 0, 1, 2])
    def test_hyperbolic_constant(self, m):
        xi = (3 + math.sqrt(5)) / 2
        closed = quadrature_service.hyperbolic_inner_constant(m, 12, xi)
        numeric = quadrature_service.hyperbolic_inner_integral(m, 12, xi)
        assert abs(numeric - closed) <= 1e-8 * abs(closed)

    def test_elliptic_constant_needs_nonnegative_exponent(self):
        with pytest.raises(InvalidInputError):
            quadrature_service.elliptic_inner_constant(1, 12, 2)
        assert quadrature_service.elliptic_inner_constant(4, 12, 2) > 0

    def test_chowla_selberg(self):
        assert -0.12 < quadrature_service.chowla_selberg_delta_i() < -0.11


class TestDiscLemmas:
    @pytest.mark.parametrize("k", [4, 12])
    def test_disc_integral(self, k):
        diagonal, _ = quadrature_service.lemma_disc_integral(2, 2, k, 1.0)
        for a in range(3):
            for b in range(3):
                closed, numeric = quadrature_service.lemma_disc_integral(a, b, k, 1.0)
                assert abs(numeric - closed) <= 1e-9 * diagonal
                if a != b:
                    assert closed == 0.0

    def test_sector_is_fraction_of_disc(self):
        # N = 2, m = 4: exponent 2
        sector, _ = quadrature_service.lemma_sector_integral(4, 4, 12, 1.0, 2)
        disc, _ = quadrature_service.lemma_disc_integral(2, 2, 12, 1.0)
        assert sector == pytest.approx(disc / 2)

    def test_sector_orthogonality(self):
        diagonal, _ = quadrature_service.lemma_sector_integral(3, 3, 12, 1.0, 3)
        closed, numeric = quadrature_service.lemma_sector_integral(2, 3, 12, 1.0, 3)
        assert closed == 0.0
        assert abs(numeric) <= 1e-9 * diagonal

    def test_sector_rejects_negative_exponent(self):
        with pytest.raises(InvalidInputError):
            quadrature_service.lemma_sector_integral(1, 3, 12, 1.0, 2)


class TestMeanValue:
    def test_constant_weight_two(self):
        R = math.tanh(0.25)
        assert quadrature_service.mean_value_constant(0.5, 2) == pytest.approx(-math.pi * math.log(1 - R * R))

    def test_delta_at_i(self, delta):
        scale = abs(delta(1j))
        residual = quadrature_service.mean_value_check(delta, 12, 1j, 0.5)
        assert residual <= 1e-7 * scale

    def test_odd_weight(self, delta):
        with pytest.raises(InvalidInputError):
            quadrature_service.mean_value_check(delta, 3, 1j, 0.5)

    def test_ball_too_low(self, delta):
        with pytest.raises(DomainError):
            quadrature_service.mean_value_check(delta, 12, 0.06j, 1.0)


def test_petersson_norm_of_delta(delta):
    value = quadrature_service.petersson_inner(delta, delta)
    assert value.real == pytest.approx(PETERSSON_NORM_DELTA, rel=1e-6)
    assert abs(value.imag) < 1e-12


def test_disc_radius():
    assert Domain.ball(1j, 0.8).disc_radius == pytest.approx(math.tanh(0.4))


class TestPoincareInnerProducts:
    def test_parabolic(self, delta, sl2z, cusp_datum):
        series = poincare_service.parabolic_series(sl2z, 12, 1, cusp_datum)
        inner = quadrature_service.petersson_inner(delta, series)
        # tau(1) = 1
        expected = quadrature_service.parabolic_inner_constant(1, 12)
        assert inner == pytest.approx(expected, rel=1e-3)

    def test_parabolic_scales_with_coefficient(self, delta, sl2z, cusp_datum):
        first = quadrature_service.petersson_inner(delta, poincare_service.parabolic_series(sl2z, 12, 1, cusp_datum))
        second = quadrature_service.petersson_inner(delta, poincare_service.parabolic_series(sl2z, 12, 2, cusp_datum))
        ratio = second / first
        # tau(2) = -24 and the constant scales as m^{1-k}
        assert ratio == pytest.approx(-24 * 2.0 ** -11, rel=1e-3)

    def test_elliptic(self):
        residual, detail = verification_service.check_elliptic_inner()
        assert residual <= 1e-2, detail

    def test_hyperbolic(self):
        residual, detail = verification_service.check_hyperbolic_inner()
        assert residual <= 1e-2, detail

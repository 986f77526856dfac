import numpy as np
import pytest

from models.domain.group_element import GroupElement
from services.arithmetic.moebius_service import moebius_service
from services.exceptions import InvalidInputError
from services.series.second_order_service import PeriodHom, second_order_service
from services.verification.verification_service import LAW_CASES, verification_service
from tests.conftest import LEVEL11_ELEMENTS

T = GroupElement(1, 1, 0, 1)
S = GroupElement(0, -1, 1, 0)
POINTS = (0.2 + 1.5j, 0.1 + 1.2j, -0.3 + 2.0j)


@pytest.fixture(scope="module")
def basis(level11):
    return second_order_service.hom_basis(level11)


def _scale(hom):
    return max(abs(hom(g)) for g in LEVEL11_ELEMENTS)


class TestPeriodHom:
    def test_basis_sizes(self, sl2z, basis):
        assert second_order_service.hom_basis(sl2z) == []
        assert len(basis) == 2

    def test_additive(self, basis):
        elements = LEVEL11_ELEMENTS + (GroupElement(1, 0, 11, 1),)
        for hom in basis:
            scale = _scale(hom)
            assert scale > 0
            for g in elements:
                for h in elements:
                    assert abs(hom(g @ h) - hom(g) - hom(h)) <= 1e-8 * scale

    def test_vanishes_on_parabolics(self, basis):
        parabolics = [T, GroupElement(1, 0, 11, 1)] + [g @ T @ g.inverse() for g in LEVEL11_ELEMENTS]
        for hom in basis:
            assert hom(T) == 0
            assert max(abs(hom(p)) for p in parabolics) <= 1e-8 * _scale(hom)

    def test_sign_of_matrix_is_irrelevant(self, basis):
        g = LEVEL11_ELEMENTS[0]
        negated = GroupElement(*(-x for x in g.entries))
        assert basis[0](negated) == basis[0](g)

    def test_path_quadrature_agrees(self, basis):
        hom = basis[0]
        for g in LEVEL11_ELEMENTS:
            assert hom.by_path(g) == pytest.approx(hom(g), rel=1e-7)

    def test_lambda_periods(self, basis):
        hom = basis[0]
        pair = second_order_service.lambda_pair(hom)
        scale = _scale(hom)
        for g in LEVEL11_ELEMENTS:
            for z in POINTS:
                assert abs(pair.period_from_lambda(g, z) - hom(g)) <= 1e-8 * scale

    def test_lambda_periods_near_the_real_axis(self, basis):
        hom = basis[0]
        pair = second_order_service.lambda_pair(hom)
        scale = _scale(hom)
        for g, points in LAW_CASES:
            for z in points:
                assert abs(pair.period_from_lambda(g, z) - hom(g)) <= 1e-8 * scale

    def test_zero_hom(self, level11):
        zero = PeriodHom(None, None, level11)
        assert zero.is_zero
        assert zero(LEVEL11_ELEMENTS[1]) == 0
        assert zero.by_path(LEVEL11_ELEMENTS[1]) == 0

    def test_rejects_wrong_weight(self, level11, delta_qexp):
        with pytest.raises(InvalidInputError):
            PeriodHom(delta_qexp, None, level11)

    def test_rejects_wrong_group(self, sl2z, newform):
        with pytest.raises(InvalidInputError):
            PeriodHom(newform, None, sl2z)

    def test_twist_vanishes_on_generator(self, level11, basis):
        g = LEVEL11_ELEMENTS[1]
        twist = second_order_service.twist_for_hyperbolic(level11, g)
        first, second = basis
        assert abs(twist(g)) <= 1e-8 * abs(first(g)) * abs(second(g))


class TestSecondOrder:
    def test_unknown_tag(self, level11, basis):
        datum = moebius_service.make_parabolic_datum(level11)
        with pytest.raises(InvalidInputError):
            second_order_service.build_second_order("cusp", 1, 12, datum, basis[0], level11)

    def test_hyperbolic_needs_hyperbolic_datum(self, level11, basis):
        datum = moebius_service.make_parabolic_datum(level11)
        with pytest.raises(InvalidInputError):
            second_order_service.build_second_order("hyp", 1, 12, datum, basis[0], level11)

    def test_unknown_family(self, level11):
        with pytest.raises(InvalidInputError):
            second_order_service.spanning_family("third", level11, 12, [1])

    def test_elliptic_invariance_check(self, delta):
        scale = float(np.max(np.abs(delta(np.array(POINTS)))))
        assert second_order_service.elliptic_invariance_check(delta, 12, S, POINTS) < 1e-9 * scale
        with pytest.raises(InvalidInputError):
            second_order_service.elliptic_invariance_check(delta, 12, T, POINTS)


def test_gram_rank():
    def f(z):
        return np.asarray(z) ** 2

    def g(z):
        return 2 * np.asarray(z) ** 2

    def h(z):
        return np.exp(np.asarray(z))

    points = [1j, 2j, 1 + 1j]
    assert second_order_service.gram_rank([f, g], points) == 1
    assert second_order_service.gram_rank([f, g, h], points) == 2


def test_gram_rank_scales_rows():
    def big(z):
        return np.exp(np.asarray(z))

    def small(z):
        return 1e-8 * np.asarray(z) ** 2

    def zero(z):
        return np.zeros_like(np.asarray(z))

    points = [1j, 2j, 1 + 1j]
    assert second_order_service.gram_rank([big, small], points) == 2
    assert second_order_service.gram_rank([big, small, zero], points) == 2


def test_dimension_bound(sl2z, level11):
    assert level11.cusp_form_dimension(12) == 10
    assert sl2z.cusp_form_dimension(12) == 1
    assert second_order_service.dimension_bound(level11, 12) == 30
    assert second_order_service.dimension_bound(sl2z, 12) == 1


class TestLambdaPair:
    def test_plus_matches_path_quadrature(self, basis):
        pair = second_order_service.lambda_pair(basis[0])
        z = 0.2 + 1.5j
        assert pair.plus(z) == pytest.approx(pair.plus_by_quadrature(z), rel=1e-8)
        assert pair.plus(1j) == 0

    def test_minus_is_zero_without_minus_form(self, basis):
        pair = second_order_service.lambda_pair(basis[0])
        assert pair.minus(0.2 + 1.5j) == 0

    def test_logarithmic_growth(self, basis):
        pair = second_order_service.lambda_pair(basis[0])
        heights = [0.5, 1.0, 2.0, 4.0, 8.0]
        constant = second_order_service.log_growth_constant(pair, 0.3, heights)
        assert 0 < constant < float("inf")
        assert all(abs(pair.plus(complex(0.3, y))) <= constant * (1 + abs(np.log(y))) + 1e-15 for y in heights)


class TestSecondOrderLaw:
    """Gamma0(11), weight 4, phi = e(z), L running over the basis of Hom0."""

    def test_transformation_law(self):
        residual, detail = verification_service.check_second_order_law()
        assert residual <= 1e-4, detail

    def test_twisted_series_are_periodic(self):
        residual, _ = verification_service.check_parabolic_law()
        assert residual <= 1e-6

    def test_law_on_isometric_circle(self, basis):
        plain, first, _ = verification_service.law_series
        g, points = LAW_CASES[0]
        z = np.array(points)
        moved = moebius_service.slash_eval(first, 4, g, z)
        expected = first(z) - basis[0](g) * plain(z)
        assert np.max(np.abs(moved - expected)) <= 1e-4 * np.max(np.abs(first(z)))

    def test_twisted_series_are_independent(self, level11):
        family = list(verification_service.law_series)
        points = [0.2 + 1.5j, 0.1 + 1.2j, -0.3 + 2.0j, 0.45 + 0.9j, -0.15 + 1.0j, 0.35 + 1.7j]
        assert second_order_service.gram_rank(family, points) == 3
        assert second_order_service.dimension_bound(level11, 4) == 6

    def test_zero_hom_gives_zero_series(self):
        residual, _ = verification_service.check_zero_hom()
        assert residual == 0

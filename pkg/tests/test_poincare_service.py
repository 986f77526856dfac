import numpy as np
import pytest

from models.domain.group_element import GroupElement
from services.arithmetic.coset_service import coset_service
from services.arithmetic.moebius_service import moebius_service
from services.exceptions import InvalidInputError, SideConditionError
from services.series.poincare_service import TranslateFamilies, poincare_service
from services.series.second_order_service import second_order_service

POINTS = (0.2 + 1.5j, 0.1 + 1.2j, -0.3 + 2.0j)


class ConstantHom:
    """Homomorphism stand-in that is 1 everywhere, so it never vanishes on a stabilizer."""

    def __call__(self, g):
        return 1.0

    def values(self, reps):
        return [1.0] * len(reps)


class TestSeeds:
    def test_elliptic_side_condition(self, i_datum):
        with pytest.raises(SideConditionError):
            poincare_service.phi_ell(1, 12, i_datum)
        assert poincare_service.phi_ell(3, 12, i_datum).tag == "elliptic"

    def test_weight_two_rejected(self, cusp_datum):
        with pytest.raises(InvalidInputError):
            poincare_service.phi_par(1, 2, cusp_datum)

    def test_seeds_are_stabilizer_invariant(self, cusp_datum, d5_datum, i_datum, rho_datum):
        seeds = [
            poincare_service.phi_par(1, 12, cusp_datum),
            poincare_service.phi_hyp(1, 12, d5_datum),
            poincare_service.phi_ell(4, 12, i_datum),
            poincare_service.phi_ell(2, 12, rho_datum),
        ]
        for seed in seeds:
            assert seed.invariance_residual(POINTS) < 1e-9

    def test_elliptic_stabilizer_is_rotation(self, i_datum):
        seed = poincare_service.phi_ell(4, 12, i_datum)
        assert seed.stabilizer_generator == i_datum.epsilon


class TestSeries:
    def test_parabolic_series_is_modular(self, sl2z, cusp_datum):
        series = poincare_service.parabolic_series(sl2z, 12, 1, cusp_datum)
        gammas = [GroupElement(0, -1, 1, 0), GroupElement(1, 1, 0, 1)]
        assert poincare_service.modularity_residual(series, 12, gammas, POINTS) < 1e-5

    def test_scalar_and_array_evaluation(self, sl2z, cusp_datum):
        series = poincare_service.parabolic_series(sl2z, 12, 1, cusp_datum, c_max=6)
        value, last_shell = series.evaluate(0.1 + 1.2j)
        assert isinstance(value, complex)
        assert last_shell >= 0
        array = series(np.array([0.1 + 1.2j, 0.2 + 1.5j]))
        assert array[0] == pytest.approx(value)

    def test_stabilizer_mismatch(self, sl2z, cusp_datum, d5_datum):
        cosets = coset_service.cosets_hyperbolic(sl2z, d5_datum, 10)
        with pytest.raises(InvalidInputError):
            poincare_service.series(poincare_service.phi_par(1, 12, cusp_datum), cosets)

    def test_seed_weight_must_match(self, sl2z, d5_datum):
        cosets = coset_service.cosets_hyperbolic(sl2z, d5_datum, 10)
        with pytest.raises(InvalidInputError):
            poincare_service.relative_poincare(poincare_service.phi_hyp(0, 12, d5_datum), cosets, 14, 1j)

    def test_twist_must_vanish_on_stabilizer(self, sl2z, d5_datum):
        cosets = coset_service.cosets_hyperbolic(sl2z, d5_datum, 10)
        seed = poincare_service.phi_hyp(0, 12, d5_datum)
        with pytest.raises(SideConditionError):
            poincare_service.relative_poincare_twisted(seed, ConstantHom(), cosets, 12, 1j)

    def test_bound_doubling_halves_the_change(self, sl2z, i_datum):
        z = 0.1 + 0.9j
        values = [poincare_service.elliptic_series(sl2z, 12, 4, i_datum, entry_max=bound)(z) for bound in (5, 10, 20)]
        first, second = abs(values[1] - values[0]), abs(values[2] - values[1])
        assert second < first / 2


class TestEllipticStar:
    def test_vanishes_off_residue_class(self, sl2z, i_datum):
        z = np.array(POINTS)
        star = poincare_service.phi_elliptic_star(z, 1, 12, i_datum, sl2z, 8)
        reference = poincare_service.elliptic_series(sl2z, 12, 4, i_datum, 8)(z)
        assert np.max(np.abs(star)) < 1e-9 * np.max(np.abs(reference))

    def test_is_order_times_series(self, sl2z, i_datum):
        z = np.array(POINTS)
        star = poincare_service.phi_elliptic_star(z, 2, 12, i_datum, sl2z, 8)
        series = poincare_service.elliptic_series(sl2z, 12, 4, i_datum, 8)(z)
        assert np.allclose(star, i_datum.order * series, rtol=1e-9)

    def test_negative_exponent(self, sl2z, i_datum):
        with pytest.raises(InvalidInputError):
            poincare_service.phi_elliptic_star(1j, -1, 12, i_datum, sl2z, 4)


def _direct_family(seed, g, z, n_max):
    """sum_{|n| <= n_max} (phi|_k g T^n)(z), term by term."""
    w = z + np.arange(-n_max, n_max + 1)
    return complex(np.sum(seed(g.act(w)) / g.j(w) ** seed.weight))


class TestTranslateFamilies:
    def test_matches_direct_sum_at_infinity(self, cusp_datum):
        seed = poincare_service.phi_par(1, 12, cusp_datum)
        g = GroupElement(1, 0, 2, 1)
        families = TranslateFamilies.build(1, 12, [cusp_datum.sigma_inv @ g], np.ones(1), np.array([True]))
        z = 0.1 + 0.8j
        value, outer = families.evaluate(np.array([z]))
        expected = _direct_family(seed, g, z, 400)
        assert value[0] == pytest.approx(expected, rel=1e-10)
        assert outer[0] == pytest.approx(value[0])

    def test_matches_direct_sum_at_cusp_zero(self, level11):
        datum = moebius_service.make_parabolic_datum(level11, 0)
        seed = poincare_service.phi_par(1, 4, datum)
        g = GroupElement(2, 1, 11, 6)
        families = TranslateFamilies.build(1, 4, [datum.sigma_inv @ g], np.ones(1), np.array([False]))
        z = 0.3 + 0.5j
        value, outer = families.evaluate(np.array([z]))
        expected = _direct_family(seed, g, z, 20000)
        assert value[0] == pytest.approx(expected, rel=1e-8)
        assert outer[0] == 0

    def test_more_terms_for_lower_points(self, cusp_datum):
        families = TranslateFamilies.build(1, 12, [GroupElement(0, -1, 1, 0)], np.ones(1), np.array([True]))
        assert families.fourier_terms(0.05) > families.fourier_terms(0.5) > 0

    def test_zero_weights_need_no_terms(self, cusp_datum):
        families = TranslateFamilies.build(1, 12, [GroupElement(0, -1, 1, 0)], np.zeros(1), np.array([True]))
        assert families.fourier_terms(0.01) == 0
        value, _ = families.evaluate(np.array([0.3 + 0.01j]))
        assert value[0] == 0

    def test_twisted_series_is_exactly_periodic(self, level11):
        datum = moebius_service.make_parabolic_datum(level11)
        hom = second_order_service.hom_basis(level11)[0]
        series = poincare_service.parabolic_series(level11, 4, 1, datum, 110, hom)
        points = [(-4 + 0.28 + 0.96j) / 11, 0.35 + 0.09j, -0.2 + 0.3j]
        residual = poincare_service.modularity_residual(series, 4, [GroupElement(1, 1, 0, 1)], points)
        assert residual < 1e-10

    def test_cusp_zero_series_is_periodic(self, level11):
        datum = moebius_service.make_parabolic_datum(level11, 0)
        series = poincare_service.parabolic_series(level11, 4, 1, datum, 30)
        points = [0.1 + 0.2j, -0.35 + 0.6j]
        assert poincare_service.modularity_residual(series, 4, [GroupElement(1, 1, 0, 1)], points) < 1e-10

    def test_parabolic_twist_needs_vanishing_translation(self, sl2z, cusp_datum):
        cosets = coset_service.cosets_parabolic(sl2z, cusp_datum, 4)
        with pytest.raises(SideConditionError):
            poincare_service.series(poincare_service.phi_par(1, 12, cusp_datum), cosets, ConstantHom())

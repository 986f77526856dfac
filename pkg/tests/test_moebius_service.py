import math

import numpy as np
import pytest

from models.domain.group import ArithmeticGroup
from models.domain.group_element import INFINITY, S, T, GroupElement
from services.arithmetic.moebius_service import moebius_service
from services.exceptions import DomainError, InvalidInputError, PoleError

SAMPLE = (GroupElement(2, 1, 1, 1), S, GroupElement(1, 3, 2, 7), GroupElement(5, -2, 3, -1))


class TestAction:
    def test_apply_returns_image_and_factor(self):
        g = GroupElement(1, 3, 2, 7)
        z = 0.3 + 1.1j
        image, jfactor = moebius_service.apply(g, z)
        assert image == pytest.approx((z + 3) / (2 * z + 7))
        assert jfactor == pytest.approx(2 * z + 7)

    def test_apply_at_infinity(self):
        image, jfactor = moebius_service.apply(GroupElement(2, 1, 1, 1), INFINITY)
        assert image == 2
        assert jfactor is INFINITY
        image, jfactor = moebius_service.apply(T, INFINITY)
        assert image is INFINITY
        assert jfactor == 1

    def test_lower_half_plane_rejected(self):
        with pytest.raises(DomainError):
            moebius_service.apply(S, 0.5 - 1j)

    def test_pole_detected_off_the_domain_check(self):
        with pytest.raises(PoleError):
            moebius_service.apply(GroupElement(1, 0, 1, -2), 2.0 + 0j, domain_check=False)

    def test_cocycle(self):
        z = np.array([0.2 + 1.5j, -0.4 + 0.8j, 1.3 + 0.2j])
        for g in SAMPLE:
            for h in SAMPLE:
                assert np.allclose((g @ h).j(z), g.j(h.act(z)) * h.j(z), rtol=1e-12)

    def test_slash_is_a_right_action(self, delta):
        z = np.array([0.2 + 1.5j, 0.1 + 1.2j])
        g, h = SAMPLE[0], SAMPLE[2]
        stepwise = moebius_service.slash_eval(lambda w: moebius_service.slash_eval(delta, 12, g, w), 12, h, z)
        direct = moebius_service.slash_eval(delta, 12, g @ h, z)
        assert np.allclose(stepwise, direct, rtol=1e-9)

    def test_slash_rejects_odd_weight(self, delta):
        with pytest.raises(InvalidInputError):
            moebius_service.slash_eval(delta, 3, S, 1j)

    def test_classify(self):
        assert moebius_service.classify(GroupElement.identity()) == "identity"
        assert moebius_service.classify(T) == "parabolic"
        assert moebius_service.classify(S) == "elliptic"
        assert moebius_service.classify(GroupElement(2, 1, 1, 1)) == "hyperbolic"
        assert moebius_service.classify(GroupElement(-2, -1, -1, -1)) == "hyperbolic"


class TestHyperbolicDatum:
    def test_diagonalizes_generator(self, d5_datum):
        g = d5_datum.generator
        assert d5_datum.xi == pytest.approx((3 + math.sqrt(5)) / 2)
        assert d5_datum.xi > 1
        rotated = g.conjugate_by(d5_datum.sigma, d5_datum.sigma_inv)
        assert rotated.a == pytest.approx(d5_datum.sign * d5_datum.xi, abs=1e-10)
        assert rotated.d == pytest.approx(d5_datum.sign / d5_datum.xi, abs=1e-10)
        assert abs(rotated.b) < 1e-10 and abs(rotated.c) < 1e-10
        assert d5_datum.sigma.det == pytest.approx(1.0)

    def test_fixed_points(self, d5_datum):
        g = d5_datum.generator
        for eta in (d5_datum.eta1, d5_datum.eta2):
            assert g.act(eta) == pytest.approx(eta)
        assert d5_datum.sigma.act(1e-300j).real == pytest.approx(d5_datum.eta1, abs=1e-9)

    def test_negative_trace_keeps_sign(self):
        datum = moebius_service.make_hyperbolic_datum(GroupElement(-1, -1, -1, -2))
        assert datum.sign == -1
        assert datum.xi == pytest.approx((3 + math.sqrt(5)) / 2)

    def test_strip_height(self, d5_datum):
        assert d5_datum.strip_height == pytest.approx(math.pi / (2 * math.log(d5_datum.xi)))

    def test_rejects_non_hyperbolic(self):
        with pytest.raises(InvalidInputError):
            moebius_service.make_hyperbolic_datum(T)


class TestEllipticDatum:
    def test_orders(self, i_datum, rho_datum):
        assert i_datum.order == 2
        assert rho_datum.order == 3
        assert i_datum.z0 == pytest.approx(1j)
        assert rho_datum.z0 == pytest.approx(complex(0.5, math.sqrt(3) / 2))

    def test_rotation_normalization(self, i_datum, rho_datum):
        for datum in (i_datum, rho_datum):
            rotated = datum.epsilon.conjugate_by(datum.sigma, datum.sigma_inv)
            assert rotated.a == pytest.approx(datum.zeta, abs=1e-9)
            assert rotated.d == pytest.approx(1 / datum.zeta, abs=1e-9)
            assert datum.epsilon.act(datum.z0) == pytest.approx(datum.z0)

    def test_disc_maps(self, i_datum):
        assert abs(i_datum.to_disc(i_datum.z0)) < 1e-12
        w = 0.3 - 0.2j
        assert i_datum.to_disc(i_datum.from_disc(w)) == pytest.approx(w)

    def test_rejects_non_elliptic_point(self, sl2z):
        with pytest.raises(InvalidInputError):
            moebius_service.make_elliptic_datum(2j, sl2z)

    def test_level11_has_no_elliptic_points(self):
        with pytest.raises(InvalidInputError):
            moebius_service.make_elliptic_datum(1j, ArithmeticGroup(11))


class TestParabolicDatum:
    def test_infinity(self, cusp_datum):
        assert cusp_datum.cusp is INFINITY
        assert cusp_datum.generator == T

    def test_cusp_zero_of_level11(self):
        datum = moebius_service.make_parabolic_datum(ArithmeticGroup(11), 0)
        assert datum.generator == GroupElement(1, 0, -11, 1)
        conjugated = datum.generator.conjugate_by(datum.sigma, datum.sigma_inv)
        assert conjugated.is_close(GroupElement(1, 1, 0, 1), 1e-12)


class TestFundamentalDomain:
    def test_reduction_lands_in_domain(self):
        z = np.array([0.37 + 0.01j, -3.2 + 0.4j, 0.1 + 2.0j])
        w, jfactor = moebius_service.reduce_to_fundamental_domain(z)
        assert np.all(np.abs(w.real) <= 0.5 + 1e-12)
        assert np.all(np.abs(w) >= 1 - 1e-12)
        assert jfactor[2] == 1

    def test_level_one_evaluation_matches_modularity(self, delta_qexp, delta):
        z = 0.3 + 1.1j
        assert delta(-1 / z) == pytest.approx(z ** 12 * delta_qexp.eval(z), rel=1e-10)

    @pytest.mark.parametrize("z", [0.123 + 0.02j, 1 / 11 + 0.005j, -3.2 + 0.4j])
    def test_reduction_tracks_element(self, z):
        w, g = moebius_service.reduce_with_element(z)
        assert abs(w.real) <= 0.5 + 1e-12
        assert abs(w) >= 1 - 1e-12
        assert g.det == 1
        assert g.act(z) == pytest.approx(w, rel=1e-10)

    def test_reduction_rejects_lower_half_plane(self):
        with pytest.raises(DomainError):
            moebius_service.reduce_with_element(0.3 - 0.1j)


def test_hyperbolic_distance_of_vertical_segment():
    assert moebius_service.hyperbolic_distance(2j, 1j) == pytest.approx(math.log(2))


def test_simple_expansion_coefficients():
    def f(z):
        return 3.0 + ((z - 1j) / (z + 1j)) ** 2

    coeffs = moebius_service.simple_expansion_coeffs(f, 1j, 4)
    assert coeffs == pytest.approx([3, 0, 1, 0, 0], abs=1e-12)

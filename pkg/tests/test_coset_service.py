from math import gcd

import pytest

from models.domain.group import ArithmeticGroup
from models.domain.group_element import GroupElement
from services.arithmetic.coset_service import coset_service, extended_gcd
from services.arithmetic.moebius_service import moebius_service
from services.exceptions import InvalidInputError


@pytest.mark.parametrize("x,y", [(12, 18), (7, 5), (-4, 10), (0, 3), (5, 0)])
def test_extended_gcd(x, y):
    g, s, t = extended_gcd(x, y)
    assert g == gcd(x, y)
    assert s * x + t * y == g


class TestParabolic:
    def test_rows_up_to_three(self, sl2z, cusp_datum):
        cosets = coset_service.cosets_parabolic(sl2z, cusp_datum, c_max=3)
        rows = [(g.c, g.d) for g in cosets.reps]
        assert rows == [(0, 1), (1, 0), (2, 1), (3, 1), (3, 2)]
        assert all(g.det == 1 for g in cosets.reps)
        assert cosets.stabilizer_tag == "parabolic"

    def test_level11_rows_are_multiples(self, level11):
        datum = moebius_service.make_parabolic_datum(level11)
        cosets = coset_service.cosets_parabolic(level11, datum, c_max=22)
        assert all(g.c % 11 == 0 for g in cosets.reps)
        assert all(level11.contains(g) for g in cosets.reps)
        # identity + phi(11) + phi(22)
        assert len(cosets) == 1 + 10 + 10

    def test_cusp_zero_top_rows(self, level11):
        datum = moebius_service.make_parabolic_datum(level11, 0)
        cosets = coset_service.cosets_parabolic(level11, datum, c_max=4)
        assert all(level11.contains(g) for g in cosets.reps)
        tops = {coset_service.canonical_parabolic(g, datum) for g in cosets.reps}
        assert len(tops) == len(cosets)

    def test_cusp_zero_includes_identity_family(self, level11):
        datum = moebius_service.make_parabolic_datum(level11, 0)
        cosets = coset_service.cosets_parabolic(level11, datum, c_max=3)
        assert cosets.reps[0] == GroupElement.identity()
        # top rows (a, b mod a) with a <= 3: (1, 0), (2, 1), (3, 1), (3, 2)
        assert len(cosets) == 4
        assert all(gcd(coset_service.parabolic_row(g, datum)[0], 11) == 1 for g in cosets.reps)

    def test_negative_bound_rejected(self, sl2z, cusp_datum):
        with pytest.raises(InvalidInputError):
            coset_service.cosets_parabolic(sl2z, cusp_datum, c_max=-1)


class TestBall:
    def test_elements_are_in_group(self, level11):
        ball = coset_service.ball(level11, 12)
        assert ball
        assert all(level11.contains(g) and g.max_abs_entry <= 12 for g in ball)

    def test_one_element_per_sign_class(self, sl2z):
        ball = coset_service.ball(sl2z, 4)
        keys = [g.key() for g in ball]
        assert len(keys) == len(set(keys))
        assert GroupElement(0, -1, 1, 0).key() in keys
        assert GroupElement(1, 1, 1, 2).key() in keys


class TestHyperbolic:
    def test_reps_are_canonical(self, sl2z, d5_datum):
        cosets = coset_service.cosets_hyperbolic(sl2z, d5_datum, entry_max=8)
        assert len(cosets) > 1
        assert len(cosets.keys()) == len(cosets)
        again = {coset_service.canonical_hyperbolic(g, d5_datum).key() for g in cosets.reps}
        assert again == cosets.keys()

    def test_generator_shift_is_absorbed(self, d5_datum):
        g = GroupElement(1, 3, 2, 7)
        shifted = d5_datum.generator @ g
        assert (coset_service.canonical_hyperbolic(g, d5_datum).key()
                == coset_service.canonical_hyperbolic(shifted, d5_datum).key())

    def test_generator_must_lie_in_group(self, level11, d5_datum):
        with pytest.raises(InvalidInputError):
            coset_service.cosets_hyperbolic(level11, d5_datum, entry_max=4)


class TestElliptic:
    def test_epsilon_orbits_collapse(self, sl2z, i_datum):
        ball = coset_service.ball(sl2z, 6)
        cosets = coset_service.cosets_elliptic(sl2z, i_datum, entry_max=6)
        assert len(cosets) < len(ball)
        for g in cosets.reps:
            assert coset_service.canonical_elliptic(g, i_datum).key() == g.key()

    def test_rho_orbits(self, sl2z, rho_datum):
        g = GroupElement(1, 3, 2, 7)
        orbit = {coset_service.canonical_elliptic(rho_datum.epsilon ** n @ g, rho_datum).key() for n in range(3)}
        assert len(orbit) == 1

    def test_full_ball_is_trivial_stabilizer(self, sl2z):
        cosets = coset_service.full_ball(sl2z, 3)
        assert cosets.stabilizer_tag == "trivial"
        assert len(cosets) == len(coset_service.ball(sl2z, 3))

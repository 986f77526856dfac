from dataclasses import replace

import numpy as np
import pytest

from models.domain.group_element import GroupElement
from services.exceptions import InvalidInputError
from services.series.modular_symbol_service import ModularSymbols, convergents, modular_symbol_service

T = GroupElement(1, 1, 0, 1)
LOW_POINTS = (0.123 + 0.02j, 0.5 + 0.01j, 1 / 11 + 0.005j, -0.31 + 0.03j)


@pytest.fixture(scope="module")
def symbols(newform, level11):
    return modular_symbol_service.for_form(newform, level11)


def test_convergents():
    assert list(convergents(7, 3)) == [(2, 1, 1, 0), (7, 3, 2, 1)]
    assert list(convergents(0, 1)) == [(0, 1, 1, 0)]


def test_fricke_relation(newform):
    assert newform.fricke_sign == -1
    tau = 0.1 + 0.35j
    moved = newform.eval(-1 / (11 * tau))
    assert moved == pytest.approx(-11 * tau ** 2 * newform.eval(tau), rel=1e-10)


def test_table_is_shared(newform, level11, symbols):
    assert modular_symbol_service.for_form(newform, level11) is symbols


class TestPeriods:
    def test_parabolic_generator_has_no_period(self, symbols):
        assert symbols.period(T) == 0
        assert abs(symbols.period(GroupElement(1, 0, 11, 1))) <= 1e-12 * abs(symbols.cusp_zero)

    def test_matches_eichler_difference(self, newform, symbols):
        for g in (GroupElement(3, 1, 11, 4), GroupElement(2, 1, 11, 6)):
            apex = (-g.d + 1j) / g.c
            direct = newform.eichler_integral(g.act(apex)) - newform.eichler_integral(apex)
            assert symbols.period(g) == pytest.approx(direct, rel=1e-9)

    def test_conjugated_translations_vanish(self, symbols):
        g = GroupElement(4, -1, 33, -8)
        scale = abs(symbols.period(g))
        assert scale > 0
        for conjugate in (g @ T @ g.inverse(), g.inverse() @ T @ g, g @ g @ T @ g.inverse() @ g.inverse()):
            assert abs(symbols.period(conjugate)) <= 1e-10 * scale

    def test_additive_for_large_entries(self, symbols):
        g = GroupElement(4, -1, 33, -8)
        h = GroupElement(3, 1, 11, 4)
        for left, right in ((g, h), (g @ h, g), (h @ h @ h, g)):
            total = symbols.period(left @ right)
            assert total == pytest.approx(symbols.period(left) + symbols.period(right), rel=1e-9, abs=1e-12)

    def test_rejects_foreign_element(self, symbols):
        with pytest.raises(InvalidInputError):
            symbols.period(GroupElement(0, -1, 1, 0))


class TestEichler:
    @pytest.mark.parametrize("z", LOW_POINTS)
    def test_low_points_match_direct_series(self, newform, symbols, z):
        direct = newform.eichler_integral(z)
        assert abs(symbols.eichler(z) - direct) <= 1e-9 * max(1.0, abs(direct))

    def test_high_point_is_direct(self, newform, symbols):
        z = 0.2 + 0.8j
        assert symbols.eichler(z) == newform.eichler_integral(z)

    def test_array_shape(self, symbols):
        z = np.array(LOW_POINTS).reshape(2, 2)
        values = symbols.eichler(z)
        assert values.shape == (2, 2)
        assert values[1, 0] == symbols.eichler(LOW_POINTS[2])


class TestValidation:
    def test_needs_fricke_sign(self, newform):
        with pytest.raises(InvalidInputError):
            ModularSymbols(replace(newform, fricke_sign=None), 11)

    def test_needs_weight_two(self, delta_qexp):
        with pytest.raises(InvalidInputError):
            ModularSymbols(delta_qexp, 11)

    def test_needs_prime_level(self, newform):
        with pytest.raises(InvalidInputError):
            ModularSymbols(newform, 22)

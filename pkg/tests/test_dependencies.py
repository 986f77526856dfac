import math

import pytest

from models.domain.group import ArithmeticGroup
from models.schemas.request_models import RunConfig
from services.dependencies import (describe_datum, format_point, parse_matrix, parse_point,
                                   resolve_datum, resolve_hyperbolic_generator)
from services.exceptions import InvalidInputError


class TestParsing:
    @pytest.mark.parametrize("text, expected", [
        ("i", 1j),
        (" RHO ", complex(0.5, math.sqrt(3) / 2)),
        ("2i", 2j),
        ("0.5+2i", 0.5 + 2j),
        ("-0.25 + 1.5i", -0.25 + 1.5j),
    ])
    def test_point(self, text, expected):
        assert parse_point(text) == pytest.approx(expected)

    @pytest.mark.parametrize("text", ["abc", "1-2i", "3", ""])
    def test_bad_point(self, text):
        with pytest.raises(InvalidInputError):
            parse_point(text)

    def test_matrix(self):
        g = parse_matrix("1, 1; 1, 2")
        assert g.entries == (1, 1, 1, 2)

    @pytest.mark.parametrize("text", ["2,1;1,2", "1,1,1,2", "a,b;c,d"])
    def test_bad_matrix(self, text):
        with pytest.raises(InvalidInputError):
            parse_matrix(text)

    def test_format_point(self):
        assert format_point(1j) == "0+1i"
        assert format_point(0.5 - 0.25j) == "0.5-0.25i"


class TestResolution:
    def test_generator_from_discriminant(self):
        config = RunConfig(command="qform", disc=5)
        g = resolve_hyperbolic_generator(config, ArithmeticGroup(1))
        assert abs(g.trace) == 3

    def test_generator_from_matrix(self):
        config = RunConfig(command="qform", matrix="2,1;1,1")
        assert resolve_hyperbolic_generator(config, ArithmeticGroup(1)).entries == (2, 1, 1, 1)

    def test_matrix_outside_group(self):
        config = RunConfig(command="qform", matrix="2,1;1,1")
        with pytest.raises(InvalidInputError):
            resolve_hyperbolic_generator(config, ArithmeticGroup(11))

    def test_power_lands_in_subgroup(self):
        config = RunConfig(command="qform", disc=5)
        group = ArithmeticGroup(11)
        assert group.contains(resolve_hyperbolic_generator(config, group))

    def test_elliptic_needs_point(self):
        config = RunConfig(command="expand", kind="ell")
        with pytest.raises(InvalidInputError):
            resolve_datum(config, ArithmeticGroup(1))

    def test_describe(self):
        config = RunConfig(command="expand", kind="ell", point="i")
        summary = describe_datum(resolve_datum(config, ArithmeticGroup(1)))
        assert summary["order"] == 2
        assert summary["z0"].endswith("+1i")

import math

import pytest

from services.arithmetic.quadform_service import quadform_service
from services.exceptions import InvalidInputError
from services.verification import SUITES, class_number_oracle, verification_service


def _discriminants(lo, hi):
    return [D for D in range(lo, hi + 1) if D % 4 in (0, 1) and math.isqrt(D) ** 2 != D]


@pytest.mark.parametrize("D", _discriminants(5, 40))
def test_class_number_oracle(D):
    assert class_number_oracle(D) == len(quadform_service.class_list(D))


def test_suites_are_listed():
    assert set(SUITES) == set(verification_service.suites)


def test_unknown_suite():
    with pytest.raises(InvalidInputError):
        verification_service.run("nonsense")


def test_single_check():
    report = verification_service.run("identities", only=["I_ab_closed_form"])
    assert len(report.checks) == 1
    assert report.passed
    assert report.checks[0].residual <= report.checks[0].tolerance


def test_unmatched_filter_runs_nothing():
    report = verification_service.run("identities", only=["no_such_check"])
    assert report.checks == []
    assert report.passed


def test_raising_check_fails():
    def broken():
        raise ZeroDivisionError("boom")

    result = verification_service.run_check("identities", "broken", "algebraic", broken)
    assert result.residual == math.inf
    assert not result.passed
    assert "ZeroDivisionError" in result.detail


def test_tolerance_from_config():
    result = verification_service.run_check("identities", "exact", "class_number", lambda: (0.0, "exact"))
    assert result.tolerance == 0
    assert result.passed

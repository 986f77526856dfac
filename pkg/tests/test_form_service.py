import numpy as np
import pytest

from models.domain.group import ArithmeticGroup
from models.domain.qexpansion import QExpansion
from services.analysis.form_service import FormService, form_service
from services.analysis.quadrature_service import quadrature_service
from services.exceptions import DomainError, InvalidInputError, ToleranceError
from services.repositories import QExpansionRepository
from tests.conftest import NEWFORM_11, TAU


def test_tau_values(delta_qexp):
    assert delta_qexp.weight == 12
    assert delta_qexp.coefficient(0) == 0
    assert [delta_qexp.coefficient(n) for n in range(1, 11)] == list(TAU)


def test_tau_is_multiplicative():
    f = form_service.delta_qexp(60)
    tau = f.coefficient
    assert tau(6) == tau(2) * tau(3)
    assert tau(4) == tau(2) ** 2 - 2 ** 11
    assert tau(35) == tau(5) * tau(7)


def test_newform_coefficients(newform):
    assert newform.weight == 2
    assert newform.group_tag == "gamma0:11"
    assert [newform.coefficient(n) for n in range(1, 11)] == list(NEWFORM_11)


def test_delta_at_i_matches_closed_form(delta_qexp):
    assert -64 * delta_qexp.eval(1j).real == pytest.approx(quadrature_service.chowla_selberg_delta_i(), rel=1e-12)


def test_vectorized_evaluation(delta_qexp):
    z = np.array([1j, 0.25 + 1.5j])
    values = delta_qexp.eval(z)
    assert values.shape == (2,)
    assert values[1] == pytest.approx(delta_qexp.eval(0.25 + 1.5j))


def test_derivative_matches_difference_quotient(delta_qexp):
    z, h = 0.1 + 1.1j, 1e-5
    numeric = (delta_qexp.eval(z + h) - delta_qexp.eval(z - h)) / (2 * h)
    assert delta_qexp.eval_deriv(1, z) == pytest.approx(numeric, rel=1e-6)


def test_below_y_min_rejected(delta_qexp):
    with pytest.raises(DomainError):
        delta_qexp.eval(0.3 + 0.01j)


def test_short_expansion_cannot_reach_low_points():
    f = form_service.delta_qexp(10)
    with pytest.raises(ToleranceError):
        f.eval(0.2j)


def test_derivative_cap(delta_qexp):
    with pytest.raises(ToleranceError):
        delta_qexp.eval_deriv(41, 1j)


def test_eichler_integral_derivative(newform):
    z, h = 0.2 + 0.8j, 1e-5
    numeric = (newform.eichler_integral(z + h) - newform.eichler_integral(z - h)) / (2 * h)
    assert numeric == pytest.approx(newform.eval(z), rel=1e-6)


def test_eichler_integral_needs_weight_two(delta_qexp):
    with pytest.raises(InvalidInputError):
        delta_qexp.eichler_integral(1j)


def test_get_form():
    assert form_service.get_form("delta", ArithmeticGroup(1), 50).label == "delta"
    assert form_service.get_form("newform11", ArithmeticGroup(11), 50).label == "newform11"
    zero = form_service.get_form("zero", ArithmeticGroup(1))
    assert zero.is_zero and zero.weight == 12
    with pytest.raises(InvalidInputError):
        form_service.get_form("delta", ArithmeticGroup(11))


def test_eta_product_rejects_bad_spec():
    with pytest.raises(InvalidInputError):
        form_service.eta_product_qexp([(1, 1)], 20)


def test_level_one_evaluator_reaches_low_points(delta):
    z = 0.3 + 0.02j
    assert np.isfinite(delta(z))
    assert delta(z + 1) == pytest.approx(delta(z), rel=1e-9)


class TestRepository:
    def test_round_trip(self, tmp_path):
        repository = QExpansionRepository(str(tmp_path))
        f = form_service.delta_qexp(30)
        repository.save(f)
        loaded = repository.load("delta", 30)
        assert loaded.exact == f.exact
        assert repository.list_cached() == ["delta_M30"]
        assert repository.delete("delta", 30)
        assert repository.load("delta", 30) is None

    def test_unreadable_file_is_ignored(self, tmp_path):
        (tmp_path / "delta_M5.json").write_text("{not json", encoding="utf-8")
        assert QExpansionRepository(str(tmp_path)).load("delta", 5) is None

    def test_service_uses_repository(self, tmp_path):
        service = FormService(QExpansionRepository(str(tmp_path)))
        built = service.delta_qexp(25)
        assert (tmp_path / "delta_M25.json").exists()
        fresh = FormService(QExpansionRepository(str(tmp_path)))
        assert fresh.delta_qexp(25).exact == built.exact

    def test_float_payload(self):
        f = QExpansion("custom", 4, "sl2z", np.array([0, 1 + 0.5j, 2], dtype=complex))
        restored = QExpansion.from_payload(f.to_payload())
        assert np.allclose(restored.coeffs, f.coeffs)

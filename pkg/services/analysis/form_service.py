import time
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.config_loader import config_loader
from config.logging_config import (get_logger, log_error_with_context, log_function_entry,
                                   log_function_exit, log_performance)
from models.domain.group import ArithmeticGroup
from models.domain.qexpansion import QExpansion
from services.arithmetic.moebius_service import moebius_service
from services.exceptions import InvalidInputError

logger = get_logger(__name__)

# eta-product data of the weight 2 newform on Gamma0(11): eta(z)^2 eta(11z)^2
NEWFORM_11_SPEC: Tuple[Tuple[int, int], ...] = ((1, 2), (11, 2))
NEWFORM_11_FRICKE_SIGN = -1


def _pentagonal_terms(step: int, order: int) -> List[Tuple[int, int]]:
    """Sparse prod_n (1 - q^{step n}) up to q^order: sum (-1)^j q^{step j(3j-1)/2}, j in Z."""
    terms = [(0, 1)]
    j = 1
    while True:
        e1, e2 = step * j * (3 * j - 1) // 2, step * j * (3 * j + 1) // 2
        if e1 > order:
            break
        sign = -1 if j % 2 else 1
        terms.append((e1, sign))
        if e2 <= order:
            terms.append((e2, sign))
        j += 1
    return terms


def _jacobi_terms(order: int) -> List[Tuple[int, int]]:
    """Sparse prod_n (1 - q^n)^3 = sum_j (-1)^j (2j+1) q^{j(j+1)/2}."""
    terms = []
    j = 0
    while j * (j + 1) // 2 <= order:
        terms.append((j * (j + 1) // 2, (-1) ** j * (2 * j + 1)))
        j += 1
    return terms


def _multiply_sparse(dense: np.ndarray, terms: Sequence[Tuple[int, int]]) -> np.ndarray:
    """dense * sparse, truncated to len(dense), with exact Python integers."""
    result = np.zeros(len(dense), dtype=object)
    for exponent, coefficient in terms:
        if exponent >= len(dense):
            continue
        result[exponent:] += coefficient * dense[: len(dense) - exponent]
    return result


class FormService:
    """q-expansions of the concrete cusp forms and their evaluation through the fundamental domain."""

    def __init__(self, repository=None):
        self.repository = repository
        self._memo: Dict[Tuple[str, int], QExpansion] = {}

    def _cached(self, label: str, order: int):
        key = (label, order)
        if key in self._memo:
            return self._memo[key]
        if self.repository is not None:
            stored = self.repository.load(label, order)
            if stored is not None:
                self._memo[key] = stored
                return stored
        return None

    def _store(self, expansion: QExpansion) -> QExpansion:
        self._memo[(expansion.label, expansion.order)] = expansion
        if self.repository is not None:
            try:
                self.repository.save(expansion)
            except OSError as e:
                log_error_with_context(logger, e, "FormService._store", label=expansion.label)
        return expansion

    def delta_qexp(self, order: Optional[int] = None) -> QExpansion:
        """Delta = q prod (1 - q^n)^24 with exact tau(1..M), built as (eta^3 series)^8.

        Args:
            order: truncation order M >= 1

        Returns:
            QExpansion labelled ``delta`` of weight 12 on SL2(Z)
        """
        order = order or config_loader.get_numeric("forms", "q_order", 400)
        if order < 1:
            raise InvalidInputError(f"Truncation order must be positive, got {order}")
        cached = self._cached("delta", order)
        if cached is not None:
            return cached
        start_time = time.time()
        log_function_entry(logger, "delta_qexp", order=order)
        series = np.zeros(order, dtype=object)
        series[0] = 1
        terms = _jacobi_terms(order)
        for _ in range(8):
            series = _multiply_sparse(series, terms)
        values = [0] + [int(v) for v in series]
        expansion = QExpansion.from_integers("delta", 12, "sl2z", values)
        duration = time.time() - start_time
        log_performance(logger, "delta_qexp", duration, order=order)
        log_function_exit(logger, "delta_qexp", result=f"tau(1..3) = {values[1:4]}", duration=duration)
        return self._store(expansion)

    def eta_product_qexp(self, spec: Sequence[Tuple[int, int]], order: Optional[int] = None,
                         label: Optional[str] = None, group_tag: Optional[str] = None) -> QExpansion:
        """q^{s} prod_i prod_n (1 - q^{l_i n})^{r_i}, s = sum l_i r_i / 24, of weight sum r_i / 2."""
        order = order or config_loader.get_numeric("forms", "weight2_q_order", 5000)
        spec = tuple((int(level), int(exponent)) for level, exponent in spec)
        label = label or "eta" + "".join(f"[{level}^{exponent}]" for level, exponent in spec)
        cached = self._cached(label, order)
        if cached is not None:
            return cached
        shift_num = sum(level * exponent for level, exponent in spec)
        if shift_num % 24:
            raise InvalidInputError(f"Eta product {spec} has non-integral leading exponent {shift_num}/24")
        if any(exponent < 0 for _, exponent in spec):
            raise InvalidInputError(f"Eta product {spec} has a negative exponent")
        total_exponent = sum(exponent for _, exponent in spec)
        if total_exponent % 2:
            raise InvalidInputError(f"Eta product {spec} has odd total exponent")
        shift = shift_num // 24
        start_time = time.time()
        log_function_entry(logger, "eta_product_qexp", spec=spec, order=order)
        length = max(order + 1 - shift, 1)
        series = np.zeros(length, dtype=object)
        series[0] = 1
        for level, exponent in spec:
            terms = _pentagonal_terms(level, length - 1)
            for _ in range(exponent):
                series = _multiply_sparse(series, terms)
        values = [0] * shift + [int(v) for v in series]
        values = values[: order + 1]
        level = max(level for level, _ in spec)
        expansion = QExpansion.from_integers(label, total_exponent // 2, group_tag or f"gamma0:{level}", values)
        log_performance(logger, "eta_product_qexp", time.time() - start_time, order=order)
        return self._store(expansion)

    def newform_11(self, order: Optional[int] = None) -> QExpansion:
        """The weight 2 newform eta(z)^2 eta(11z)^2 on Gamma0(11); f|W_11 = -f."""
        f = self.eta_product_qexp(NEWFORM_11_SPEC, order, label="newform11", group_tag="gamma0:11")
        return f if f.fricke_sign is not None else replace(f, fricke_sign=NEWFORM_11_FRICKE_SIGN)

    def get_form(self, name: str, group: ArithmeticGroup, order: Optional[int] = None) -> QExpansion:
        name = name.strip().lower()
        if name == "delta" and group.level == 1:
            return self.delta_qexp(order)
        if name in ("newform11", "eta11") and group.level == 11:
            return self.newform_11(order)
        if name == "zero":
            return QExpansion.zero(12 if group.level == 1 else 2, order or 1, group.tag)
        raise InvalidInputError(config_loader.get_message("errors", "unknown_form", form=name, group=group.tag))

    def evaluator(self, f: QExpansion) -> "FormEvaluator":
        return FormEvaluator(f)

    @staticmethod
    def eval_level_one(f: QExpansion, z):
        """Evaluate a level 1 form anywhere in H by moving z into the fundamental domain first."""
        if f.group_tag != "sl2z":
            raise InvalidInputError(f"Fundamental-domain evaluation needs a level 1 form, got {f.group_tag}")
        w, jfactor = moebius_service.reduce_to_fundamental_domain(z)
        value = f.eval(w) / jfactor ** f.weight
        value = value.reshape(np.shape(z)) if np.ndim(z) else complex(value[0])
        return value


@dataclass(frozen=True, eq=False)
class FormEvaluator:
    """Callable view of a q-expansion; level 1 forms go through the fundamental domain first."""

    form: QExpansion

    @property
    def weight(self) -> int:
        return self.form.weight

    @property
    def label(self) -> str:
        return self.form.label

    def __call__(self, z):
        if self.form.group_tag == "sl2z":
            return FormService.eval_level_one(self.form, z)
        return self.form.eval(z)

    def derivative(self, r: int, z):
        return self.form.eval_deriv(r, z)


def _default_repository():
    from services.repositories import get_qexpansion_repository
    return get_qexpansion_repository()


form_service = FormService(_default_repository())

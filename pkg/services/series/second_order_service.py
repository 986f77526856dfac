import math
import threading
import time
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import svd

from config.config_loader import config_loader
from config.logging_config import (get_logger, log_error_with_context, log_function_entry,
                                   log_function_exit, log_performance)
from models.domain.fixed_point import EllipticDatum, FixedPointDatum, HyperbolicDatum, ParabolicDatum
from models.domain.group import ArithmeticGroup
from models.domain.group_element import GroupElement
from models.domain.qexpansion import QExpansion
from services.analysis.form_service import form_service
from services.arithmetic.moebius_service import moebius_service
from services.arithmetic.quadform_service import path_integral
from services.exceptions import InvalidInputError, SideConditionError
from services.series.modular_symbol_service import ModularSymbols, modular_symbol_service
from services.series.poincare_service import PoincareSeries, poincare_service

logger = get_logger(__name__)


def _parse_base_point(text: str) -> complex:
    return complex(text.replace("i", "j")) if "i" in text else complex(text)


class PeriodHom:
    """L(gamma) = s+ int_z^{gamma z} f+ + s- conj(int_z^{gamma z} f-), an element of Hom0(Gamma, C).

    The periods come from the Manin symbols of f+- (continued fraction of a/c), so L is exact
    up to the q-series accuracy for every |c|. Values are memoized by sign-normalized matrix.
    """

    def __init__(self, f_plus: Optional[QExpansion], f_minus: Optional[QExpansion], group: ArithmeticGroup,
                 plus_scale: complex = 1.0, minus_scale: complex = 1.0, base_point: Optional[complex] = None):
        for f in (f_plus, f_minus):
            if f is not None and f.weight != 2:
                raise InvalidInputError(f"Periods need weight 2 forms, got weight {f.weight} ({f.label})")
            if f is not None and f.group_tag != group.tag:
                raise InvalidInputError(f"Form {f.label} lives on {f.group_tag}, not on {group.tag}")
        self.f_plus = f_plus
        self.f_minus = f_minus
        self.group = group
        self.plus_scale = complex(plus_scale)
        self.minus_scale = complex(minus_scale)
        self.base_point = base_point or _parse_base_point(
            str(config_loader.get_numeric("secondorder", "base_point", "1.5i")))
        self.plus_symbols = self._symbols(f_plus)
        self.minus_symbols = self._symbols(f_minus)
        self._memo: Dict[Tuple, complex] = {}
        self._lock = threading.Lock()

    def _symbols(self, f: Optional[QExpansion]) -> Optional[ModularSymbols]:
        if f is None or f.is_zero:
            return None
        return modular_symbol_service.for_form(f, self.group)

    @property
    def is_zero(self) -> bool:
        plus = self.plus_symbols is None or self.plus_scale == 0
        minus = self.minus_symbols is None or self.minus_scale == 0
        return plus and minus

    def _compute(self, gammas: Sequence[GroupElement]) -> np.ndarray:
        values = np.zeros(len(gammas), dtype=complex)
        if self.is_zero:
            return values
        for i, g in enumerate(gammas):
            if g.c == 0:
                continue
            total = 0j
            if self.plus_symbols is not None:
                total += self.plus_scale * self.plus_symbols.period(g)
            if self.minus_symbols is not None:
                total += self.minus_scale * self.minus_symbols.period(g).conjugate()
            values[i] = total
        return values

    def values(self, gammas: Sequence[GroupElement]) -> np.ndarray:
        """L at each element, computing the missing ones in one vectorized batch."""
        keys = [g.key() for g in gammas]
        missing = {}
        for key, g in zip(keys, gammas):
            if key not in self._memo and key not in missing:
                missing[key] = g.sign_normalized()
        if missing:
            start_time = time.time()
            computed = self._compute(list(missing.values()))
            with self._lock:
                for key, value in zip(missing.keys(), computed):
                    self._memo.setdefault(key, complex(value))
            log_performance(logger, "period_hom", time.time() - start_time, computed=len(missing))
        return np.array([self._memo[key] for key in keys], dtype=complex)

    def __call__(self, g: GroupElement) -> complex:
        return complex(self.values([g])[0])

    def by_path(self, g: GroupElement, elevation: Optional[float] = None, order: Optional[int] = None,
                from_base: bool = False) -> complex:
        """L(g) by quadrature along w -> Re w + iT -> Re gw + iT -> gw.

        w is the apex of the isometric circle of g, or the base point when ``from_base`` is set
        (then g w may sit far below y_min for large |c|).
        """
        if self.is_zero or (g.c == 0 and g.b == 0):
            return 0j
        elevation = elevation or config_loader.get_numeric("secondorder", "elevation", 2.0)
        order = order or config_loader.get_numeric("quadrature", "order", 48)
        panel = config_loader.get_numeric("secondorder", "path_panel_width", 0.1)
        w = self.base_point if from_base or g.c == 0 else complex(-g.d / g.c, 1.0 / abs(g.c))
        image = g.act(w)
        top = max(elevation, w.imag, image.imag)
        corners = [w, complex(w.real, top), complex(image.real, top), image]
        total = 0j
        for f, scale, conjugate in ((self.f_plus, self.plus_scale, False), (self.f_minus, self.minus_scale, True)):
            if f is None or f.is_zero:
                continue
            value = path_integral(lambda z, f=f: f.eval(z, y_min=0.0), corners, order, panel)
            total += scale * (value.conjugate() if conjugate else value)
        return total

    def __repr__(self):
        plus = self.f_plus.label if self.f_plus is not None else "0"
        minus = self.f_minus.label if self.f_minus is not None else "0"
        return f"<PeriodHom(+{plus}*{self.plus_scale:.4g}, -{minus}*{self.minus_scale:.4g}, memo={len(self._memo)})>"


class LambdaPair:
    """Antiderivatives Lambda+-(z) = integral from i to z of f+-, read off the Eichler integrals.

    Points below the q-series range are moved up with the modular symbols of f+-.
    """

    def __init__(self, hom: PeriodHom):
        self.hom = hom
        self._origin_plus = self._eichler(hom.plus_symbols, 1j)
        self._origin_minus = self._eichler(hom.minus_symbols, 1j)

    @staticmethod
    def _eichler(symbols: Optional[ModularSymbols], z):
        if symbols is None:
            return np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0j
        return symbols.eichler(z)

    def plus(self, z):
        return self._eichler(self.hom.plus_symbols, z) - self._origin_plus

    def minus(self, z):
        return self._eichler(self.hom.minus_symbols, z) - self._origin_minus

    def period_from_lambda(self, g: GroupElement, z: complex) -> complex:
        """s+ (Lambda+(gz) - Lambda+(z)) + s- conj(Lambda-(gz) - Lambda-(z))."""
        image = g.act(complex(z))
        return (self.hom.plus_scale * (self.plus(image) - self.plus(z))
                + self.hom.minus_scale * np.conj(self.minus(image) - self.minus(z)))

    def plus_by_quadrature(self, z: complex, elevation: Optional[float] = None, order: Optional[int] = None) -> complex:
        """Lambda+(z) along i -> i T -> Re z + i T -> z."""
        f = self.hom.f_plus
        if f is None or f.is_zero:
            return 0j
        elevation = elevation or config_loader.get_numeric("secondorder", "elevation", 2.0)
        order = order or config_loader.get_numeric("quadrature", "order", 48)
        panel = config_loader.get_numeric("secondorder", "path_panel_width", 0.1)
        top = max(elevation, z.imag)
        corners = [1j, complex(0.0, top), complex(z.real, top), complex(z)]
        return path_integral(lambda w: f.eval(w, y_min=0.0), corners, order, panel)


class SecondOrderService:
    """Hom0(Gamma, C) from weight 2 periods and the second-order Poincare series built from it."""

    def __init__(self):
        self.rank_tolerance = config_loader.get_numeric("secondorder", "rank_tolerance", 1e-6)
        self.stabilizer_tolerance = config_loader.get_numeric("secondorder", "stabilizer_tolerance", 1e-8)

    def period_hom(self, f_plus: Optional[QExpansion], f_minus: Optional[QExpansion],
                   group: ArithmeticGroup) -> PeriodHom:
        log_function_entry(logger, "period_hom", group=group.tag)
        hom = PeriodHom(f_plus, f_minus, group)
        log_function_exit(logger, "period_hom", result=repr(hom))
        return hom

    @staticmethod
    def lambda_pair(hom: PeriodHom) -> LambdaPair:
        return LambdaPair(hom)

    def hom_basis(self, group: ArithmeticGroup) -> List[PeriodHom]:
        """{L(f, 0), L(0, f)} for the weight 2 newform; empty in genus 0."""
        if group.genus == 0:
            return []
        if group.level != 11:
            raise InvalidInputError(f"No weight 2 cusp form is available for {group.tag}")
        f = form_service.newform_11()
        return [PeriodHom(f, None, group), PeriodHom(None, f, group)]

    def twist_for_hyperbolic(self, group: ArithmeticGroup, generator: GroupElement) -> PeriodHom:
        """L = L2(g) L1 - L1(g) L2 for the basis (L1, L2); it vanishes on g."""
        first, second = self.hom_basis(group)
        lam1, lam2 = first(generator), second(generator)
        f = form_service.newform_11()
        return PeriodHom(f, f, group, plus_scale=lam2, minus_scale=-lam1)

    def build_second_order(self, tag: str, m: int, k: int, datum: FixedPointDatum, hom: PeriodHom,
                           group: ArithmeticGroup, bound: Optional[int] = None) -> PoincareSeries:
        """Twisted series P[A^-1 e(m .), L] for the given stabilizer.

        Raises:
            SideConditionError: L does not vanish on a hyperbolic stabilizer, or N m - k/2 < 0
        """
        log_function_entry(logger, "build_second_order", tag=tag, m=m, k=k, group=group.tag)
        try:
            if tag in ("par", "parabolic"):
                series = poincare_service.parabolic_series(group, k, m, datum, bound, hom)
            elif tag in ("hyp", "hyperbolic"):
                if not isinstance(datum, HyperbolicDatum):
                    raise InvalidInputError("A hyperbolic seed needs a hyperbolic datum")
                value = abs(hom(datum.generator))
                if value > self.stabilizer_tolerance:
                    raise SideConditionError(config_loader.get_message(
                        "errors", "side_condition", detail=f"|L(gamma_eta)| = {value:.3e}"))
                series = poincare_service.hyperbolic_series(group, k, m, datum, bound, hom)
            elif tag in ("ell", "elliptic"):
                if not isinstance(datum, EllipticDatum):
                    raise InvalidInputError("An elliptic seed needs an elliptic datum")
                series = poincare_service.elliptic_series(group, k, m, datum, bound, hom)
            else:
                raise InvalidInputError(f"Unknown seed tag '{tag}'")
        except Exception as e:
            log_error_with_context(logger, e, "build_second_order", tag=tag, m=m)
            raise
        log_function_exit(logger, "build_second_order", result=f"{len(series.reps)} terms")
        return series

    def gram_rank(self, functions: Sequence[Callable], points: Sequence[complex],
                  tol: Optional[float] = None) -> int:
        """Numerical rank of [f_i(z_j)] with unit rows: singular values above tol * sigma_max.

        Rows are scaled to norm 1 first; identically vanishing rows are dropped.
        """
        tol = self.rank_tolerance if tol is None else tol
        z = np.asarray(points, dtype=complex)
        if len(z) < len(functions):
            logger.warning(f"[VERIFY] Only {len(z)} sample points for {len(functions)} functions; rank is capped")
        matrix = np.array([np.asarray(f(z), dtype=complex) for f in functions])
        norms = np.linalg.norm(matrix, axis=1) if matrix.size else np.zeros(0)
        matrix = matrix[norms > 0] / norms[norms > 0, None]
        if not matrix.size:
            return 0
        singular = svd(matrix, compute_uv=False)
        if not singular.size or singular[0] == 0:
            return 0
        rank = int(np.sum(singular > tol * singular[0]))
        logger.debug(f"[VERIFY] Singular values {np.array2string(singular, precision=3)} -> rank {rank}")
        return rank

    @staticmethod
    def elliptic_invariance_check(f: Callable, k: int, epsilon: GroupElement, points: Sequence[complex]) -> float:
        """max |f|_k(epsilon - 1)(z)| over the points."""
        if moebius_service.classify(epsilon) != "elliptic":
            raise InvalidInputError(f"{epsilon} is not elliptic")
        z = np.asarray(points, dtype=complex)
        moved = moebius_service.slash_eval(f, k, epsilon, z)
        return float(np.max(np.abs(moved - f(z))))

    @staticmethod
    def dimension_bound(group: ArithmeticGroup, k: int) -> int:
        """(2g + 1) dim S_k, the bound on second-order cusp forms; reported only."""
        return (2 * group.genus + 1) * group.cusp_form_dimension(k)

    def spanning_family(self, kind: str, group: ArithmeticGroup, k: int, m_values: Sequence[int],
                        datum: Optional[FixedPointDatum] = None, bound: Optional[int] = None) -> List[PoincareSeries]:
        """Families whose span is explored with gram_rank.

        ``first``: untwisted series of the datum's type for each m.
        ``second``: for each m the untwisted series and its twists by every basis homomorphism.
        ``hyperbolic``: untwisted hyperbolic series and the series twisted by the hom vanishing on gamma_eta.
        """
        start_time = time.time()
        family: List[PoincareSeries] = []
        datum = datum or moebius_service.make_parabolic_datum(group)
        tag = {ParabolicDatum: "par", HyperbolicDatum: "hyp", EllipticDatum: "ell"}[type(datum)]
        if kind == "first":
            for m in m_values:
                family.append(self._series(tag, m, k, datum, None, group, bound))
        elif kind == "second":
            basis = self.hom_basis(group)
            for m in m_values:
                family.append(self._series(tag, m, k, datum, None, group, bound))
                for hom in basis:
                    family.append(self.build_second_order(tag, m, k, datum, hom, group, bound))
        elif kind == "hyperbolic":
            if tag != "hyp":
                raise InvalidInputError("The hyperbolic family needs a hyperbolic datum")
            twist = self.twist_for_hyperbolic(group, datum.generator)
            for m in m_values:
                family.append(self._series(tag, m, k, datum, None, group, bound))
                family.append(self.build_second_order(tag, m, k, datum, twist, group, bound))
        else:
            raise InvalidInputError(f"Unknown family '{kind}'")
        log_performance(logger, "spanning_family", time.time() - start_time, kind=kind, size=len(family))
        return family

    def _series(self, tag, m, k, datum, hom, group, bound) -> PoincareSeries:
        if tag == "par":
            return poincare_service.parabolic_series(group, k, m, datum, bound, hom)
        if tag == "hyp":
            return poincare_service.hyperbolic_series(group, k, m, datum, bound, hom)
        return poincare_service.elliptic_series(group, k, m, datum, bound, hom)

    @staticmethod
    def log_growth_constant(lambda_pair: LambdaPair, x: float, heights: Sequence[float]) -> float:
        """Smallest C with |Lambda+(x + iy)| <= C (1 + |log y|) at the given heights."""
        return max(abs(lambda_pair.plus(complex(x, y))) / (1.0 + abs(math.log(y))) for y in heights)


second_order_service = SecondOrderService()

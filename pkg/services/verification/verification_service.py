import math
import time
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from config.config_loader import config_loader
from config.logging_config import get_logger, log_error_with_context, log_performance
from models.domain.group import ArithmeticGroup
from models.domain.group_element import GroupElement
from models.domain.quadform import QuadForm, is_square
from models.schemas.response_models import CheckResult, VerifyReport
from services.analysis.expansion_service import expansion_service
from services.analysis.form_service import form_service
from services.analysis.quadrature_service import quadrature_service
from services.arithmetic.coset_service import coset_service
from services.arithmetic.moebius_service import moebius_service
from services.arithmetic.quadform_service import quadform_service
from services.exceptions import InvalidInputError
from services.series.poincare_service import poincare_service
from services.series.second_order_service import PeriodHom, second_order_service

logger = get_logger(__name__)

SUITES = ("identities", "inner-products", "qform", "second-order", "expansions", "invariants")

# elliptic coefficients c(0), c(2), ..., c(8) of Delta at i
DELTA_AT_I = {0: -0.114, 2: 1.094, 4: -2.621, 6: -6.694, 8: 37.787}

QFORM_POINTS = (1j, 0.3 + 1.4j, -0.4 + 1.1j)
LAW_POINTS = (0.2 + 1.5j, 0.1 + 1.2j, -0.3 + 2.0j)
LAW_ELEMENTS = (GroupElement(4, -1, 33, -8), GroupElement(3, 1, 11, 4), GroupElement(2, 1, 11, 6))
# sample offsets x + i s on the unit circle: z = (-d + x + i s) / c has Im z = Im gamma z = s / c
CIRCLE_OFFSETS = (1j, 0.28 + 0.96j, -0.28 + 0.96j)
LAW_CASES = tuple((g, tuple((-g.d + w) / g.c for w in CIRCLE_OFFSETS))
                  for g in (GroupElement(3, 1, 11, 4), GroupElement(2, 1, 11, 6), GroupElement(4, 1, 11, 3)))
SL2Z_SAMPLE = (GroupElement(2, 1, 1, 1), GroupElement(0, -1, 1, 0), GroupElement(1, 3, 2, 7), GroupElement(5, -2, 3, -1))
I_AB_EXPONENTS = (0, 1, -1, 1 + 1j, 3 - 2j)
I_AB_POWERS = (0, 2, 4, 8)

Check = Callable[[], Tuple[float, str]]


def _relative(value, expected) -> float:
    value, expected = np.asarray(value), np.asarray(expected)
    scale = max(float(np.max(np.abs(expected))), 1e-300)
    return float(np.max(np.abs(value - expected))) / scale


def class_number_oracle(D: int) -> int:
    """h(D) by union-find over primitive forms in a box, joined by the generators S and T.

    The box max(|a|, |b|, |c|) <= 3D contains every reduced form and every form met while
    walking from a reduced form to its right neighbour, so components meeting the reduced
    forms are exactly the proper classes.
    """
    bound = 3 * D
    forms = {(q.a, q.b, q.c) for q in quadform_service.lattice_forms(D, bound)}
    classes = DisjointSet(forms)
    for a, b, c in forms:
        for image in ((c, -b, a), (a, b + 2 * a, a + b + c)):
            if image in classes:
                classes.merge((a, b, c), image)
    roots = {classes[key] for key in forms if QuadForm(*key).is_reduced()}
    return len(roots)


@dataclass(frozen=True)
class _Weighted:
    """Callable with a ``weight`` attribute, as petersson_inner expects."""

    function: Callable
    weight: int

    def __call__(self, z):
        return self.function(z)


class VerificationService:
    """Named numerical checks grouped into suites; each check yields a CheckResult."""

    def __init__(self):
        self.k = 12
        self.sl2z = ArithmeticGroup(1)
        self.level11 = ArithmeticGroup(11)

    # ------------------------------------------------------------------ shared data

    @cached_property
    def delta(self):
        return form_service.evaluator(form_service.delta_qexp())

    @cached_property
    def d5_datum(self):
        reduced = quadform_service.class_list(5)[0].representative
        return moebius_service.make_hyperbolic_datum(quadform_service.automorph(reduced))

    @cached_property
    def i_datum(self):
        return moebius_service.make_elliptic_datum(1j, self.sl2z)

    @cached_property
    def rho_datum(self):
        return moebius_service.make_elliptic_datum(complex(0.5, math.sqrt(3) / 2), self.sl2z)

    @cached_property
    def cusp_datum(self):
        return moebius_service.make_parabolic_datum(self.sl2z)

    @cached_property
    def taylor_at_i(self):
        return expansion_service.elliptic_coeffs_taylor(self.delta, self.k, self.i_datum, 8)

    @cached_property
    def level11_basis(self) -> List[PeriodHom]:
        return second_order_service.hom_basis(self.level11)

    # ------------------------------------------------------------------ identities

    def check_I_ab(self) -> Tuple[float, str]:
        worst = 0.0
        for a in I_AB_EXPONENTS:
            for b in I_AB_POWERS:
                closed, numeric = quadrature_service.I_ab(a, b)
                worst = max(worst, _relative(numeric, closed))
        return worst, "a in {0, 1, -1, 1+i, 3-2i}, b in {0, 2, 4, 8}"

    def check_disc_integrals(self) -> Tuple[float, str]:
        worst = 0.0
        for k in (4, 12):
            for a in range(4):
                diagonal, _ = quadrature_service.lemma_disc_integral(a, a, k, 1.0)
                for b in range(4):
                    closed, numeric = quadrature_service.lemma_disc_integral(a, b, k, 1.0)
                    worst = max(worst, abs(numeric - closed) / diagonal)
        return worst, "0 <= a, b <= 3, k in {4, 12}, beta = 1"

    def check_sector_integrals(self) -> Tuple[float, str]:
        worst = 0.0
        for order_N, ms in ((2, (3, 4, 5)), (3, (2, 3, 4))):
            for m in ms:
                diagonal, _ = quadrature_service.lemma_sector_integral(m, m, self.k, 1.0, order_N)
                for l in ms:
                    closed, numeric = quadrature_service.lemma_sector_integral(m, l, self.k, 1.0, order_N)
                    worst = max(worst, abs(numeric - closed) / diagonal)
        return worst, "N in {2, 3}, k = 12"

    def check_mean_value(self) -> Tuple[float, str]:
        worst = 0.0
        for z in (1j, 0.3 + 1.2j):
            scale = abs(z.imag ** (-self.k / 2) * self.delta(z))
            for r in (0.5, 1.0):
                worst = max(worst, quadrature_service.mean_value_check(self.delta, self.k, z, r) / scale)
        newform = form_service.newform_11()
        z = 0.1 + 1.2j
        scale = abs(newform.eval(z) / z.imag)
        worst = max(worst, quadrature_service.mean_value_check(newform.eval, 2, z, 0.5) / scale)
        return worst, "Delta at i, 0.3+1.2i with r in {0.5, 1}; level 11 newform at 0.1+1.2i"

    def check_hyperbolic_constant(self) -> Tuple[float, str]:
        xi = self.d5_datum.xi
        worst = 0.0
        for m in range(-2, 3):
            closed = quadrature_service.hyperbolic_inner_constant(m, self.k, xi)
            worst = max(worst, _relative(quadrature_service.hyperbolic_inner_integral(m, self.k, xi), closed))
        return worst, f"|m| <= 2, xi = {xi:.12g}"

    # ------------------------------------------------------------------ expansions

    def check_elliptic_regression(self) -> Tuple[float, str]:
        worst = max(abs(self.taylor_at_i.value(l).real - expected) for l, expected in DELTA_AT_I.items())
        shown = ", ".join(f"{self.taylor_at_i.value(l).real:.3f}" for l in DELTA_AT_I)
        return worst, f"c(0, 2, 4, 6, 8) = {shown}"

    def check_odd_vanishing(self) -> Tuple[float, str]:
        values = self.taylor_at_i.values
        odd = float(np.max(np.abs(values[1::2])))
        imaginary = float(np.max(np.abs(values.imag)))
        return max(odd, imaginary), f"max |c(odd)| = {odd:.2e}, max |Im c| = {imaginary:.2e}"

    def check_chowla_selberg(self) -> Tuple[float, str]:
        expected = quadrature_service.chowla_selberg_delta_i()
        return _relative(self.taylor_at_i.value(0), expected), f"closed form {expected:.15g}"

    def check_dual_method(self) -> Tuple[float, str]:
        worst = 0.0
        for datum in (self.i_datum, self.rho_datum):
            taylor = expansion_service.elliptic_coeffs_taylor(self.delta, self.k, datum, 8)
            contour = expansion_service.elliptic_coeffs_contour(self.delta, self.k, datum, 8)
            worst = max(worst, float(np.max(np.abs(taylor.values - contour.values))))
        return worst, "m <= 8 at i and rho, absolute"

    def check_parabolic_oracle(self) -> Tuple[float, str]:
        coeffs = expansion_service.parabolic_coeffs(self.delta, self.k, self.cusp_datum, 20)
        tau = np.array([form_service.delta_qexp().coefficient(m) for m in range(1, 21)], dtype=float)
        worst = float(np.max(np.abs(coeffs.values - tau) / np.abs(tau)))
        return worst, f"tau(m), m <= 20; nonpositive modes {coeffs.meta['nonpositive_max']:.1e}"

    def check_hyperbolic_heights(self) -> Tuple[float, str]:
        datum = self.d5_datum
        height = datum.strip_height
        low = expansion_service.hyperbolic_coeffs(self.delta, self.k, datum, 3, 0.3 * height, 128)
        high = expansion_service.hyperbolic_coeffs(self.delta, self.k, datum, 3, 0.6 * height, 128)
        return _relative(low.values, high.values), "|m| <= 3 at 0.3h and 0.6h"

    def check_elliptic_radii(self) -> Tuple[float, str]:
        small = expansion_service.elliptic_coeffs_contour(self.delta, self.k, self.i_datum, 8, radius=0.3)
        large = expansion_service.elliptic_coeffs_contour(self.delta, self.k, self.i_datum, 8, radius=0.5)
        return float(np.max(np.abs(small.values - large.values))), "m <= 8 at radii 0.3 and 0.5, absolute"

    # ------------------------------------------------------------------ inner products

    def check_parabolic_inner(self) -> Tuple[float, str]:
        series = poincare_service.parabolic_series(self.sl2z, self.k, 1, self.cusp_datum)
        inner = quadrature_service.petersson_inner(self.delta, series)
        expected = quadrature_service.parabolic_inner_constant(1, self.k)
        return _relative(inner, expected), f"<Delta, P_par(., 1)> = {inner.real:.10e}"

    def check_elliptic_inner(self) -> Tuple[float, str]:
        b4 = self.taylor_at_i.elliptic_b()[4]
        series = poincare_service.elliptic_series(self.sl2z, self.k, 4, self.i_datum)
        ratio = quadrature_service.petersson_inner(self.delta, series) / b4
        expected = quadrature_service.elliptic_inner_constant(4, self.k, self.i_datum.order)
        return _relative(ratio, expected), f"ratio {ratio.real:.8e}, b_i(4) = {b4.real:.6f}"

    def check_hyperbolic_inner(self) -> Tuple[float, str]:
        datum = self.d5_datum
        coeffs = expansion_service.hyperbolic_coeffs(self.delta, self.k, datum, 3)
        computed, expected = [], []
        for m in (-1, 0, 1):
            computed.append(quadrature_service.annulus_unfolded_inner(self.delta, self.k, datum, m))
            expected.append(coeffs.value(m) * quadrature_service.hyperbolic_inner_constant(m, self.k, datum.xi))
        return _relative(computed, expected), "annulus integrals for m in {-1, 0, 1}"

    # ------------------------------------------------------------------ qform

    def check_theta_phi(self) -> Tuple[float, str]:
        datum = self.d5_datum
        cosets = coset_service.cosets_hyperbolic(self.sl2z, datum)
        theta = quadform_service.theta_katok(np.array(QFORM_POINTS), self.k, datum.generator, cosets)
        phi, _ = poincare_service.relative_poincare(poincare_service.phi_hyp(0, self.k, datum), cosets,
                                                    self.k, np.array(QFORM_POINTS))
        factor = (-datum.sign) ** (self.k // 2) * (datum.xi - 1.0 / datum.xi) ** (-self.k / 2)
        return _relative(theta, factor * phi), f"{len(cosets)} hyperbolic cosets"

    def check_theta_zagier(self) -> Tuple[float, str]:
        datum = self.d5_datum
        bound = config_loader.get_numeric("qforms", "lattice_bound", 300)
        cosets = coset_service.cosets_hyperbolic(self.sl2z, datum)
        points = np.array(QFORM_POINTS)
        theta = quadform_service.theta_katok(points, self.k, datum.generator, cosets)
        form_class = quadform_service.class_list(5)[quadform_service.class_index(quadform_service.form_of(datum.generator))]
        zagier = quadform_service.zagier_F(points, self.k, 5, bound, form_class)
        return _relative(zagier, theta), f"lattice bound {bound}"

    def check_class_numbers(self) -> Tuple[float, str]:
        top = config_loader.get_numeric("qforms", "class_number_max_discriminant", 100)
        mismatches = []
        for D in range(2, top + 1):
            if D % 4 not in (0, 1) or is_square(D):
                continue
            if len(quadform_service.class_list(D)) != class_number_oracle(D):
                mismatches.append(D)
        return float(len(mismatches)), f"nonsquare D <= {top}; mismatches {mismatches}"

    def check_period_relation(self) -> Tuple[float, str]:
        datum = self.d5_datum
        g = datum.generator
        period, _ = quadform_service.hyperbolic_period(form_service.delta_qexp(), g, 1j)
        cosets = coset_service.cosets_hyperbolic(self.sl2z, datum)
        theta = _Weighted(lambda z: quadform_service.theta_katok(z, self.k, g, cosets), self.k)
        inner = quadrature_service.petersson_inner(self.delta, theta)
        expected = quadform_service.period_constant(self.k, g) * inner
        return _relative(period, expected), f"r(Delta, {g}) = {period:.8e}"

    # ------------------------------------------------------------------ second order

    def _law_setup(self):
        k = config_loader.get_numeric("secondorder", "law_weight", 4)
        c_max = config_loader.get_numeric("secondorder", "law_c_max", 2200)
        return k, c_max

    def _hom_scale(self, hom: PeriodHom) -> float:
        return max(abs(hom(g)) for g in LAW_ELEMENTS)

    @cached_property
    def law_series(self):
        """(P[phi], P[phi, L1], P[phi, L2]) for phi = e(z) on Gamma0(11) at the law weight."""
        k, c_max = self._law_setup()
        datum = moebius_service.make_parabolic_datum(self.level11)
        plain = poincare_service.parabolic_series(self.level11, k, 1, datum, c_max)
        twisted = [second_order_service.build_second_order("par", 1, k, datum, hom, self.level11, c_max)
                   for hom in self.level11_basis]
        return (plain, *twisted)

    def check_additivity(self) -> Tuple[float, str]:
        elements = LAW_ELEMENTS + (GroupElement(1, 0, 11, 1),)
        worst = 0.0
        for hom in self.level11_basis:
            scale = self._hom_scale(hom)
            for g in elements:
                for h in elements:
                    worst = max(worst, abs(hom(g @ h) - hom(g) - hom(h)) / scale)
        return worst, f"{len(elements) ** 2} products per basis element"

    def check_parabolic_vanishing(self) -> Tuple[float, str]:
        T = GroupElement(1, 1, 0, 1)
        parabolics = [T, GroupElement(1, 0, 11, 1), GroupElement(1, 0, -11, 1)]
        parabolics += [g @ T @ g.inverse() for g in LAW_ELEMENTS]
        worst = 0.0
        for hom in self.level11_basis:
            scale = self._hom_scale(hom)
            worst = max(worst, max(abs(hom(p)) for p in parabolics) / scale)
        return worst, f"{len(parabolics)} parabolic elements"

    def check_path_cross(self) -> Tuple[float, str]:
        hom = self.level11_basis[0]
        worst = 0.0
        for g in LAW_ELEMENTS:
            worst = max(worst, _relative(hom.by_path(g), hom(g)))
        return worst, "Eichler integrals against path quadrature"

    def check_lambda_periods(self) -> Tuple[float, str]:
        hom = self.level11_basis[0]
        pair = second_order_service.lambda_pair(hom)
        scale = self._hom_scale(hom)
        worst = 0.0
        for g in LAW_ELEMENTS:
            for z in LAW_POINTS:
                worst = max(worst, abs(pair.period_from_lambda(g, z) - hom(g)) / scale)
        return worst, "Lambda(gz) - Lambda(z) against L(g)"

    def check_hyperbolic_twist(self) -> Tuple[float, str]:
        g = LAW_ELEMENTS[1]
        first, second = self.level11_basis
        twist = second_order_service.twist_for_hyperbolic(self.level11, g)
        return abs(twist(g)) / (abs(first(g)) * abs(second(g))), f"L(gamma_eta) for gamma_eta = {g}"

    def check_second_order_law(self) -> Tuple[float, str]:
        k, c_max = self._law_setup()
        plain, *twisted = self.law_series
        worst = 0.0
        for hom, series in zip(self.level11_basis, twisted):
            for g, points in LAW_CASES:
                z = np.array(points)
                base, untwisted = series(z), plain(z)
                moved = moebius_service.slash_eval(series, k, g, z)
                correction = hom(g) * untwisted
                scale = max(float(np.max(np.abs(base))), float(np.max(np.abs(correction))))
                worst = max(worst, float(np.max(np.abs(moved - base + correction))) / scale)
        return worst, f"k = {k}, c_max = {c_max}, {len(LAW_CASES)} elements on their isometric circles"

    def check_parabolic_law(self) -> Tuple[float, str]:
        k, _ = self._law_setup()
        points = [z for _, row in LAW_CASES for z in row]
        worst = max(poincare_service.modularity_residual(series, k, [GroupElement(1, 1, 0, 1)], points)
                    for series in self.law_series[1:])
        return worst, f"k = {k}"

    def check_zero_hom(self) -> Tuple[float, str]:
        k, c_max = self._law_setup()
        datum = moebius_service.make_parabolic_datum(self.level11)
        zero = PeriodHom(None, None, self.level11)
        twisted = second_order_service.build_second_order("par", 1, k, datum, zero, self.level11, c_max)
        return float(np.max(np.abs(twisted(np.array(LAW_POINTS))))), "P[phi, 0]"

    def check_elliptic_second_order(self) -> Tuple[float, str]:
        if self.level11.is_torsion_free:
            message = config_loader.get_message("verify", "vacuous", name="elliptic_invariance", group=self.level11.tag)
            logger.info(f"[VERIFY] {message}")
            return 0.0, message
        raise InvalidInputError(f"{self.level11.tag} has elliptic points; no datum is tabulated")

    def check_gram_rank(self) -> Tuple[float, str]:
        k, _ = self._law_setup()
        family = list(self.law_series)
        points = [0.2 + 1.5j, 0.1 + 1.2j, -0.3 + 2.0j, 0.45 + 0.9j, -0.15 + 1.0j, 0.35 + 1.7j]
        rank = second_order_service.gram_rank(family, points)
        bound = second_order_service.dimension_bound(self.level11, k)
        return float(max(0, rank - bound)), f"rank {rank} of {len(family)} series; (2g+1) dim S_{k} = {bound}"

    # ------------------------------------------------------------------ invariants

    def check_cocycle(self) -> Tuple[float, str]:
        z = np.array(LAW_POINTS + QFORM_POINTS)
        worst = 0.0
        for g in SL2Z_SAMPLE:
            for h in SL2Z_SAMPLE:
                composed = (g @ h).j(z)
                worst = max(worst, _relative(g.j(h.act(z)) * h.j(z), composed))
        return worst, "j(gh, z) = j(g, hz) j(h, z)"

    def check_slash_action(self) -> Tuple[float, str]:
        z = np.array(LAW_POINTS)
        worst = 0.0
        for g in SL2Z_SAMPLE:
            for h in SL2Z_SAMPLE:
                stepwise = moebius_service.slash_eval(
                    lambda w: moebius_service.slash_eval(self.delta, self.k, g, w), self.k, h, z)
                worst = max(worst, _relative(stepwise, moebius_service.slash_eval(self.delta, self.k, g @ h, z)))
        return worst, "(f|g)|h = f|gh for Delta"

    def check_operator_periods(self) -> Tuple[float, str]:
        cases = [
            (expansion_service.op_A_parabolic(self.delta, self.k, self.cusp_datum), (0.2 + 0.9j, 0.37 + 1.3j)),
            (expansion_service.op_A_hyperbolic(self.delta, self.k, self.d5_datum), (0.2 + 0.4j, -0.1 + 0.8j)),
            (expansion_service.op_A_elliptic(self.delta, self.k, self.i_datum), (0.1 + 0.3j, 0.45 + 0.6j)),
            (expansion_service.op_A_elliptic(self.delta, self.k, self.rho_datum), (0.1 + 0.3j, 0.45 + 0.6j)),
        ]
        worst = 0.0
        for A, points in cases:
            z = np.array(points)
            worst = max(worst, _relative(A(z + 1.0), A(z)))
        return worst, "A f(z + 1) = A f(z) for the cusp, D = 5, i and rho"

    def check_seed_invariance(self) -> Tuple[float, str]:
        seeds = [
            poincare_service.phi_par(1, self.k, self.cusp_datum),
            poincare_service.phi_hyp(1, self.k, self.d5_datum),
            poincare_service.phi_ell(4, self.k, self.i_datum),
            poincare_service.phi_ell(2, self.k, self.rho_datum),
        ]
        worst = max(seed.invariance_residual(LAW_POINTS) for seed in seeds)
        return worst, "parabolic, hyperbolic and elliptic seeds"

    def check_star_relation(self) -> Tuple[float, str]:
        bound = 8
        z = np.array(LAW_POINTS)
        datum = self.i_datum
        star = poincare_service.phi_elliptic_star(z, 2, self.k, datum, self.sl2z, bound)
        series = poincare_service.elliptic_series(self.sl2z, self.k, 4, datum, bound)
        return _relative(star, datum.order * series(z)), f"l = 2 at i, entry bound {bound}"

    def check_star_vanishing(self) -> Tuple[float, str]:
        bound = 8
        z = np.array(LAW_POINTS)
        star = poincare_service.phi_elliptic_star(z, 1, self.k, self.i_datum, self.sl2z, bound)
        reference = poincare_service.elliptic_series(self.sl2z, self.k, 4, self.i_datum, bound)(z)
        return float(np.max(np.abs(star))) / float(np.max(np.abs(reference))), f"l = 1 at i, entry bound {bound}"

    def check_poincare_modularity(self) -> Tuple[float, str]:
        series = poincare_service.parabolic_series(self.sl2z, self.k, 1, self.cusp_datum)
        gammas = [GroupElement(0, -1, 1, 0), GroupElement(1, 1, 0, 1)]
        return poincare_service.modularity_residual(series, self.k, gammas, LAW_POINTS), "P_par(., 1) under S and T"

    # ------------------------------------------------------------------ running

    @property
    def suites(self) -> Dict[str, List[Tuple[str, str, Check]]]:
        return {
            "identities": [
                ("I_ab_closed_form", "integral_identity", self.check_I_ab),
                ("disc_integral", "integral_identity", self.check_disc_integrals),
                ("sector_integral", "integral_identity", self.check_sector_integrals),
                ("mean_value", "integral_identity", self.check_mean_value),
                ("hyperbolic_inner_constant", "integral_identity", self.check_hyperbolic_constant),
            ],
            "expansions": [
                ("delta_at_i_regression", "elliptic_regression", self.check_elliptic_regression),
                ("delta_at_i_odd_vanishing", "odd_vanishing", self.check_odd_vanishing),
                ("chowla_selberg", "chowla_selberg", self.check_chowla_selberg),
                ("taylor_vs_contour", "dual_method", self.check_dual_method),
                ("parabolic_tau_oracle", "expansion_oracle", self.check_parabolic_oracle),
                ("hyperbolic_height_independence", "height_independence", self.check_hyperbolic_heights),
                ("elliptic_radius_independence", "height_independence", self.check_elliptic_radii),
            ],
            "inner-products": [
                ("parabolic_inner_product", "parabolic_inner", self.check_parabolic_inner),
                ("elliptic_inner_product", "elliptic_inner", self.check_elliptic_inner),
                ("hyperbolic_inner_product", "hyperbolic_inner", self.check_hyperbolic_inner),
            ],
            "qform": [
                ("theta_equals_phi_hyp", "qform_identity", self.check_theta_phi),
                ("theta_equals_zagier_F", "qform_identity", self.check_theta_zagier),
                ("class_numbers", "class_number", self.check_class_numbers),
                ("period_relation", "period_relation", self.check_period_relation),
            ],
            "second-order": [
                ("hom_additivity", "homomorphism", self.check_additivity),
                ("hom_parabolic_vanishing", "homomorphism", self.check_parabolic_vanishing),
                ("hom_path_cross_check", "homomorphism", self.check_path_cross),
                ("lambda_periods", "homomorphism", self.check_lambda_periods),
                ("hyperbolic_twist_vanishing", "homomorphism", self.check_hyperbolic_twist),
                ("second_order_law", "second_order_law", self.check_second_order_law),
                ("second_order_parabolic_law", "parabolic_law", self.check_parabolic_law),
                ("zero_hom_series", "algebraic", self.check_zero_hom),
                ("elliptic_invariance", "algebraic", self.check_elliptic_second_order),
                ("gram_rank_report", "gram_rank", self.check_gram_rank),
            ],
            "invariants": [
                ("j_cocycle", "algebraic", self.check_cocycle),
                ("slash_right_action", "algebraic", self.check_slash_action),
                ("operator_period_one", "algebraic", self.check_operator_periods),
                ("seed_invariance", "algebraic", self.check_seed_invariance),
                ("phi_star_relation", "algebraic", self.check_star_relation),
                ("phi_star_vanishing", "algebraic", self.check_star_vanishing),
                ("poincare_modularity", "parabolic_law", self.check_poincare_modularity),
            ],
        }

    def run_check(self, suite: str, name: str, tolerance_key: str, check: Check) -> CheckResult:
        tolerance = float(config_loader.get_numeric("verify", tolerance_key, 1e-8))
        start_time = time.time()
        try:
            residual, detail = check()
        except Exception as e:
            log_error_with_context(logger, e, f"verify.{name}", suite=suite)
            residual, detail = math.inf, f"{type(e).__name__}: {e}"
        duration = time.time() - start_time
        passed = bool(residual <= tolerance)
        key = "check_passed" if passed else "check_failed"
        message = config_loader.get_message("verify", key, name=name, residual=residual, tolerance=tolerance)
        if passed:
            logger.info(f"[VERIFY] {message}")
        else:
            logger.warning(f"[VERIFY] {message}")
        return CheckResult(name=name, suite=suite, residual=residual, tolerance=tolerance,
                           passed=passed, duration=duration, detail=detail)

    def run(self, suite: str = "all", only: Sequence[str] = ()) -> VerifyReport:
        """Run one suite (or ``all``) and collect the results.

        Args:
            suite: a name from SUITES or ``all``
            only: restrict to these check names when given

        Returns:
            VerifyReport; ``passed`` iff every check passed
        """
        if suite != "all" and suite not in SUITES:
            raise InvalidInputError(f"Unknown suite '{suite}' (expected one of {', '.join(SUITES)} or all)")
        logger.info(f"[VERIFY] {config_loader.get_message('verify', 'start', suite=suite)}")
        start_time = time.time()
        names = SUITES if suite == "all" else (suite,)
        table = self.suites
        results = []
        for name in names:
            for check_name, tolerance_key, check in table[name]:
                if only and check_name not in only:
                    continue
                results.append(self.run_check(name, check_name, tolerance_key, check))
        report = VerifyReport(suite=suite, checks=results, duration=time.time() - start_time)
        log_performance(logger, f"verify {suite}", report.duration, checks=len(results))
        logger.info("[VERIFY] " + config_loader.get_message(
            "verify", "summary", passed=len(results) - len(report.failures), total=len(results),
            duration=report.duration))
        return report


verification_service = VerificationService()

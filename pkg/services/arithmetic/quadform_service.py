import math
import time
from math import gcd, isqrt
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import comb

from config.config_loader import config_loader
from config.logging_config import (get_logger, log_error_with_context, log_function_entry,
                                   log_function_exit, log_performance)
from models.domain.coset import CosetList
from models.domain.group_element import GroupElement, PointLike
from models.domain.qexpansion import QExpansion
from models.domain.quadform import FormClass, QuadForm, is_square
from services.exceptions import InvalidInputError, PoleError, ToleranceError

logger = get_logger(__name__)

MAX_REDUCTION_STEPS = 10000


class QuadFormService:
    """Indefinite binary quadratic forms: reduction, cycles, automorphs, theta and Zagier sums, periods."""

    def __init__(self):
        self._classes: Dict[int, List[FormClass]] = {}

    @staticmethod
    def validate_discriminant(D: int) -> None:
        if D <= 0 or D % 4 not in (0, 1) or is_square(D):
            raise InvalidInputError(config_loader.get_message("errors", "bad_discriminant", D=D))

    @staticmethod
    def _normalized_b(b: int, c: int, D: int) -> int:
        """The b' = -b mod 2|c| in the normalization window for the right neighbour."""
        two_c = 2 * abs(c)
        root = isqrt(D)
        if abs(c) > root:
            low = -abs(c) + 1
        else:
            low = root - two_c + 1
        return low + ((-b - low) % two_c)

    def right_neighbour(self, form: QuadForm) -> Tuple[QuadForm, GroupElement]:
        """rho(a, b, c) = (c, b', (b'^2 - D)/4c) = Q o (0, -1; 1, s)."""
        D = form.discriminant
        b_new = self._normalized_b(form.b, form.c, D)
        s = (b_new + form.b) // (2 * form.c)
        g = GroupElement(0, -1, 1, s)
        result = form.transform(g)
        return result, g

    def reduce(self, form: QuadForm) -> Tuple[QuadForm, GroupElement]:
        """Iterate the right neighbour to a reduced form; returns (R, g) with form o g = R."""
        self.validate_discriminant(form.discriminant)
        g = GroupElement.identity()
        current = form
        for _ in range(MAX_REDUCTION_STEPS):
            if current.is_reduced():
                return current, g
            current, step = self.right_neighbour(current)
            g = g @ step
        raise ToleranceError(f"Reduction of {form} did not terminate", achieved=float(MAX_REDUCTION_STEPS))

    def cycle(self, reduced: QuadForm) -> Tuple[QuadForm, ...]:
        forms = [reduced]
        current, _ = self.right_neighbour(reduced)
        while current != reduced:
            forms.append(current)
            current, _ = self.right_neighbour(current)
            if len(forms) > MAX_REDUCTION_STEPS:
                raise ToleranceError(f"Cycle of {reduced} did not close", achieved=float(len(forms)))
        return tuple(forms)

    def reduced_forms(self, D: int) -> List[QuadForm]:
        self.validate_discriminant(D)
        root = math.sqrt(D)
        forms = []
        for b in range(1, isqrt(D) + 1):
            if (b - D) % 2:
                continue
            numerator = b * b - D
            for a_abs in range(1, isqrt(D) + 1):
                if not (root - b < 2 * a_abs < root + b):
                    continue
                for a in (a_abs, -a_abs):
                    if numerator % (4 * a):
                        continue
                    form = QuadForm(a, b, numerator // (4 * a))
                    if form.is_primitive and form.is_reduced():
                        forms.append(form)
        return sorted(forms, key=lambda q: (q.a, q.b, q.c))

    def class_list(self, D: int) -> List[FormClass]:
        """One FormClass per proper SL2(Z) class of primitive forms of discriminant D.

        Args:
            D: positive nonsquare discriminant, 0 or 1 mod 4

        Returns:
            Classes ordered by their least reduced form; len() is h(D)
        """
        if D in self._classes:
            return self._classes[D]
        start_time = time.time()
        log_function_entry(logger, "class_list", D=D)
        seen = set()
        classes = []
        for form in self.reduced_forms(D):
            if form in seen:
                continue
            members = self.cycle(form)
            seen.update(members)
            classes.append(FormClass(form, members))
        self._classes[D] = classes
        duration = time.time() - start_time
        log_performance(logger, "class_list", duration, D=D, classes=len(classes))
        log_function_exit(logger, "class_list", result=f"h({D}) = {len(classes)}", duration=duration)
        return classes

    def class_index(self, form: QuadForm) -> int:
        reduced, _ = self.reduce(form)
        for index, form_class in enumerate(self.class_list(form.discriminant)):
            if reduced in form_class:
                return index
        raise ToleranceError(f"Reduced form {reduced} not found in any cycle", achieved=None)

    @staticmethod
    def pell_solution(D: int) -> Tuple[int, int]:
        """Least (t, u), u >= 1, with t^2 - D u^2 = 4."""
        u = 1
        while True:
            t_squared = D * u * u + 4
            t = isqrt(t_squared)
            if t * t == t_squared:
                return t, u
            u += 1

    def automorph(self, form: QuadForm) -> GroupElement:
        """Fundamental automorph ((t - bu)/2, -cu; au, (t + bu)/2) of a primitive form."""
        log_function_entry(logger, "automorph", form=str(form))
        D = form.discriminant
        self.validate_discriminant(D)
        if not form.is_primitive:
            raise InvalidInputError(f"Form {form} is not primitive")
        t, u = self.pell_solution(D)
        g = GroupElement((t - form.b * u) // 2, -form.c * u, form.a * u, (t + form.b * u) // 2)
        if form.transform(g) != form or g.det != 1:
            e = ToleranceError(f"Automorph check failed for {form}: {g}")
            log_error_with_context(logger, e, "automorph", form=str(form))
            raise e
        log_function_exit(logger, "automorph", result=str(g))
        return g

    @staticmethod
    def form_of(g: GroupElement) -> QuadForm:
        """Q_g(z) = c z^2 + (d - a) z - b; its zeros are the fixed points of g."""
        if not g.is_integral or abs(g.trace) <= 2:
            raise InvalidInputError(config_loader.get_message(
                "errors", "not_hyperbolic", matrix=str(g), trace=g.trace))
        return QuadForm(g.c, g.d - g.a, -g.b)

    @staticmethod
    def _check_weight(k: int) -> None:
        if k < 4 or k % 2:
            raise InvalidInputError(config_loader.get_message("errors", "bad_weight", minimum=4, weight=k))

    def theta_katok(self, z: PointLike, k: int, generator: GroupElement, cosets: CosetList) -> PointLike:
        """Truncated sum of Q_g(gamma z)^{-k/2} j(gamma, z)^{-k} = (Q_g o gamma)(z)^{-k/2} over the coset reps."""
        self._check_weight(k)
        if cosets.stabilizer_tag != "hyperbolic":
            raise InvalidInputError(config_loader.get_message(
                "errors", "stabilizer_mismatch", found=cosets.stabilizer_tag, expected="hyperbolic"))
        start_time = time.time()
        base = self.form_of(generator)
        z_arr = np.asarray(z, dtype=complex)
        total = np.zeros_like(z_arr)
        for g in cosets.reps:
            total = total + self._form_term(base.transform(g), z_arr, k)
        log_performance(logger, "theta_katok", time.time() - start_time, reps=len(cosets), points=z_arr.size)
        return complex(total) if np.ndim(z) == 0 else total

    @staticmethod
    def _form_term(form: QuadForm, z: np.ndarray, k: int) -> np.ndarray:
        value = form(z)
        if np.any(value == 0):
            raise PoleError(f"Form {form} vanishes at a point of H")
        return form.power(z, -(k // 2))

    def lattice_forms(self, D: int, bound: int) -> List[QuadForm]:
        """All primitive (a, b, c) with b^2 - 4ac = D and max(|a|, |b|, |c|) <= bound, in (a, b) order."""
        a = np.arange(-bound, bound + 1)
        b = np.arange(-bound, bound + 1)
        A, B = np.meshgrid(a, b, indexing="ij")
        A, B = A.ravel(), B.ravel()
        keep = A != 0
        A, B = A[keep], B[keep]
        numerator = B * B - D
        divisible = numerator % (4 * A) == 0
        A, B, numerator = A[divisible], B[divisible], numerator[divisible]
        C = numerator // (4 * A)
        inside = np.abs(C) <= bound
        A, B, C = A[inside], B[inside], C[inside]
        primitive = np.gcd(np.gcd(A, B), C) == 1
        return [QuadForm(int(x), int(y), int(w)) for x, y, w in zip(A[primitive], B[primitive], C[primitive])]

    def zagier_F(self, z: PointLike, k: int, D: int, bound: int,
                 form_class: Optional[FormClass] = None) -> PointLike:
        """Lattice sum of Q(z)^{-k/2} over primitive forms of discriminant D; optionally one class only."""
        self._check_weight(k)
        self.validate_discriminant(D)
        start_time = time.time()
        forms = self.lattice_forms(D, bound)
        if form_class is not None:
            target = self.class_index(form_class.representative)
            forms = [q for q in forms if self.class_index(q) == target]
        z_arr = np.asarray(z, dtype=complex)
        total = np.zeros_like(z_arr)
        for form in forms:
            total = total + self._form_term(form, z_arr, k)
        log_performance(logger, "zagier_F", time.time() - start_time, D=D, bound=bound, forms=len(forms))
        return complex(total) if np.ndim(z) == 0 else total

    def hyperbolic_period(self, f: QExpansion, generator: GroupElement, w: complex,
                          order: int = None, height: float = 1.0) -> Tuple[complex, float]:
        """r_k(f, g) = integral of f(z) Q_g(z)^{k/2-1} dz from w to g w.

        The path runs w -> Re w + iH -> Re(g w) + iH -> g w with H = max(height, Im w, Im g w),
        each leg by composite Gauss-Legendre. Returns (value, error estimate from halving the order).
        """
        order = order or config_loader.get_numeric("quadrature", "order", 48)
        k = f.weight
        form = self.form_of(generator)
        image = generator.act(complex(w))
        top = max(height, w.imag, image.imag)
        corners = [complex(w), complex(w.real, top), complex(image.real, top), image]

        def integrand(points):
            return f.eval(points) * form.power(points, k // 2 - 1)

        value = path_integral(integrand, corners, order)
        coarse = path_integral(integrand, corners, max(order // 2, 4))
        error = abs(value - coarse)
        logger.debug(f"[QUAD] Period of {generator} from {w}: {value} (error {error:.2e})")
        return value, error

    @staticmethod
    def period_constant(k: int, generator: GroupElement) -> float:
        """C with C * <f, theta_{k,g}> = r_k(f, g): -sgn(tr g) D^{(k-1)/2} 2^{k-2} / (pi binom(k-2, k/2-1))."""
        D = generator.trace ** 2 - 4
        sign = 1 if generator.trace > 0 else -1
        return -sign * D ** ((k - 1) / 2) * 2.0 ** (k - 2) / (math.pi * comb(k - 2, k // 2 - 1, exact=True))


def path_integral(integrand: Callable, corners: List[complex], order: int, panel_width: float = None) -> complex:
    """Integral of a holomorphic integrand along the polygon through ``corners``.

    Each segment is split into panels no longer than ``panel_width`` and integrated with
    Gauss-Legendre of the given order.
    """
    panel_width = panel_width or config_loader.get_numeric("quadrature", "panel_width", 1.0)
    nodes, weights = leggauss(order)
    total = 0j
    for start, end in zip(corners[:-1], corners[1:]):
        length = abs(end - start)
        if length == 0:
            continue
        panels = max(1, math.ceil(length / panel_width))
        for p in range(panels):
            a = start + (end - start) * p / panels
            b = start + (end - start) * (p + 1) / panels
            half = (b - a) / 2
            points = a + half * (nodes + 1.0)
            total += complex(np.sum(weights * integrand(points)) * half)
    return total


quadform_service = QuadFormService()

import cmath
import math
import time
from fractions import Fraction
from typing import Callable, Tuple, Union

import numpy as np

from config.config_loader import config_loader
from config.logging_config import (get_logger, log_error_with_context, log_function_entry,
                                   log_function_exit, log_performance)
from models.domain.fixed_point import EllipticDatum, HyperbolicDatum, ParabolicDatum
from models.domain.group import ArithmeticGroup
from models.domain.group_element import INFINITY, GroupElement, PointLike, _Infinity
from services.exceptions import DomainError, InvalidInputError, PoleError, ToleranceError

logger = get_logger(__name__)

Evaluator = Callable[[PointLike], PointLike]

CLASSES = ("identity", "parabolic", "elliptic", "hyperbolic")


class MoebiusService:
    """Moebius action, the weight-k slash operator and the three scaling-matrix constructions."""

    def __init__(self):
        self.pole_tolerance = config_loader.get_numeric("moebius", "pole_tolerance", 1e-14)
        self.conjugation_tolerance = config_loader.get_numeric("moebius", "conjugation_tolerance", 1e-10)
        self.search_entry = config_loader.get_numeric("moebius", "stabilizer_search_entry", 6)

    @staticmethod
    def check_upper_half_plane(z: PointLike) -> None:
        if np.any(np.asarray(z).imag <= 0):
            raise DomainError(config_loader.get_message("errors", "not_upper_half_plane", z=z))

    def apply(self, g: GroupElement, z: Union[PointLike, _Infinity], domain_check: bool = True) -> Tuple:
        """Return (g z, j(g, z)).

        Args:
            g: matrix acting
            z: point of H (scalar or array) or INFINITY
            domain_check: require Im z > 0; off for points of the unit disc

        Returns:
            Image and automorphy factor; at INFINITY the image is a/c (INFINITY when c = 0)
            and the factor is INFINITY unless c = 0.
        """
        if z is INFINITY:
            if g.c == 0:
                return INFINITY, g.d
            image = Fraction(g.a, g.c) if g.is_integral else g.a / g.c
            return image, INFINITY
        if domain_check:
            self.check_upper_half_plane(z)
        jfactor = g.j(z)
        scale = abs(g.c) * np.abs(z) + abs(g.d)
        if np.any(np.abs(jfactor) <= self.pole_tolerance * np.maximum(scale, 1.0)):
            raise PoleError(config_loader.get_message("errors", "pole", matrix=str(g), z=z))
        return (g.a * z + g.b) / jfactor, jfactor

    def slash_eval(self, f: Evaluator, k: int, g: GroupElement, z: PointLike,
                   domain_check: bool = True) -> PointLike:
        """(f|_k g)(z) = det(g)^{k/2} f(g z) / j(g, z)^k."""
        if k < 2 or k % 2:
            raise InvalidInputError(config_loader.get_message("errors", "bad_weight", minimum=2, weight=k))
        image, jfactor = self.apply(g, z, domain_check)
        value = f(image) / jfactor ** k
        det = g.det
        return value if det == 1 else value * det ** (k // 2)

    @staticmethod
    def classify(g: GroupElement) -> str:
        trace = abs(g.trace)
        if trace == 2:
            if g.b == 0 and g.c == 0:
                return "identity"
            return "parabolic"
        return "elliptic" if trace < 2 else "hyperbolic"

    @staticmethod
    def psl_eq(g: GroupElement, h: GroupElement) -> bool:
        return g.psl_eq(h)

    def _conjugation_residual(self, g: GroupElement, sigma: GroupElement, sigma_inv: GroupElement,
                              target: GroupElement) -> float:
        return max(abs(x - y) for x, y in zip(g.conjugate_by(sigma, sigma_inv).entries, target.entries))

    def make_hyperbolic_datum(self, generator: GroupElement) -> HyperbolicDatum:
        """Diagonalize a hyperbolic element: sigma^-1 g sigma = sign * diag(xi, 1/xi) with xi > 1.

        sigma sends oo to the attracting fixed point eta2 and 0 to eta1; its columns
        are scaled to det 1 with equal norms.
        """
        log_function_entry(logger, "make_hyperbolic_datum", generator=str(generator))
        if self.classify(generator) != "hyperbolic":
            raise InvalidInputError(config_loader.get_message(
                "errors", "not_hyperbolic", matrix=str(generator), trace=generator.trace))
        a, b, c, d = (float(x) for x in generator.entries)
        trace = a + d
        sign = 1 if trace > 0 else -1
        xi = (abs(trace) + math.sqrt(trace * trace - 4.0)) / 2.0

        def eigenvector(lam: float) -> Tuple[float, float]:
            if c != 0:
                return lam - d, c
            if b != 0:
                return b, lam - a
            return (1.0, 0.0) if abs(lam - a) < abs(lam - d) else (0.0, 1.0)

        v1 = eigenvector(sign * xi)
        v2 = eigenvector(sign / xi)
        det = v1[0] * v2[1] - v2[0] * v1[1]
        if det < 0:
            v2, det = (-v2[0], -v2[1]), -det
        n1, n2 = math.hypot(*v1), math.hypot(*v2)
        s1, s2 = math.sqrt(n2 / (n1 * det)), math.sqrt(n1 / (n2 * det))
        sigma = GroupElement(v1[0] * s1, v2[0] * s2, v1[1] * s1, v2[1] * s2)
        sigma_inv = GroupElement(sigma.d, -sigma.b, -sigma.c, sigma.a)
        residual = self._conjugation_residual(generator, sigma, sigma_inv,
                                              GroupElement(sign * xi, 0.0, 0.0, sign / xi))
        if residual > self.conjugation_tolerance:
            raise ToleranceError(config_loader.get_message(
                "errors", "tolerance", detail=f"diagonalization of {generator}", achieved=residual), residual)
        eta1 = v2[0] / v2[1] if v2[1] else math.inf
        eta2 = v1[0] / v1[1] if v1[1] else math.inf
        datum = HyperbolicDatum(generator, xi, sigma, sigma_inv, eta1, eta2, sign)
        log_function_exit(logger, "make_hyperbolic_datum", result=f"xi={xi:.12g}, residual={residual:.2e}")
        return datum

    def _elliptic_stabilizer(self, z0: complex, group: ArithmeticGroup) -> Tuple[GroupElement, int]:
        tol = max(self.conjugation_tolerance, 1e-9)
        bound = self.search_entry
        for c in sorted(range(-bound, bound + 1), key=lambda v: (abs(v), -v)):
            if c == 0 or c % group.level:
                continue
            for a in range(-bound, bound + 1):
                for d in range(-bound, bound + 1):
                    if abs(a + d) >= 2 or (a * d - 1) % c:
                        continue
                    g = GroupElement(a, (a * d - 1) // c, c, d)
                    if abs(g.act(z0) - z0) <= tol * max(1.0, abs(z0)):
                        return g, 2 if g.trace == 0 else 3
        raise InvalidInputError(config_loader.get_message(
            "errors", "not_elliptic_point", z=z0, group=group.tag))

    def make_elliptic_datum(self, z0: complex, group: ArithmeticGroup) -> EllipticDatum:
        """Scaling data at an elliptic point.

        sigma = (1/2i beta)(-conj z0, z0; -1, 1), sigma^-1 = (1, -z0; 1, -conj z0), and the
        generator is replaced by the power (with sign) acting as diag(zeta, 1/zeta).
        """
        log_function_entry(logger, "make_elliptic_datum", z0=z0, group=group.tag)
        z0 = complex(z0)
        self.check_upper_half_plane(z0)
        try:
            generator, order = self._elliptic_stabilizer(z0, group)
        except InvalidInputError as e:
            log_error_with_context(logger, e, "make_elliptic_datum", z0=z0, group=group.tag)
            raise
        # pin z0 to the exact fixed point of the generator
        a, b, c, d = generator.entries
        root = cmath.sqrt(complex((a + d) ** 2 - 4))
        z0 = ((a - d) + root) / (2 * c)
        if z0.imag < 0:
            z0 = ((a - d) - root) / (2 * c)
        beta = z0.imag
        scale = 1.0 / (2j * beta)
        sigma = GroupElement(-z0.conjugate() * scale, z0 * scale, -scale, scale)
        sigma_inv = GroupElement(1.0 + 0j, -z0, 1.0 + 0j, -z0.conjugate())
        zeta = cmath.exp(1j * math.pi / order)
        for power in range(1, 2 * order):
            for sign in (1, -1):
                candidate = generator ** power if sign > 0 else -(generator ** power)
                rotated = candidate.conjugate_by(sigma, sigma_inv)
                if abs(rotated.a - zeta) < 1e-9 and abs(rotated.b) < 1e-9 and abs(rotated.c) < 1e-9:
                    datum = EllipticDatum(z0, candidate, order, sigma, sigma_inv)
                    log_function_exit(logger, "make_elliptic_datum", result=f"epsilon={candidate}, N={order}")
                    return datum
        raise ToleranceError(config_loader.get_message(
            "errors", "tolerance", detail=f"rotation normalization at {z0}", achieved=1.0), 1.0)

    def make_parabolic_datum(self, group: ArithmeticGroup, cusp=INFINITY) -> ParabolicDatum:
        """sigma_oo = I with generator T; for cusp 0 of Gamma0(N), sigma_0 = (0, -1/sqrt N; sqrt N, 0)."""
        if cusp is INFINITY or (group.level == 1 and cusp == 0):
            one = GroupElement.identity()
            return ParabolicDatum(INFINITY, one, one, GroupElement(1, 1, 0, 1))
        if cusp == 0:
            root = math.sqrt(group.level)
            sigma = GroupElement(0.0, -1.0 / root, root, 0.0)
            sigma_inv = GroupElement(0.0, 1.0 / root, -root, 0.0)
            return ParabolicDatum(Fraction(0), sigma, sigma_inv, GroupElement(1, 0, -group.level, 1))
        raise InvalidInputError(f"Only the cusps oo and 0 are supported, got {cusp}")

    @staticmethod
    def hyperbolic_distance(z: PointLike, w: complex) -> PointLike:
        u = np.abs((z - w) / (z - np.conj(w)))
        return np.log((1.0 + u) / (1.0 - u))

    def simple_expansion_coeffs(self, f: Evaluator, z0: complex, n_max: int, radius: float = None) -> np.ndarray:
        """Coefficients a(n), n <= n_max, of f(z) = sum a(n) (sigma^-1 z)^n about z0 (Cauchy sums)."""
        start_time = time.time()
        radius = radius or config_loader.get_numeric("expansions", "contour_radius", 0.5)
        nodes = max(config_loader.get_numeric("expansions", "min_nodes", 64),
                    config_loader.get_numeric("expansions", "node_factor", 8) * n_max)
        w = radius * np.exp(2j * math.pi * np.arange(nodes) / nodes)
        z = (z0 - np.conj(z0) * w) / (1.0 - w)
        spectrum = np.fft.fft(f(z)) / nodes
        coeffs = spectrum[: n_max + 1] / radius ** np.arange(n_max + 1)
        log_performance(logger, "simple_expansion_coeffs", time.time() - start_time, nodes=nodes)
        return coeffs

    @staticmethod
    def reduce_to_fundamental_domain(z: PointLike, max_steps: int = 200) -> Tuple[np.ndarray, np.ndarray]:
        """Move points into |Re w| <= 1/2, |w| >= 1 by T and S.

        Returns (w, J) with w = g z and J = j(g, z), so f(z) = f(w) / J^k for f of level 1.
        """
        w = np.array(z, dtype=complex, ndmin=1)
        jfactor = np.ones_like(w)
        for _ in range(max_steps):
            w = w - np.floor(w.real + 0.5)
            inside = np.abs(w) >= 1.0 - 1e-15
            if np.all(inside):
                break
            flip = ~inside
            jfactor[flip] = jfactor[flip] * w[flip]
            w[flip] = -1.0 / w[flip]
        else:
            raise ToleranceError(f"Reduction to the fundamental domain did not finish in {max_steps} steps")
        return w, jfactor

    @staticmethod
    def reduce_with_element(z: complex, max_steps: int = 200) -> Tuple[complex, GroupElement]:
        """Scalar reduction that also returns the integral g in SL2(Z) with w = g z."""
        w = complex(z)
        if w.imag <= 0:
            raise DomainError(config_loader.get_message("errors", "not_upper_half_plane", z=w))
        g = GroupElement.identity()
        for _ in range(max_steps):
            shift = int(math.floor(w.real + 0.5))
            if shift:
                w -= shift
                g = GroupElement(1, -shift, 0, 1) @ g
            if abs(w) >= 1.0 - 1e-15:
                return w, g
            w = -1.0 / w
            g = GroupElement(0, -1, 1, 0) @ g
        raise ToleranceError(f"Reduction to the fundamental domain did not finish in {max_steps} steps")


moebius_service = MoebiusService()

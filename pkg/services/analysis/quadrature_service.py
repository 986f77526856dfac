import math
import time
from typing import Callable, Optional, Tuple

import mpmath
import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import comb

from config.config_loader import config_loader
from config.logging_config import (get_logger, log_error_with_context, log_function_entry,
                                   log_function_exit, log_performance)
from models.domain.fixed_point import HyperbolicDatum
from models.domain.quad_domain import Domain
from services.arithmetic.moebius_service import moebius_service
from services.exceptions import DomainError, InvalidInputError, ToleranceError

logger = get_logger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]


def _gauss(a: float, b: float, order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(order)
    half = (b - a) / 2.0
    return a + half * (nodes + 1.0), weights * half


def _unit_panels(lo: float, hi: float) -> list:
    """[lo, hi] cut at the integers strictly inside it."""
    cuts = [lo] + [float(n) for n in range(math.floor(lo) + 1, math.ceil(hi))] + [hi]
    return [(a, b) for a, b in zip(cuts[:-1], cuts[1:]) if b > a]


class QuadratureService:
    """Integration against the hyperbolic measure dmu = dx dy / y^2 and the closed forms it is checked against."""

    def __init__(self):
        self.order = config_loader.get_numeric("quadrature", "order", 48)
        self.y_cap = config_loader.get_numeric("quadrature", "y_cap", 12.0)

    # ------------------------------------------------------------------ nodes

    def _nodes(self, domain: Domain, order: int) -> Tuple[np.ndarray, np.ndarray]:
        """Points (in H, or in the disc for Disc and sector) and weights already including dmu."""
        tag, p = domain.tag, domain.params
        if tag == "F_SL2Z":
            xs, wx = _gauss(-0.5, 0.5, order)
            points, weights = [], []
            for x, weight_x in zip(xs, wx):
                y_lo = math.sqrt(1.0 - x * x)
                for a, b in _unit_panels(y_lo, p["y_cap"]):
                    ys, wy = _gauss(a, b, order)
                    points.append(x + 1j * ys)
                    weights.append(weight_x * wy / ys ** 2)
            return np.concatenate(points), np.concatenate(weights)
        if tag == "F_par":
            xs, wx = _gauss(0.0, p["width"], order)
            points, weights = [], []
            for a, b in _unit_panels(p["y_lo"], p["y_cap"]):
                ys, wy = _gauss(a, b, order)
                X, Y = np.meshgrid(xs, ys, indexing="ij")
                points.append((X + 1j * Y).ravel())
                weights.append(np.outer(wx, wy / ys ** 2).ravel())
            return np.concatenate(points), np.concatenate(weights)
        if tag == "F_hyp":
            # z = e^{t + i theta}, dmu = dt dtheta / sin^2 theta
            ts, wt = _gauss(0.0, 2.0 * math.log(p["xi"]), order)
            thetas, wth = [], []
            for a, b in ((0.0, math.pi / 4), (math.pi / 4, 3 * math.pi / 4), (3 * math.pi / 4, math.pi)):
                th, w = _gauss(a, b, order)
                thetas.append(th)
                wth.append(w)
            thetas, wth = np.concatenate(thetas), np.concatenate(wth)
            T, TH = np.meshgrid(ts, thetas, indexing="ij")
            return np.exp(T + 1j * TH).ravel(), np.outer(wt, wth / np.sin(thetas) ** 2).ravel()
        if tag in ("Disc", "F_ell_sector", "Ball"):
            if tag == "Disc":
                radius, phi_lo, phi_hi = 1.0, 0.0, 2.0 * math.pi
            elif tag == "F_ell_sector":
                half = math.pi / p["order"]
                radius, phi_lo, phi_hi = 1.0, math.pi - half, math.pi + half
            else:
                radius, phi_lo, phi_hi = domain.disc_radius, 0.0, 2.0 * math.pi
            rhos, wr = _gauss(0.0, radius, order)
            if tag == "F_ell_sector":
                phis, wp = _gauss(phi_lo, phi_hi, order)
            else:
                # full circle: trapezoid rule
                phis = np.arange(2 * order) * (math.pi / order)
                wp = np.full(2 * order, math.pi / order)
            R, PHI = np.meshgrid(rhos, phis, indexing="ij")
            u = (R * np.exp(1j * PHI)).ravel()
            # hyperbolic area element of the disc: 4 dA / (1 - |u|^2)^2
            weights = np.outer(wr * 4.0 * rhos / (1.0 - rhos ** 2) ** 2, wp).ravel()
            if tag == "Ball":
                z0 = p["center"]
                return (z0 - np.conj(z0) * u) / (1.0 - u), weights
            return u, weights
        raise InvalidInputError(f"Unknown integration domain {tag}")

    def _sum(self, F: Integrand, domain: Domain, order: int) -> complex:
        points, weights = self._nodes(domain, order)
        values = np.asarray(F(points), dtype=complex)
        bad = ~np.isfinite(values)
        if np.any(bad):
            where = complex(points[np.argmax(bad)])
            raise ToleranceError(f"Non-finite integrand at {where} on {domain.tag}", achieved=math.inf)
        return complex(np.sum(weights * values))

    def mu_integrate(self, F: Integrand, domain: Domain, order: Optional[int] = None) -> Tuple[complex, float]:
        """Integral of F against dmu over the domain.

        Disc, sector and ball domains use the disc model: F receives disc points for Disc and
        F_ell_sector, points of H for Ball. The error estimate compares with half the order.

        Args:
            F: vectorized integrand
            domain: integration region
            order: Gauss-Legendre order per panel

        Returns:
            (value, error estimate)
        """
        order = order or self.order
        start_time = time.time()
        try:
            value = self._sum(F, domain, order)
            coarse = self._sum(F, domain, max(order // 2, 4))
        except Exception as e:
            log_error_with_context(logger, e, "mu_integrate", domain=domain.tag, order=order)
            raise
        error = abs(value - coarse)
        duration = time.time() - start_time
        log_performance(logger, "mu_integrate", duration, domain=domain.tag, order=order)
        logger.debug(f"[QUAD] {domain.tag} order {order}: {value} (error {error:.2e})")
        return value, error

    def petersson_inner(self, f, g, y_cap: Optional[float] = None, order: Optional[int] = None) -> complex:
        """<f, g> = integral over F_SL2Z of f conj(g) y^k dmu, truncated at y_cap.

        ``f`` and ``g`` are callables with a ``weight`` attribute.
        """
        if f.weight != g.weight:
            raise InvalidInputError(f"Weight mismatch in inner product: {f.weight} vs {g.weight}")
        k = f.weight
        y_cap = y_cap or self.y_cap
        log_function_entry(logger, "petersson_inner", k=k, y_cap=y_cap)

        def integrand(z):
            return f(z) * np.conj(g(z)) * z.imag ** k

        value, error = self.mu_integrate(integrand, Domain.sl2z(y_cap), order)
        log_function_exit(logger, "petersson_inner", result=f"{value:.6e} (error {error:.1e})")
        return value

    # ------------------------------------------------------------------ closed forms

    def I_ab(self, a: complex, b: int, order: Optional[int] = None) -> Tuple[complex, complex]:
        """I_{a,b} = integral_0^pi e^{a theta} sin^b theta dtheta as (closed form, quadrature).

        a = 0: pi / 2^b binom(b, b/2). Otherwise
        I_{a,0} a Gamma(b+1) Gamma(a/2i - b/2) / ((2i)^{b+1} Gamma(a/2i + b/2 + 1)) with I_{a,0} = (e^{pi a} - 1)/a.
        """
        if b < 0 or b % 2:
            raise InvalidInputError(f"b must be an even nonnegative integer, got {b}")
        order = order or self.order
        theta, weights = _gauss(0.0, math.pi, order)
        numeric = complex(np.sum(weights * np.exp(a * theta) * np.sin(theta) ** b))
        if a == 0:
            return math.pi / 2 ** b * comb(b, b // 2, exact=True), numeric
        s = mpmath.mpc(a) / mpmath.mpc(0, 2)
        try:
            closed = (mpmath.exp(mpmath.pi * a) - 1) * mpmath.gamma(b + 1) * mpmath.gamma(s - b // 2) \
                / (mpmath.mpc(0, 2) ** (b + 1) * mpmath.gamma(s + b // 2 + 1))
        except ValueError:
            # a in 2iZ hits a removable pole of the Gamma quotient
            logger.warning(f"[QUAD] Gamma form of I_(a,b) singular at a={a}; using quadrature")
            return numeric, numeric
        return complex(closed), numeric

    @staticmethod
    def hyperbolic_inner_constant(m: int, k: int, xi: float) -> complex:
        """Gamma-product form of 2 log xi I_{-2 pi m / log xi, k-2}; m = 0 gives 2 pi log xi 2^{2-k} binom(k-2, k/2-1)."""
        log_xi = math.log(xi)
        if m == 0:
            return 2.0 * math.pi * log_xi * 2.0 ** (2 - k) * comb(k - 2, k // 2 - 1, exact=True)
        s = mpmath.mpc(0, math.pi * m / log_xi)
        value = 2 * log_xi / mpmath.mpc(0, 2) ** (k - 1) * (mpmath.exp(-2 * mpmath.pi ** 2 * m / log_xi) - 1) \
            * mpmath.gamma(s - k // 2 + 1) * mpmath.gamma(k - 1) / mpmath.gamma(s + k // 2)
        return complex(value)

    def hyperbolic_inner_integral(self, m: int, k: int, xi: float) -> complex:
        """2 log xi I_{-2 pi m / log xi, k-2} by quadrature."""
        log_xi = math.log(xi)
        _, numeric = self.I_ab(-2.0 * math.pi * m / log_xi, k - 2)
        return 2.0 * log_xi * numeric

    @staticmethod
    def parabolic_inner_constant(m: int, k: int) -> float:
        """(k-2)! / (4 pi m)^{k-1}."""
        return math.factorial(k - 2) / (4.0 * math.pi * m) ** (k - 1)

    @staticmethod
    def elliptic_inner_constant(m: int, k: int, order: int) -> float:
        """pi (k-2)! (Nm - k/2)! / (2^{k-2} N (Nm + k/2 - 1)!)."""
        l = order * m - k // 2
        if l < 0:
            raise InvalidInputError(f"N m - k/2 = {l} is negative")
        return math.pi * math.factorial(k - 2) * math.factorial(l) / (
            2.0 ** (k - 2) * order * math.factorial(order * m + k // 2 - 1))

    def lemma_disc_integral(self, a: int, b: int, k: int, beta: float,
                            order: Optional[int] = None) -> Tuple[float, complex]:
        """Integral over the disc of w^a conj(w)^b (1 - |w|^2)^{k-2} 4 / (4 beta)^k dA.

        Returns (closed form, quadrature); the closed form is 4 pi (k-2)! a! / ((4 beta)^k (a+k-1)!)
        on the diagonal and 0 off it.
        """
        closed = 0.0
        if a == b:
            closed = 4.0 * math.pi * math.factorial(k - 2) * math.factorial(a) / (
                (4.0 * beta) ** k * math.factorial(a + k - 1))
        numeric, _ = self.mu_integrate(self._disc_integrand(a, b, k, beta), Domain.disc(), order)
        return closed, numeric

    def lemma_sector_integral(self, m: int, l: int, k: int, beta: float, order_N: int,
                              order: Optional[int] = None) -> Tuple[float, complex]:
        """Sector variant with exponents N m - k/2 and N l - k/2 over the sector of angle 2 pi / N about pi."""
        a, b = order_N * m - k // 2, order_N * l - k // 2
        if a < 0 or b < 0:
            raise InvalidInputError(f"Exponents {a}, {b} must be nonnegative")
        closed = 0.0
        if m == l:
            closed = 4.0 * math.pi * math.factorial(k - 2) * math.factorial(a) / (
                order_N * (4.0 * beta) ** k * math.factorial(order_N * m + k // 2 - 1))
        numeric, _ = self.mu_integrate(self._disc_integrand(a, b, k, beta), Domain.sector(order_N), order)
        return closed, numeric

    @staticmethod
    def _disc_integrand(a: int, b: int, k: int, beta: float) -> Integrand:
        def F(w):
            return w ** a * np.conj(w) ** b * (1.0 - np.abs(w) ** 2) ** k / (4.0 * beta) ** k
        return F

    @staticmethod
    def mean_value_constant(r: float, k: int) -> float:
        """C_{r,k} = 2^{3-k} pi (1 - (1 - R^2)^{k/2-1}) / (k - 2), R = tanh(r/2); -pi log(1 - R^2) for k = 2."""
        R = math.tanh(r / 2.0)
        if k == 2:
            return -math.pi * math.log(1.0 - R * R)
        return 2.0 ** (3 - k) * math.pi * (1.0 - (1.0 - R * R) ** (k // 2 - 1)) / (k - 2)

    def ball_integral(self, f: Integrand, k: int, z: complex, r: float, order: Optional[int] = None) -> complex:
        """Integral over B(z, r) of f(w) Im(w)^{k/2} |w - conj z|^{-k} dmu(w)."""
        y_min = config_loader.get_numeric("forms", "y_min", 0.05)
        lowest = z.imag * math.exp(-r)
        if lowest < y_min:
            raise DomainError(config_loader.get_message("errors", "below_y_min", z=z, y=lowest, y_min=y_min))

        def integrand(w):
            return f(w) * w.imag ** (k / 2) / np.abs(w - np.conj(z)) ** k

        value, _ = self.mu_integrate(integrand, Domain.ball(z, r), order)
        return value

    def mean_value_check(self, f: Integrand, k: int, z: complex, r: float, order: Optional[int] = None) -> float:
        """|y^{-k/2} f(z) - (1/C_{r,k}) integral over B(z, r) of f(w) Im(w)^{k/2} |w - conj z|^{-k} dmu(w)|."""
        if k < 2 or k % 2:
            raise InvalidInputError(config_loader.get_message("errors", "bad_weight", minimum=2, weight=k))
        z = complex(z)
        moebius_service.check_upper_half_plane(z)
        integral = self.ball_integral(f, k, z, r, order)
        expected = z.imag ** (-k / 2) * complex(np.asarray(f(np.array([z])))[0])
        residual = abs(expected - integral / self.mean_value_constant(r, k))
        logger.debug(f"[QUAD] Mean value at {z}, r={r}, k={k}: residual {residual:.3e}")
        return residual

    def annulus_unfolded_inner(self, f, k: int, datum: HyperbolicDatum, m: int,
                               order: Optional[int] = None) -> complex:
        """Integral over 1 <= |w| < xi^2 of (f|_k sigma_eta)(w) conj(w^{-k/2 + pi i m / log xi}) Im(w)^k dmu.

        Equals b_eta(m) times 2 log xi I_{-2 pi m / log xi, k-2}.
        """
        exponent = -k / 2 + 1j * math.pi * m / datum.log_xi

        def integrand(w):
            slashed = moebius_service.slash_eval(f, k, datum.sigma, w)
            return slashed * np.conj(np.exp(exponent * np.log(w))) * w.imag ** k

        value, error = self.mu_integrate(integrand, Domain.annulus(datum.xi), order)
        logger.debug(f"[QUAD] Annulus integral m={m}: {value} (error {error:.2e})")
        return value

    @staticmethod
    def chowla_selberg_delta_i() -> float:
        """-(4 pi)^{-6} (Gamma(1/4) / Gamma(3/4))^12, the leading elliptic coefficient of Delta at i."""
        with mpmath.workdps(30):
            value = -(4 * mpmath.pi) ** -6 * (mpmath.gamma(mpmath.mpf(1) / 4) / mpmath.gamma(mpmath.mpf(3) / 4)) ** 12
        return float(value)


quadrature_service = QuadratureService()

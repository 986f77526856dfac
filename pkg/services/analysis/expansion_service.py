import math
import time
from typing import Callable, Optional

import numpy as np
from scipy.special import comb

from config.config_loader import config_loader
from config.logging_config import (get_logger, log_error_with_context, log_function_entry,
                                   log_function_exit, log_performance)
from models.domain.expansion_coeffs import ExpansionCoeffs
from models.domain.fixed_point import EllipticDatum, HyperbolicDatum, ParabolicDatum
from services.arithmetic.moebius_service import moebius_service
from services.exceptions import DomainError, InvalidInputError, ToleranceError

logger = get_logger(__name__)

Evaluator = Callable


def exponential(m: float) -> Evaluator:
    """z -> e^{2 pi i m z}."""
    return lambda z: np.exp(2j * math.pi * m * np.asarray(z, dtype=complex))


class ExpansionService:
    """Expansion operators A and their inverses, and coefficient extraction at cusps, geodesics and points."""

    def __init__(self):
        self.min_nodes = config_loader.get_numeric("expansions", "min_nodes", 64)
        self.node_factor = config_loader.get_numeric("expansions", "node_factor", 8)
        self.contour_radius = config_loader.get_numeric("expansions", "contour_radius", 0.5)
        self.hyperbolic_window = config_loader.get_numeric("expansions", "hyperbolic_window", 8)
        self.parabolic_y_sample = config_loader.get_numeric("expansions", "parabolic_y_sample", 0.1)
        self.hyperbolic_sample_ratio = config_loader.get_numeric("expansions", "hyperbolic_sample_ratio", 0.25)

    def node_count(self, m_max: int, k: Optional[int] = None, y_sample: Optional[float] = None) -> int:
        """Node count K for DFT extraction up to m_max.

        With a weight and a sample height, K also grows until the aliased majorant
        (K + m_max)^k e^{-2 pi K y} drops below ``expansions.alias_tolerance``.
        """
        nodes = max(self.min_nodes, self.node_factor * m_max)
        if k is None or y_sample is None or y_sample <= 0:
            return nodes
        log_tol = math.log(config_loader.get_numeric("expansions", "alias_tolerance", 1e-14))
        cap = config_loader.get_numeric("expansions", "max_nodes", 1 << 16)
        while k * math.log(nodes + m_max) - 2 * math.pi * nodes * y_sample > log_tol:
            nodes += 1
            if nodes > cap:
                raise ToleranceError(f"Aliasing at Im z = {y_sample:.4g} needs more than {cap} nodes",
                                     achieved=float(nodes))
        return nodes

    # ------------------------------------------------------------------ operators

    @staticmethod
    def _strip_check(z, upper: float) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if np.any(z.imag <= 0) or np.any(z.imag >= upper):
            raise DomainError(f"Points must satisfy 0 < Im z < {upper:.6g}")
        return z

    def op_A_parabolic(self, f: Evaluator, k: int, datum: ParabolicDatum) -> Evaluator:
        """A f = f|_k sigma_a."""
        def A(z):
            return moebius_service.slash_eval(f, k, datum.sigma, z)
        return A

    def op_A_hyperbolic(self, f: Evaluator, k: int, datum: HyperbolicDatum) -> Evaluator:
        """A f(z) = xi^{kz} (f|_k sigma_eta)(xi^{2z}) on the strip 0 < Im z < pi / (2 log xi)."""
        log_xi, height = datum.log_xi, datum.strip_height

        def A(z):
            z = self._strip_check(z, height)
            w = np.exp(2.0 * log_xi * z)
            return np.exp(k * log_xi * z) * moebius_service.slash_eval(f, k, datum.sigma, w)
        return A

    def op_A_elliptic(self, f: Evaluator, k: int, datum: EllipticDatum) -> Evaluator:
        """A f(z) = w^{k/2} (f|_k sigma_z0)(w) with w = e^{2 pi i z / N}."""
        def A(z):
            z = self._strip_check(z, math.inf)
            w = np.exp(2j * math.pi * z / datum.order)
            return w ** (k // 2) * moebius_service.slash_eval(f, k, datum.sigma, w, domain_check=False)
        return A

    def op_A_parabolic_inverse(self, g: Evaluator, k: int, datum: ParabolicDatum) -> Evaluator:
        """A^-1 g = g|_k sigma_a^-1, a function on H."""
        def inverse(z):
            return moebius_service.slash_eval(g, k, datum.sigma_inv, z)
        return inverse

    def op_A_hyperbolic_inverse(self, g: Evaluator, k: int, datum: HyperbolicDatum) -> Evaluator:
        """(w -> w^{-k/2} g(log w / (2 log xi))) |_k sigma_eta^-1, a function on H."""
        log_xi = datum.log_xi

        def on_half_plane(w):
            w = np.asarray(w, dtype=complex)
            log_w = np.log(w)
            return np.exp(-(k / 2) * log_w) * g(log_w / (2.0 * log_xi))

        def inverse(z):
            return moebius_service.slash_eval(on_half_plane, k, datum.sigma_inv, z)
        return inverse

    def op_A_elliptic_inverse(self, g: Evaluator, k: int, datum: EllipticDatum) -> Evaluator:
        """(w -> w^{-k/2} g(N log w / (2 pi i))) |_k sigma_z0^-1, a function on H."""
        order = datum.order

        def on_disc(w):
            w = np.asarray(w, dtype=complex)
            return w ** -(k // 2) * g(order * np.log(w) / (2j * math.pi))

        def inverse(z):
            return moebius_service.slash_eval(on_disc, k, datum.sigma_inv, z)
        return inverse

    # ------------------------------------------------------------------ extraction

    def _fourier_modes(self, A: Evaluator, y_sample: float, nodes: int) -> np.ndarray:
        """(1/K) sum_j A(x_j + i y) e^{-2 pi i m x_j} for every m mod K."""
        x = np.arange(nodes) / nodes
        return np.fft.fft(A(x + 1j * y_sample)) / nodes

    def parabolic_coeffs(self, f: Evaluator, k: int, datum: ParabolicDatum, m_max: int,
                         y_sample: Optional[float] = None, nodes: Optional[int] = None) -> ExpansionCoeffs:
        """b_a(m), 1 <= m <= m_max, from the discrete Fourier transform of A_a f along Im z = y.

        Args:
            f: form of weight k, evaluable at sigma_a(x + i y)
            datum: cusp data
            m_max: largest index
            y_sample: sample height, above y_min
            nodes: node count K; defaults to node_count(m_max, k, y_sample)

        Returns:
            ExpansionCoeffs with meta ``nonpositive_max`` = max |b(m)| over -m_max < m <= 0
        """
        start_time = time.time()
        y_sample = self.parabolic_y_sample if y_sample is None else y_sample
        nodes = nodes or self.node_count(m_max, k, y_sample)
        y_min = config_loader.get_numeric("forms", "y_min", 0.05)
        log_function_entry(logger, "parabolic_coeffs", m_max=m_max, y_sample=y_sample, nodes=nodes)
        if m_max < 1:
            raise InvalidInputError(f"m_max must be positive, got {m_max}")
        if y_sample <= y_min:
            raise DomainError(config_loader.get_message(
                "errors", "below_y_min", z=complex(0, y_sample), y=y_sample, y_min=y_min))
        if nodes < 4 * m_max:
            raise ToleranceError(f"{nodes} nodes cannot resolve {m_max} modes", achieved=float(nodes))
        try:
            modes = self._fourier_modes(self.op_A_parabolic(f, k, datum), y_sample, nodes)
        except Exception as e:
            log_error_with_context(logger, e, "parabolic_coeffs", y_sample=y_sample)
            raise
        m = np.arange(1, m_max + 1)
        values = modes[m] * np.exp(2.0 * math.pi * m * y_sample)
        nonpositive = np.arange(-m_max + 1, 1)
        nonpositive_max = float(np.max(np.abs(modes[nonpositive % nodes] * np.exp(2.0 * math.pi * nonpositive * y_sample))))
        meta = {"y_sample": y_sample, "nodes": nodes, "nonpositive_max": nonpositive_max,
                "aliasing_scale": math.exp(-2.0 * math.pi * nodes * y_sample)}
        duration = time.time() - start_time
        log_performance(logger, "parabolic_coeffs", duration, m_max=m_max, nodes=nodes)
        log_function_exit(logger, "parabolic_coeffs", duration=duration)
        return ExpansionCoeffs("par", datum, k, m, values, meta)

    def hyperbolic_coeffs(self, f: Evaluator, k: int, datum: HyperbolicDatum, m_window: Optional[int] = None,
                          y_sample: Optional[float] = None, nodes: Optional[int] = None) -> ExpansionCoeffs:
        """b_eta(m), |m| <= m_window, of (f|sigma_eta)(w) = sum b(m) w^{-k/2 + pi i m / log xi}."""
        start_time = time.time()
        m_window = self.hyperbolic_window if m_window is None else m_window
        height = datum.strip_height
        y_sample = self.hyperbolic_sample_ratio * height if y_sample is None else y_sample
        nodes = nodes or self.node_count(2 * m_window + 1)
        log_function_entry(logger, "hyperbolic_coeffs", m_window=m_window, y_sample=y_sample, nodes=nodes)
        if not 0 < y_sample < height:
            raise DomainError(f"Sample height {y_sample} outside the strip (0, {height:.6g})")
        if nodes < 2 * (2 * m_window + 1):
            raise ToleranceError(f"{nodes} nodes cannot resolve the window {m_window}", achieved=float(nodes))
        modes = self._fourier_modes(self.op_A_hyperbolic(f, k, datum), y_sample, nodes)
        m = np.arange(-m_window, m_window + 1)
        values = modes[m % nodes] * np.exp(2.0 * math.pi * m * y_sample)
        meta = {"y_sample": y_sample, "nodes": nodes, "strip_height": height}
        log_performance(logger, "hyperbolic_coeffs", time.time() - start_time, m_window=m_window)
        return ExpansionCoeffs("hyp", datum, k, m, values, meta)

    def elliptic_coeffs_taylor(self, f, k: int, datum: EllipticDatum, m_max: int) -> ExpansionCoeffs:
        """c(m) = sum_r binom(m+k-1, r+k-1) (z0 - conj z0)^{r+k/2} f^{(r)}(z0) / r!.

        ``f`` must provide ``derivative(r, z)``.
        """
        start_time = time.time()
        cap = config_loader.get_numeric("forms", "derivative_cap", 40)
        if m_max > cap:
            raise ToleranceError(f"m_max = {m_max} exceeds the derivative cap {cap}", achieved=float(m_max))
        z0 = datum.z0
        two_i_beta = z0 - z0.conjugate()
        derivatives = [complex(f.derivative(r, z0)) / math.factorial(r) for r in range(m_max + 1)]
        values = []
        for m in range(m_max + 1):
            total = 0j
            for r in range(m + 1):
                total += comb(m + k - 1, r + k - 1, exact=True) * two_i_beta ** (r + k // 2) * derivatives[r]
            values.append(total)
        meta = {"method": "taylor"}
        log_performance(logger, "elliptic_coeffs_taylor", time.time() - start_time, m_max=m_max)
        return ExpansionCoeffs("ell", datum, k, np.arange(m_max + 1), np.array(values, dtype=complex), meta)

    def elliptic_coeffs_contour(self, f: Evaluator, k: int, datum: EllipticDatum, m_max: int,
                                radius: Optional[float] = None, nodes: Optional[int] = None) -> ExpansionCoeffs:
        """c(m) = r^{-m} (1/K) sum_j (f|_k sigma_z0)(r e^{i theta_j}) e^{-i m theta_j}."""
        start_time = time.time()
        radius = self.contour_radius if radius is None else radius
        nodes = nodes or self.node_count(m_max)
        if not 0 < radius < 1:
            raise DomainError(f"Contour radius must lie in (0, 1), got {radius}")
        y_min = config_loader.get_numeric("forms", "y_min", 0.05)
        lowest = datum.beta * (1.0 - radius) / (1.0 + radius)
        if lowest < y_min:
            e = DomainError(config_loader.get_message(
                "errors", "below_y_min", z=datum.z0, y=lowest, y_min=y_min))
            log_error_with_context(logger, e, "elliptic_coeffs_contour", radius=radius)
            raise e
        w = radius * np.exp(2j * math.pi * np.arange(nodes) / nodes)
        samples = moebius_service.slash_eval(f, k, datum.sigma, w, domain_check=False)
        spectrum = np.fft.fft(samples) / nodes
        m = np.arange(m_max + 1)
        values = spectrum[m] / radius ** m
        meta = {"method": "contour", "radius": radius, "nodes": nodes}
        log_performance(logger, "elliptic_coeffs_contour", time.time() - start_time, m_max=m_max, nodes=nodes)
        return ExpansionCoeffs("ell", datum, k, m, values, meta)

    @staticmethod
    def reconstruct_hyperbolic(coeffs: ExpansionCoeffs, w) -> complex:
        """sum_m b(m) w^{-k/2 + pi i m / log xi} with the principal logarithm (w in H)."""
        log_w = np.log(np.asarray(w, dtype=complex))
        exponents = -coeffs.weight / 2 + 1j * math.pi * coeffs.indices / coeffs.datum.log_xi
        terms = coeffs.values * np.exp(np.multiply.outer(log_w, exponents))
        total = np.sum(terms, axis=-1)
        return complex(total) if np.ndim(w) == 0 else total


expansion_service = ExpansionService()

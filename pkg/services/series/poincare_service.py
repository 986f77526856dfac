import math
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.special import gammaln, hyp0f1

from config.config_loader import config_loader
from config.logging_config import (get_logger, log_error_with_context, log_function_entry,
                                   log_function_exit, log_performance)
from models.domain.coset import CosetList
from models.domain.fixed_point import EllipticDatum, FixedPointDatum, HyperbolicDatum, ParabolicDatum
from models.domain.group import ArithmeticGroup
from models.domain.group_element import GroupElement
from services.analysis.expansion_service import expansion_service, exponential
from services.arithmetic.coset_service import coset_service
from services.arithmetic.moebius_service import moebius_service
from services.exceptions import InvalidInputError, SideConditionError, ToleranceError

logger = get_logger(__name__)

# reps x points evaluated per block
BLOCK_SIZE = 2_000_000

TRANSLATION = GroupElement(1, 1, 0, 1)


@dataclass(frozen=True, eq=False)
class SeedFunction:
    """Seed phi of a relative Poincare series, invariant under the stabilizer of its datum."""

    evaluator: Callable
    datum: Optional[FixedPointDatum]
    tag: str
    m: Optional[float]
    weight: int

    def __call__(self, z):
        return self.evaluator(z)

    @property
    def stabilizer_generator(self) -> Optional[GroupElement]:
        if isinstance(self.datum, EllipticDatum):
            return self.datum.epsilon
        return None if self.datum is None else self.datum.generator

    def invariance_residual(self, points: Sequence[complex]) -> float:
        """max |(phi|_k g)(z) - phi(z)| / max |phi(z)| for the stabilizer generator g."""
        g = self.stabilizer_generator
        if g is None:
            return 0.0
        z = np.asarray(points, dtype=complex)
        base = self.evaluator(z)
        moved = moebius_service.slash_eval(self.evaluator, self.weight, g, z)
        scale = max(float(np.max(np.abs(base))), 1e-300)
        return float(np.max(np.abs(moved - base))) / scale


def _scaled_bessel(nu: int, s: np.ndarray) -> np.ndarray:
    """sum_j (-s)^j / (j! (j + nu)!), i.e. J_nu(2 sqrt s) / s^{nu/2} for s > 0 and I_nu for s < 0."""
    return hyp0f1(nu + 1, -s) / math.factorial(nu)


@dataclass(eq=False)
class TranslateFamilies:
    """Closed-form sums over the right translates g T^n of parabolic double-coset reps g.

    For sigma^-1 g = (A, B; C, D) with C != 0,
    sum_n e(m sigma^-1 g (z + n)) j(sigma^-1 g, z + n)^-k = sum_{l >= 1} beta(l) e(l z) with
    beta(l) = e(m A/C + l D/C) C^-k (-2 pi i)^k l^{k-1} sum_j (-4 pi^2 m l / C^2)^j / (j! (j + k - 1)!).
    Every family is exactly 1-periodic; the coefficients of all families are summed once
    (weighted by the twists) and the result is a polynomial in q.
    """

    m: int
    k: int
    phase: np.ndarray
    d_over_c: np.ndarray
    c: np.ndarray
    weights: np.ndarray
    outer: np.ndarray
    _coeffs: Optional[np.ndarray] = field(default=None, repr=False)
    _outer_coeffs: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def build(cls, m: int, k: int, matrices: Sequence[GroupElement], weights: np.ndarray,
              outer: np.ndarray) -> "TranslateFamilies":
        """Families for the real matrices sigma^-1 g, all with C != 0."""
        a = np.array([complex(g.a).real for g in matrices], dtype=float)
        c = np.array([complex(g.c).real for g in matrices], dtype=float)
        d = np.array([complex(g.d).real for g in matrices], dtype=float)
        return cls(m, k, np.mod(m * a / c, 1.0), np.mod(d / c, 1.0), c,
                   np.asarray(weights, dtype=complex), np.asarray(outer, dtype=bool))

    def __len__(self) -> int:
        return len(self.c)

    @property
    def norm(self) -> float:
        """sum |weight| |C|^-k, the size of the coefficient majorant."""
        if not len(self.c):
            return 0.0
        return float(np.sum(np.abs(self.weights) * np.abs(self.c) ** -float(self.k)))

    def fourier_terms(self, y_low: float) -> int:
        """Smallest l_max with the coefficient majorant beyond it below the tolerance at Im z = y_low.

        Raises:
            ToleranceError: more than ``poincare.max_fourier_terms`` terms would be needed
        """
        norm = self.norm
        if norm == 0.0:
            return 0
        tol = config_loader.get_numeric("poincare", "fourier_tolerance", 1e-16)
        cap = config_loader.get_numeric("poincare", "max_fourier_terms", 20000)
        l = np.arange(1, cap + 1, dtype=float)
        k = self.k
        decay = 2 * math.pi * y_low
        log_term = (math.log(norm) + k * math.log(2 * math.pi) + (k - 1) * np.log(l) - gammaln(k)
                    - decay * l - math.log(-math.expm1(-decay)))
        if self.m < 0:
            s = 4 * math.pi ** 2 * abs(self.m) * l / float(np.min(self.c ** 2))
            with np.errstate(over="ignore"):
                log_term = log_term + np.log(hyp0f1(k, s))
        above = np.nonzero(log_term > math.log(tol))[0]
        if not above.size:
            return 1
        if above[-1] == cap - 1:
            raise ToleranceError(config_loader.get_message(
                "errors", "tolerance", detail=f"Fourier sum at Im z = {y_low:.4g} needs more than {cap} terms",
                achieved=float(np.exp(log_term[-1]))), achieved=float(np.exp(log_term[-1])))
        return int(above[-1]) + 2

    def coefficients(self, l_max: int) -> Tuple[np.ndarray, np.ndarray]:
        """(b(0..l_max), outer-shell part) with b(l) = sum over families of weight * beta(l)."""
        if self._coeffs is not None and len(self._coeffs) > l_max:
            return self._coeffs[: l_max + 1], self._outer_coeffs[: l_max + 1]
        start_time = time.time()
        k = self.k
        l = np.arange(1, l_max + 1, dtype=float)
        coeffs = np.zeros(l_max + 1, dtype=complex)
        outer = np.zeros(l_max + 1, dtype=complex)
        if len(self.c) and l_max:
            squares, inverse = np.unique(self.c ** 2, return_inverse=True)
            bessel = _scaled_bessel(k - 1, 4 * math.pi ** 2 * self.m * l[None, :] / squares[:, None])
            scale = self.weights * self.c ** -float(k)
            chunk = max(1, BLOCK_SIZE // l_max)
            for start in range(0, len(self.c), chunk):
                block = slice(start, start + chunk)
                turns = self.phase[block, None] + l[None, :] * self.d_over_c[block, None]
                terms = scale[block, None] * bessel[inverse[block]] * np.exp(2j * math.pi * turns)
                coeffs[1:] += terms.sum(axis=0)
                outer[1:] += terms[self.outer[block]].sum(axis=0)
            prefactor = (2 * math.pi) ** k * (-1) ** (k // 2) * l ** (k - 1)
            coeffs[1:] *= prefactor
            outer[1:] *= prefactor
        self._coeffs, self._outer_coeffs = coeffs, outer
        logger.debug(f"[SERIES] Fourier coefficients of {len(self.c)} translate families up to l = {l_max} "
                     f"in {time.time() - start_time:.3f}s")
        return coeffs, outer

    def evaluate(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(sum of all families, sum of the outer-shell families) at the points z."""
        if not len(self.c) or not z.size:
            return np.zeros(z.shape, dtype=complex), np.zeros(z.shape, dtype=complex)
        coeffs, outer = self.coefficients(self.fourier_terms(float(np.min(z.imag))))
        q = np.exp(2j * math.pi * z)
        return P.polyval(q, coeffs), P.polyval(q, outer)


@dataclass(eq=False)
class PoincareSeries:
    """Truncated sum over coset reps of L(gamma) (phi|_k gamma)(z); L = 1 when ``hom`` is None.

    Reps flagged in ``direct`` are summed term by term; the others are parabolic double-coset
    reps whose translate families are summed in closed form by ``families``.
    """

    seed: SeedFunction
    cosets: CosetList
    hom: Optional[object] = None
    reps: Tuple[GroupElement, ...] = field(default=(), repr=False)
    shells: np.ndarray = field(default=None, repr=False)
    twists: Optional[np.ndarray] = field(default=None, repr=False)
    families: Optional[TranslateFamilies] = field(default=None, repr=False)
    direct: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def weight(self) -> int:
        return self.seed.weight

    @property
    def max_shell(self) -> float:
        return float(self.shells.max()) if self.reps else 0.0

    def _direct_sum(self, flat: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        total = np.zeros(flat.shape, dtype=complex)
        last = np.zeros(flat.shape, dtype=complex)
        selected = np.ones(len(self.reps), dtype=bool) if self.direct is None else self.direct
        if not np.any(selected):
            return total, last
        reps = [g for g, keep in zip(self.reps, selected) if keep]
        a, b, c, d = (np.array([float(g.entries[i]) for g in reps])[:, None] for i in range(4))
        outer = (self.shells == self.shells.max())[selected]
        twists = None if self.twists is None else self.twists[selected]
        chunk = max(1, BLOCK_SIZE // len(reps))
        for start in range(0, flat.size, chunk):
            pts = flat[start:start + chunk][None, :]
            jfactor = c * pts + d
            terms = self.seed((a * pts + b) / jfactor) / jfactor ** self.weight
            if twists is not None:
                terms = terms * twists[:, None]
            total[start:start + chunk] = np.sum(terms, axis=0)
            last[start:start + chunk] = np.sum(terms[outer], axis=0)
        return total, last

    def evaluate(self, z) -> Tuple[object, float]:
        """(value, last-shell magnitude) at a point or an array of points."""
        start_time = time.time()
        z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
        moebius_service.check_upper_half_plane(z_arr)
        flat = z_arr.ravel()
        total, last = self._direct_sum(flat)
        if self.families is not None:
            value, outer = self.families.evaluate(flat)
            total, last = total + value, last + outer
        last_shell = float(np.max(np.abs(last))) if last.size else 0.0
        logger.debug(f"[SERIES] {self.seed.tag} m={self.seed.m}: {len(self.reps)} reps at {flat.size} points "
                     f"in {time.time() - start_time:.3f}s, last shell {last_shell:.2e}")
        value = total.reshape(z_arr.shape)
        return (complex(value[0]) if np.ndim(z) == 0 else value), last_shell

    def __call__(self, z):
        return self.evaluate(z)[0]


class PoincareService:
    """Relative Poincare series P[phi] and P[phi, L] and the seeds of the three families."""

    def __init__(self):
        self.stabilizer_tolerance = config_loader.get_numeric("secondorder", "stabilizer_tolerance", 1e-8)

    @staticmethod
    def _check_weight(k: int) -> None:
        if k < 4 or k % 2:
            raise InvalidInputError(config_loader.get_message("errors", "bad_weight", minimum=4, weight=k))

    # ------------------------------------------------------------------ seeds

    def phi_par(self, m: int, k: int, datum: ParabolicDatum) -> SeedFunction:
        """(A_a^-1 e(m .)) = e(m sigma^-1 z) j(sigma^-1, z)^-k."""
        self._check_weight(k)
        return SeedFunction(expansion_service.op_A_parabolic_inverse(exponential(m), k, datum),
                            datum, "parabolic", m, k)

    def phi_hyp(self, m: int, k: int, datum: HyperbolicDatum) -> SeedFunction:
        """(sigma^-1 z)^{-k/2 + pi i m / log xi} j(sigma^-1, z)^-k."""
        self._check_weight(k)
        return SeedFunction(expansion_service.op_A_hyperbolic_inverse(exponential(m), k, datum),
                            datum, "hyperbolic", m, k)

    def phi_ell(self, m: int, k: int, datum: EllipticDatum) -> SeedFunction:
        """(2 i beta)^{k/2} (sigma^-1 z)^{N m - k/2} j(sigma^-1, z)^-k; needs N m - k/2 >= 0."""
        self._check_weight(k)
        if datum.order * m - k // 2 < 0:
            raise SideConditionError(config_loader.get_message(
                "errors", "side_condition", detail=f"N m - k/2 = {datum.order * m - k // 2} < 0"))
        return SeedFunction(expansion_service.op_A_elliptic_inverse(exponential(m), k, datum),
                            datum, "elliptic", m, k)

    # ------------------------------------------------------------------ series

    def _prepare(self, seed: SeedFunction, cosets: CosetList) -> Tuple[Tuple[GroupElement, ...], np.ndarray]:
        if seed.tag != cosets.stabilizer_tag:
            e = InvalidInputError(config_loader.get_message(
                "errors", "stabilizer_mismatch", found=cosets.stabilizer_tag, expected=seed.tag))
            log_error_with_context(logger, e, "PoincareService._prepare", cosets=repr(cosets))
            raise e
        reps = tuple(cosets.reps)
        if seed.tag == "parabolic":
            shells = np.array([abs(coset_service.parabolic_row(g, seed.datum)[0]) for g in reps])
        else:
            shells = np.array([g.max_abs_entry for g in reps])
        return reps, shells

    def _translate_families(self, seed: SeedFunction, reps: Tuple[GroupElement, ...], shells: np.ndarray,
                            twists: Optional[np.ndarray]) -> Tuple[TranslateFamilies, np.ndarray]:
        """Split parabolic double-coset reps into closed-form families (C != 0) and single terms."""
        matrices = [seed.datum.sigma_inv @ g for g in reps]
        direct = np.array([abs(complex(h.c)) < 1e-12 for h in matrices], dtype=bool)
        keep = ~direct
        weights = np.ones(int(keep.sum()), dtype=complex) if twists is None else twists[keep]
        families = TranslateFamilies.build(int(seed.m), seed.weight, [h for h, k in zip(matrices, keep) if k],
                                           weights, (shells == shells.max())[keep])
        return families, direct

    def series(self, seed: SeedFunction, cosets: CosetList, hom=None) -> PoincareSeries:
        """Bind a seed to a coset list (and optionally a homomorphism) for repeated evaluation."""
        start_time = time.time()
        reps, shells = self._prepare(seed, cosets)
        twists = None
        if hom is not None:
            self._check_stabilizer(seed, hom)
            if seed.tag == "parabolic":
                self._check_translation(hom)
            twists = np.asarray(hom.values(reps), dtype=complex)
        families, direct = None, None
        if seed.tag == "parabolic" and reps:
            families, direct = self._translate_families(seed, reps, shells, twists)
        log_performance(logger, "poincare_series", time.time() - start_time, tag=seed.tag, terms=len(reps))
        return PoincareSeries(seed, cosets, hom, reps, shells, twists, families, direct)

    def _check_translation(self, hom) -> None:
        """The translate families carry one twist each, which needs L(T) = 0."""
        value = abs(hom(TRANSLATION))
        if value > self.stabilizer_tolerance:
            e = SideConditionError(config_loader.get_message(
                "errors", "side_condition", detail=f"|L(T)| = {value:.3e} on the translation"))
            log_error_with_context(logger, e, "PoincareService._check_translation")
            raise e

    def _check_stabilizer(self, seed: SeedFunction, hom) -> None:
        g = seed.stabilizer_generator
        if g is None:
            return
        value = abs(hom(g))
        if value > self.stabilizer_tolerance:
            e = SideConditionError(config_loader.get_message(
                "errors", "side_condition", detail=f"|L({g})| = {value:.3e} on the stabilizer"))
            log_error_with_context(logger, e, "PoincareService._check_stabilizer", tag=seed.tag)
            raise e

    def relative_poincare(self, seed: SeedFunction, cosets: CosetList, k: int, z) -> Tuple[object, float]:
        """P[phi](z) = sum over Gamma_0 \\ Gamma of (phi|_k gamma)(z), truncated to the coset list.

        Args:
            seed: stabilizer-invariant seed of weight k
            cosets: coset list built for the seed's stabilizer
            k: even weight >= 4
            z: point or array of points of H

        Returns:
            (value, magnitude of the outermost shell of terms)
        """
        self._check_weight(k)
        if seed.weight != k:
            raise InvalidInputError(f"Seed weight {seed.weight} differs from k = {k}")
        log_function_entry(logger, "relative_poincare", tag=seed.tag, m=seed.m, reps=len(cosets))
        result = self.series(seed, cosets).evaluate(z)
        log_function_exit(logger, "relative_poincare", result=f"last shell {result[1]:.2e}")
        return result

    def relative_poincare_twisted(self, seed: SeedFunction, hom, cosets: CosetList, k: int, z) -> Tuple[object, float]:
        """P[phi, L](z) = sum of L(gamma) (phi|_k gamma)(z); L must vanish on the stabilizer."""
        self._check_weight(k)
        if seed.weight != k:
            raise InvalidInputError(f"Seed weight {seed.weight} differs from k = {k}")
        log_function_entry(logger, "relative_poincare_twisted", tag=seed.tag, m=seed.m, reps=len(cosets))
        result = self.series(seed, cosets, hom).evaluate(z)
        log_function_exit(logger, "relative_poincare_twisted", result=f"last shell {result[1]:.2e}")
        return result

    def phi_elliptic_star(self, z, l: int, k: int, datum: EllipticDatum, group: ArithmeticGroup,
                          bound: Optional[int] = None, cosets: Optional[CosetList] = None) -> object:
        """Sum of ((w -> w^l)|_k sigma^-1)|_k gamma over the whole ball, without elliptic deduplication.

        Equals N Phi_Ell(., (l + k/2)/N) when l = -k/2 mod N and vanishes otherwise.
        """
        self._check_weight(k)
        if l < 0:
            raise InvalidInputError(f"l must be nonnegative, got {l}")
        cosets = cosets or coset_service.full_ball(group, bound)

        def star(z_inner):
            return moebius_service.slash_eval(lambda u: u ** l, k, datum.sigma_inv, z_inner)

        seed = SeedFunction(star, None, cosets.stabilizer_tag, l, k)
        value, _ = PoincareSeries(seed, cosets, None, *self._prepare(seed, cosets)).evaluate(z)
        return value

    # ------------------------------------------------------------------ families

    def parabolic_series(self, group: ArithmeticGroup, k: int, m: int, datum: ParabolicDatum = None,
                         c_max: int = None, hom=None) -> PoincareSeries:
        datum = datum or moebius_service.make_parabolic_datum(group)
        cosets = coset_service.cosets_parabolic(group, datum, c_max)
        return self.series(self.phi_par(m, k, datum), cosets, hom)

    def hyperbolic_series(self, group: ArithmeticGroup, k: int, m: int, datum: HyperbolicDatum,
                          entry_max: int = None, hom=None) -> PoincareSeries:
        cosets = coset_service.cosets_hyperbolic(group, datum, entry_max)
        return self.series(self.phi_hyp(m, k, datum), cosets, hom)

    def elliptic_series(self, group: ArithmeticGroup, k: int, m: int, datum: EllipticDatum,
                        entry_max: int = None, hom=None) -> PoincareSeries:
        cosets = coset_service.cosets_elliptic(group, datum, entry_max)
        return self.series(self.phi_ell(m, k, datum), cosets, hom)

    @staticmethod
    def modularity_residual(f: Callable, k: int, gammas: List[GroupElement], points: Sequence[complex]) -> float:
        """max |f|_k(gamma - 1)(z)| / max |f(z)| over the given elements and points."""
        z = np.asarray(points, dtype=complex)
        base = f(z)
        scale = max(float(np.max(np.abs(base))), 1e-300)
        worst = 0.0
        for g in gammas:
            moved = moebius_service.slash_eval(f, k, g, z)
            worst = max(worst, float(np.max(np.abs(moved - base))))
        return worst / scale


poincare_service = PoincareService()

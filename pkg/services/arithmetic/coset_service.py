import math
import time
from math import gcd
from typing import List, Tuple

from config.config_loader import config_loader
from config.logging_config import get_logger, log_error_with_context, log_function_entry, log_performance
from models.domain.coset import CosetList
from models.domain.fixed_point import EllipticDatum, HyperbolicDatum, ParabolicDatum
from models.domain.group import ArithmeticGroup
from models.domain.group_element import INFINITY, GroupElement
from services.exceptions import InvalidInputError

logger = get_logger(__name__)


def extended_gcd(x: int, y: int) -> Tuple[int, int, int]:
    """Return (g, s, t) with s x + t y = g = gcd(x, y) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while y:
        q = x // y
        x, y = y, x - q * y
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if x < 0:
        x, s0, t0 = -x, -s0, -t0
    return x, s0, t0


class CosetService:
    """Truncated coset representatives Gamma_0 \\ Gamma for parabolic, hyperbolic and elliptic stabilizers."""

    def __init__(self):
        self.parabolic_c_max = config_loader.get_numeric("cosets", "parabolic_c_max", 24)
        self.entry_max = config_loader.get_numeric("cosets", "entry_max", 20)

    # ------------------------------------------------------------------ parabolic

    @staticmethod
    def _at_infinity(datum: ParabolicDatum) -> bool:
        return datum.cusp is INFINITY

    def parabolic_row(self, g: GroupElement, datum: ParabolicDatum) -> Tuple[int, int]:
        """Integer pair labelling the coset Gamma_a g: the bottom row at oo, the top row at 0."""
        return (g.c, g.d) if self._at_infinity(datum) else (g.a, g.b)

    def _complete_row(self, group: ArithmeticGroup, datum: ParabolicDatum, c: int, d: int) -> GroupElement:
        if self._at_infinity(datum):
            _, s, t = extended_gcd(d, c)
            return GroupElement(s, -t, c, d)
        # top row (c, d) = (a, b); need a x - b (N y) = 1
        _, s, t = extended_gcd(c, group.level * d)
        return GroupElement(c, d, -group.level * t, s)

    def cosets_parabolic(self, group: ArithmeticGroup, datum: ParabolicDatum, c_max: int = None) -> CosetList:
        """One representative per double coset Gamma_a \\ Gamma / Gamma_oo, i.e. per row (c, d mod c).

        Args:
            group: the arithmetic group
            datum: cusp data (oo, or 0 for Gamma0(N))
            c_max: largest row entry c

        Returns:
            CosetList whose first rep is the identity coset
        """
        start_time = time.time()
        c_max = self.parabolic_c_max if c_max is None else c_max
        log_function_entry(logger, "cosets_parabolic", group=group.tag, cusp=str(datum.cusp), c_max=c_max)
        if c_max < 0:
            raise InvalidInputError(f"c_max must be nonnegative, got {c_max}")
        reps: List[GroupElement] = [GroupElement.identity()]
        at_infinity = self._at_infinity(datum)
        for c in range(1, c_max + 1):
            if at_infinity and c % group.level:
                continue
            if not at_infinity and gcd(c, group.level) != 1:
                continue
            for d in range(c):
                if gcd(c, d) != 1 or (c == 1 and d != 0):
                    continue
                if not at_infinity and c == 1:
                    continue  # (1, 0) is the identity coset
                reps.append(self._complete_row(group, datum, c, d))
        result = CosetList(tuple(reps), "parabolic", c_max, group.tag)
        log_performance(logger, "cosets_parabolic", time.time() - start_time, reps=len(reps))
        return result

    def canonical_parabolic(self, g: GroupElement, datum: ParabolicDatum) -> Tuple[int, int]:
        c, d = self.parabolic_row(g, datum)
        if c < 0 or (c == 0 and d < 0):
            c, d = -c, -d
        return (0, 1) if c == 0 else (c, d % c)

    # ------------------------------------------------------------------ ball

    def ball(self, group: ArithmeticGroup, entry_max: int) -> List[GroupElement]:
        """All elements of the group with max |entry| <= entry_max, one per sign class, in a fixed order."""
        start_time = time.time()
        elements = {}
        for c in range(-entry_max, entry_max + 1):
            if c % group.level:
                continue
            for d in range(-entry_max, entry_max + 1):
                if gcd(c, d) != 1:
                    continue
                if c == 0:
                    for b in range(-entry_max, entry_max + 1):
                        g = GroupElement(d, b, 0, d)
                        elements.setdefault(g.key(), g.sign_normalized())
                    continue
                _, s, t = extended_gcd(d, c)
                a0, b0 = s, -t
                # a = a0 + n c, b = b0 + n d
                lo, hi = -math.inf, math.inf
                for base, step in ((a0, c), (b0, d)):
                    if step == 0:
                        if abs(base) > entry_max:
                            lo, hi = 1, 0
                        continue
                    bounds = sorted(((-entry_max - base) / step, (entry_max - base) / step))
                    lo, hi = max(lo, bounds[0]), min(hi, bounds[1])
                if lo > hi:
                    continue
                for n in range(math.ceil(lo), math.floor(hi) + 1):
                    g = GroupElement(a0 + n * c, b0 + n * d, c, d)
                    elements.setdefault(g.key(), g.sign_normalized())
        ordered = sorted(elements.values(), key=lambda g: (g.max_abs_entry, g.entries))
        log_performance(logger, "ball", time.time() - start_time, entry_max=entry_max, elements=len(ordered))
        return ordered

    # ------------------------------------------------------------------ hyperbolic

    def canonical_hyperbolic(self, g: GroupElement, datum: HyperbolicDatum, base_point: complex = 1j) -> GroupElement:
        """gamma_eta^n g with |sigma^-1 g (sigma base)| in [1, xi^2)."""
        w = datum.sigma_inv.act(g.act(datum.sigma.act(base_point)))
        shift = -math.floor(math.log(abs(w)) / (2.0 * datum.log_xi) + 1e-9)
        return ((datum.generator ** shift) @ g).sign_normalized()

    def cosets_hyperbolic(self, group: ArithmeticGroup, datum: HyperbolicDatum, entry_max: int = None,
                          base_point: complex = 1j) -> CosetList:
        start_time = time.time()
        entry_max = self.entry_max if entry_max is None else entry_max
        log_function_entry(logger, "cosets_hyperbolic", generator=str(datum.generator), entry_max=entry_max)
        if not group.contains(datum.generator):
            e = InvalidInputError(f"{datum.generator} is not an element of {group.tag}")
            log_error_with_context(logger, e, "cosets_hyperbolic", group=group.tag)
            raise e
        canonical = {}
        for g in self.ball(group, entry_max):
            rep = self.canonical_hyperbolic(g, datum, base_point)
            canonical.setdefault(rep.key(), rep)
        reps = sorted(canonical.values(), key=lambda g: (g.max_abs_entry, g.entries))
        result = CosetList(tuple(reps), "hyperbolic", entry_max, group.tag, base_point=base_point)
        log_performance(logger, "cosets_hyperbolic", time.time() - start_time, reps=len(reps))
        return result

    # ------------------------------------------------------------------ elliptic

    @staticmethod
    def canonical_elliptic(g: GroupElement, datum: EllipticDatum) -> GroupElement:
        """Lexicographically least of {epsilon^i g : 0 <= i < N} after sign normalization."""
        candidates = []
        current = g
        for _ in range(datum.order):
            candidates.append(current.sign_normalized())
            current = datum.epsilon @ current
        return min(candidates, key=lambda h: h.entries)

    def cosets_elliptic(self, group: ArithmeticGroup, datum: EllipticDatum, entry_max: int = None) -> CosetList:
        start_time = time.time()
        entry_max = self.entry_max if entry_max is None else entry_max
        log_function_entry(logger, "cosets_elliptic", z0=datum.z0, entry_max=entry_max)
        canonical = {}
        for g in self.ball(group, entry_max):
            rep = self.canonical_elliptic(g, datum)
            canonical.setdefault(rep.key(), rep)
        reps = sorted(canonical.values(), key=lambda g: (g.max_abs_entry, g.entries))
        result = CosetList(tuple(reps), "elliptic", entry_max, group.tag)
        log_performance(logger, "cosets_elliptic", time.time() - start_time, reps=len(reps))
        return result

    def full_ball(self, group: ArithmeticGroup, entry_max: int = None) -> CosetList:
        """The whole ball as a coset list with trivial stabilizer (used by the starred elliptic series)."""
        entry_max = self.entry_max if entry_max is None else entry_max
        return CosetList(tuple(self.ball(group, entry_max)), "trivial", entry_max, group.tag)


coset_service = CosetService()

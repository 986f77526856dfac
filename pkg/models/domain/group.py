from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List

from config.config_loader import config_loader
from services.exceptions import InvalidInputError

from .group_element import GroupElement


def _prime_factors(n: int) -> List[int]:
    primes, p = [], 2
    while p * p <= n:
        if n % p == 0:
            primes.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        primes.append(n)
    return primes


def _euler_phi(n: int) -> int:
    result = n
    for p in _prime_factors(n):
        result -= result // p
    return result


def _kronecker_minus(d: int, p: int) -> int:
    """Legendre-type symbol (d/p) for d in {-1, -3}, as used in the elliptic point counts."""
    if p == 2:
        return 0 if d == -1 else -1
    if p == 3 and d == -3:
        return 0
    residue = d % p
    return 1 if pow(residue, (p - 1) // 2, p) == 1 else -1


@dataclass(frozen=True)
class ArithmeticGroup:
    """Gamma0(N); level 1 is SL2(Z)."""

    level: int = 1

    @classmethod
    def parse(cls, tag: str) -> "ArithmeticGroup":
        text = tag.strip().lower()
        if text in ("sl2z", "gamma0:1"):
            return cls(1)
        if text.startswith("gamma0:"):
            try:
                level = int(text.split(":", 1)[1])
            except ValueError:
                level = 0
            if level >= 1:
                return cls(level)
        raise InvalidInputError(config_loader.get_message("errors", "unknown_group", tag=tag))

    @property
    def tag(self) -> str:
        return "sl2z" if self.level == 1 else f"gamma0:{self.level}"

    def contains(self, g: GroupElement) -> bool:
        return g.is_integral and g.det == 1 and g.c % self.level == 0

    @property
    def index(self) -> int:
        result = self.level
        for p in _prime_factors(self.level):
            result = result * (p + 1) // p
        return result

    @property
    def elliptic_order_two_count(self) -> int:
        if self.level % 4 == 0:
            return 0
        count = 1
        for p in _prime_factors(self.level):
            count *= 1 + _kronecker_minus(-1, p)
        return count

    @property
    def elliptic_order_three_count(self) -> int:
        if self.level % 9 == 0:
            return 0
        count = 1
        for p in _prime_factors(self.level):
            count *= 1 + _kronecker_minus(-3, p)
        return count

    @property
    def cusp_count(self) -> int:
        return sum(_euler_phi(gcd(d, self.level // d)) for d in range(1, self.level + 1) if self.level % d == 0)

    @property
    def genus(self) -> int:
        value = (Fraction(self.index, 12) - Fraction(self.elliptic_order_two_count, 4)
                 - Fraction(self.elliptic_order_three_count, 3) - Fraction(self.cusp_count, 2) + 1)
        return int(value)

    def cusp_form_dimension(self, k: int) -> int:
        if k == 2:
            return self.genus
        if k < 2 or k % 2:
            return 0
        return ((k - 1) * (self.genus - 1) + (k // 2 - 1) * self.cusp_count
                + self.elliptic_order_two_count * (k // 4) + self.elliptic_order_three_count * (k // 3))

    @property
    def is_torsion_free(self) -> bool:
        return self.elliptic_order_two_count == 0 and self.elliptic_order_three_count == 0

    def __str__(self):
        return self.tag

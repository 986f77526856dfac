from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import Tuple

import numpy as np

from .group_element import GroupElement


@dataclass(frozen=True)
class QuadForm:
    """Binary quadratic form a x^2 + b x y + c y^2, read on H as Q(z) = a z^2 + b z + c."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_primitive(self) -> bool:
        return gcd(gcd(abs(self.a), abs(self.b)), abs(self.c)) == 1

    @property
    def max_abs_coefficient(self) -> int:
        return max(abs(self.a), abs(self.b), abs(self.c))

    def is_reduced(self) -> bool:
        """Gauss reduction for indefinite forms: 0 < b < sqrt D and sqrt D - b < 2|a| < sqrt D + b."""
        D = self.discriminant
        if self.b <= 0 or self.b * self.b >= D:
            return False
        two_a = 2 * abs(self.a)
        # compare sqrt(D) - b < 2|a| and 2|a| < sqrt(D) + b without floating point
        lower = two_a + self.b
        upper = two_a - self.b
        return lower * lower > D and (upper < 0 or upper * upper < D)

    def transform(self, g: GroupElement) -> "QuadForm":
        """Form with matrix g^t M_Q g, i.e. Q(g z) j(g, z)^2."""
        a, b, c, d = g.entries
        A = self.a * a * a + self.b * a * c + self.c * c * c
        B = 2 * self.a * a * b + self.b * (a * d + b * c) + 2 * self.c * c * d
        C = self.a * b * b + self.b * b * d + self.c * d * d
        return QuadForm(A, B, C)

    def __call__(self, z):
        return (self.a * z + self.b) * z + self.c

    def power(self, z, exponent: int):
        """Q(z)^exponent by repeated multiplication; never a branch cut."""
        value = self(z)
        base = value if exponent >= 0 else 1.0 / value
        result = np.ones_like(value) if isinstance(value, np.ndarray) else 1.0 + 0j
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def roots(self) -> Tuple[float, float]:
        root = float(self.discriminant) ** 0.5
        return ((-self.b - root) / (2 * self.a), (-self.b + root) / (2 * self.a))

    def __str__(self):
        return f"[{self.a}, {self.b}, {self.c}]"


@dataclass(frozen=True)
class FormClass:
    """SL2(Z) proper equivalence class of primitive forms, represented by its cycle of reduced forms."""

    representative: QuadForm
    cycle: Tuple[QuadForm, ...] = field(default_factory=tuple)

    @property
    def discriminant(self) -> int:
        return self.representative.discriminant

    def __contains__(self, form: QuadForm) -> bool:
        return form in self.cycle


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n

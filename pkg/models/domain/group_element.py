from dataclasses import dataclass
from numbers import Number
from typing import Tuple, Union

import numpy as np


class _Infinity:
    """The cusp at infinity, kept distinct from any large number."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "oo"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

PointH = complex
PointLike = Union[complex, np.ndarray]


@dataclass(frozen=True)
class GroupElement:
    """2x2 matrix (a, b; c, d) acting by Moebius transformations.

    Entries are exact ``int`` for elements of an arithmetic group and ``complex``
    for scaling matrices. The sign is carried; use ``psl_eq`` where only the
    image in PSL2 matters.
    """

    a: Number
    b: Number
    c: Number
    d: Number

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(1, 0, 0, 1)

    @property
    def det(self) -> Number:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> Number:
        return self.a + self.d

    @property
    def entries(self) -> Tuple[Number, Number, Number, Number]:
        return (self.a, self.b, self.c, self.d)

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, (int, np.integer)) and not isinstance(x, bool) for x in self.entries)

    @property
    def max_abs_entry(self) -> float:
        return max(abs(x) for x in self.entries)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "GroupElement":
        if self.is_integral and self.det == 1:
            return GroupElement(self.d, -self.b, -self.c, self.a)
        det = self.det
        return GroupElement(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def __pow__(self, n: int) -> "GroupElement":
        base = self if n >= 0 else self.inverse()
        result = GroupElement.identity()
        for _ in range(abs(n)):
            result = result @ base
        return result

    def conjugate_by(self, sigma: "GroupElement", sigma_inv: "GroupElement" = None) -> "GroupElement":
        """Return sigma^-1 * self * sigma."""
        sigma_inv = sigma_inv if sigma_inv is not None else sigma.inverse()
        return sigma_inv @ self @ sigma

    def act(self, z: PointLike) -> PointLike:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def j(self, z: PointLike) -> PointLike:
        return self.c * z + self.d

    def sign_normalized(self) -> "GroupElement":
        for entry in self.entries:
            if entry != 0:
                return self if _real_part(entry) > 0 or (_real_part(entry) == 0 and _imag_part(entry) > 0) else -self
        return self

    def key(self) -> Tuple[Number, ...]:
        """Hashable identifier of the PSL2 class (sign-normalized entries)."""
        return self.sign_normalized().entries

    def psl_eq(self, other: "GroupElement") -> bool:
        return self.entries == other.entries or self.entries == (-other).entries

    def is_close(self, other: "GroupElement", tol: float) -> bool:
        return max(abs(x - y) for x, y in zip(self.entries, other.entries)) <= tol

    def to_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def __repr__(self):
        return f"<GroupElement({self.a}, {self.b}; {self.c}, {self.d})>"

    def __str__(self):
        return f"{self.a},{self.b};{self.c},{self.d}"


def _real_part(x: Number) -> float:
    return x.real if isinstance(x, complex) else x


def _imag_part(x: Number) -> float:
    return x.imag if isinstance(x, complex) else 0


T = GroupElement(1, 1, 0, 1)
S = GroupElement(0, -1, 1, 0)

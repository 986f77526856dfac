import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from config.config_loader import config_loader
from config.logging_config import get_logger
from services.exceptions import DomainError, InvalidInputError, ToleranceError

logger = get_logger(__name__)

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True, eq=False)
class QExpansion:
    """Holomorphic q-series sum_{n=0}^{M} a(n) q^n, q = e^{2 pi i z}, of weight k.

    ``exact`` keeps the integer coefficients when they are known exactly. The tail
    beyond M is bounded with the crude majorant |a(n)| <= n^k. ``fricke_sign`` is the
    eigenvalue eps of a level N newform under the Fricke involution, f|W_N = eps f.
    """

    label: str
    weight: int
    group_tag: str
    coeffs: np.ndarray
    exact: Optional[Tuple[int, ...]] = field(default=None, compare=False)
    fricke_sign: Optional[int] = field(default=None, compare=False)

    @classmethod
    def from_integers(cls, label: str, weight: int, group_tag: str, values: Sequence[int],
                      fricke_sign: Optional[int] = None) -> "QExpansion":
        exact = tuple(int(v) for v in values)
        return cls(label, weight, group_tag, np.array([float(v) for v in exact], dtype=complex), exact, fricke_sign)

    @classmethod
    def zero(cls, weight: int, order: int, group_tag: str = "sl2z") -> "QExpansion":
        return cls.from_integers("zero", weight, group_tag, [0] * (order + 1))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def coefficient(self, n: int):
        if self.exact is not None:
            return self.exact[n]
        return self.coeffs[n]

    def tail_bound(self, y: float, derivative: int = 0, shift: int = 0) -> float:
        """Bound for sum_{n>M} n^{k+r-shift} (2 pi)^{r} e^{-2 pi n y}."""
        if self.is_zero:
            return 0.0
        alpha = self.weight + derivative - shift
        m1 = self.order + 1
        log_first = alpha * math.log(m1) + derivative * math.log(2 * math.pi) - 2 * math.pi * m1 * y
        ratio = ((m1 + 1) / m1) ** max(alpha, 0) * math.exp(-2 * math.pi * y)
        if ratio >= 1.0:
            return math.inf
        return math.exp(log_first) / (1.0 - ratio)

    def _check(self, z, y_min: Optional[float], derivative: int = 0, shift: int = 0) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        y_min = config_loader.get_numeric("forms", "y_min", 0.05) if y_min is None else y_min
        y_low = float(np.min(z.imag)) if z.size else 1.0
        if y_low <= 0 or y_low < y_min:
            raise DomainError(config_loader.get_message(
                "errors", "below_y_min", z=complex(z.flat[int(np.argmin(z.imag))]), y=y_low, y_min=y_min))
        tol = config_loader.get_numeric("forms", "tail_tolerance", 1e-18)
        tail = self.tail_bound(y_low, derivative, shift)
        if tail > tol:
            raise ToleranceError(config_loader.get_message(
                "errors", "tolerance", detail=f"q-series tail of {self.label} at Im z = {y_low:.4g} with M = {self.order}",
                achieved=tail), achieved=tail)
        return z

    def eval(self, z, y_min: Optional[float] = None):
        """Evaluate f(z); scalar in, scalar out, arrays elementwise."""
        zz = self._check(z, y_min)
        value = P.polyval(np.exp(TWO_PI_I * zz), self.coeffs)
        return complex(value) if np.ndim(z) == 0 else value

    def eval_deriv(self, r: int, z, y_min: Optional[float] = None):
        """Evaluate f^{(r)}(z) = sum a(n) (2 pi i n)^r q^n."""
        cap = config_loader.get_numeric("forms", "derivative_cap", 40)
        if r < 0:
            raise InvalidInputError(f"Derivative order must be nonnegative, got {r}")
        if r > cap:
            raise ToleranceError(f"Derivative order {r} exceeds cap {cap}", achieved=float(r))
        if r == 0:
            return self.eval(z, y_min)
        zz = self._check(z, y_min, derivative=r)
        n = np.arange(self.order + 1)
        scaled = self.coeffs * (TWO_PI_I * n) ** r
        value = P.polyval(np.exp(TWO_PI_I * zz), scaled)
        return complex(value) if np.ndim(z) == 0 else value

    def eichler_integral(self, z, y_min: float = 0.0):
        """E(z) = sum_{n>=1} a(n)/(2 pi i n) q^n, the antiderivative vanishing at i*oo.

        Only weight 2 gives a Gamma-equivariant antiderivative; the accuracy is governed
        by the tail bound, not by ``y_min``.
        """
        if self.weight != 2:
            raise InvalidInputError(f"Eichler integral needs a weight 2 form, got weight {self.weight}")
        zz = self._check(z, y_min, shift=1)
        n = np.arange(self.order + 1)
        scaled = np.zeros_like(self.coeffs)
        scaled[1:] = self.coeffs[1:] / (TWO_PI_I * n[1:])
        value = P.polyval(np.exp(TWO_PI_I * zz), scaled)
        return complex(value) if np.ndim(z) == 0 else value

    def to_payload(self) -> dict:
        coeffs = list(self.exact) if self.exact is not None else [[c.real, c.imag] for c in self.coeffs]
        payload = {"label": self.label, "weight": self.weight, "group": self.group_tag, "coeffs": coeffs}
        if self.fricke_sign is not None:
            payload["fricke_sign"] = self.fricke_sign
        return payload

    @classmethod
    def from_payload(cls, payload: dict) -> "QExpansion":
        coeffs = payload["coeffs"]
        sign = payload.get("fricke_sign")
        if all(isinstance(c, int) for c in coeffs):
            return cls.from_integers(payload["label"], payload["weight"], payload["group"], coeffs, sign)
        values = np.array([complex(re, im) for re, im in coeffs], dtype=complex)
        return cls(payload["label"], payload["weight"], payload["group"], values, fricke_sign=sign)

    def __call__(self, z):
        return self.eval(z)

    def __repr__(self):
        return f"<QExpansion(label={self.label}, weight={self.weight}, group={self.group_tag}, M={self.order})>"

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .group_element import GroupElement, _Infinity


@dataclass(frozen=True)
class ParabolicDatum:
    """Cusp a with scaling matrix sigma (sigma(oo) = a) and generator of its stabilizer."""

    cusp: Union[_Infinity, Fraction]
    sigma: GroupElement
    sigma_inv: GroupElement
    generator: GroupElement

    tag = "parabolic"


@dataclass(frozen=True)
class HyperbolicDatum:
    """Hyperbolic generator with sigma^-1 gamma sigma = sign * diag(xi, 1/xi), xi > 1.

    sigma sends 0 to eta1 and oo to eta2; eta2 is the attracting fixed point.
    """

    generator: GroupElement
    xi: float
    sigma: GroupElement
    sigma_inv: GroupElement
    eta1: float
    eta2: float
    sign: int

    tag = "hyperbolic"

    @property
    def log_xi(self) -> float:
        return math.log(self.xi)

    @property
    def strip_height(self) -> float:
        """Upper edge pi / (2 log xi) of the strip on which A_eta f is defined."""
        return math.pi / (2.0 * self.log_xi)

    @property
    def discriminant(self) -> int:
        return self.generator.trace ** 2 - 4


@dataclass(frozen=True)
class EllipticDatum:
    """Elliptic point z0 = alpha + i beta of order N.

    sigma = (1/2i beta)(-conj z0, z0; -1, 1), sigma_inv = (1, -z0; 1, -conj z0), and
    epsilon is normalized so that sigma^-1 epsilon sigma = diag(zeta, 1/zeta), zeta = e^{pi i/N}.
    """

    z0: complex
    epsilon: GroupElement
    order: int
    sigma: GroupElement
    sigma_inv: GroupElement

    tag = "elliptic"

    @property
    def beta(self) -> float:
        return self.z0.imag

    @property
    def zeta(self) -> complex:
        return cmath.exp(1j * math.pi / self.order)

    def to_disc(self, z):
        return self.sigma_inv.act(z)

    def from_disc(self, w):
        return self.sigma.act(w)


FixedPointDatum = Union[ParabolicDatum, HyperbolicDatum, EllipticDatum]

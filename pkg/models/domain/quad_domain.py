import math
from dataclasses import dataclass, field
from typing import Any, Dict

DOMAIN_TAGS = ("F_SL2Z", "F_par", "F_hyp", "F_ell_sector", "Disc", "Ball")


@dataclass(frozen=True)
class Domain:
    """Integration region in H or in the unit disc, with its exact description in ``params``."""

    tag: str
    params: Dict[str, Any] = field(default_factory=dict, hash=False)

    @classmethod
    def sl2z(cls, y_cap: float) -> "Domain":
        return cls("F_SL2Z", {"y_cap": float(y_cap)})

    @classmethod
    def strip(cls, y_lo: float, y_cap: float, width: float = 1.0) -> "Domain":
        return cls("F_par", {"y_lo": float(y_lo), "y_cap": float(y_cap), "width": float(width)})

    @classmethod
    def annulus(cls, xi: float) -> "Domain":
        """Upper half annulus 1 <= |z| < xi^2."""
        return cls("F_hyp", {"xi": float(xi)})

    @classmethod
    def sector(cls, order: int) -> "Domain":
        """Sector of the unit disc of angle 2 pi / N centred on theta = pi."""
        return cls("F_ell_sector", {"order": int(order)})

    @classmethod
    def disc(cls) -> "Domain":
        return cls("Disc", {})

    @classmethod
    def ball(cls, center: complex, radius: float) -> "Domain":
        """Hyperbolic ball of radius r about a point of H."""
        return cls("Ball", {"center": complex(center), "radius": float(radius)})

    @property
    def disc_radius(self) -> float:
        """Euclidean radius R = tanh(r/2) of a hyperbolic ball in the disc model."""
        r = self.params["radius"]
        return (math.exp(r) - 1.0) / (math.exp(r) + 1.0)

    def __repr__(self):
        return f"<Domain({self.tag}, {self.params})>"

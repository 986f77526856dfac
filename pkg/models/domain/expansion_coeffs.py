from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from .fixed_point import EllipticDatum, FixedPointDatum

TAGS = ("par", "hyp", "ell")


@dataclass(frozen=True, eq=False)
class ExpansionCoeffs:
    """Coefficients of one expansion of a form, with the datum defining it.

    par: b(m) for m >= 1; hyp: b(m) for |m| <= window; ell: c(l) for l >= 0.
    ``meta`` records how they were extracted (sample height or radius, node count).
    """

    tag: str
    datum: FixedPointDatum
    weight: int
    indices: np.ndarray
    values: np.ndarray
    meta: Dict[str, Any] = field(default_factory=dict)

    def value(self, index: int) -> complex:
        hits = np.nonzero(self.indices == index)[0]
        if not len(hits):
            raise KeyError(index)
        return complex(self.values[hits[0]])

    def as_dict(self) -> Dict[int, complex]:
        return {int(i): complex(v) for i, v in zip(self.indices, self.values)}

    def elliptic_b(self) -> Dict[int, complex]:
        """Relabel c(l) as b(m) with l = N m - k/2; only l = -k/2 mod N carries data."""
        if self.tag != "ell" or not isinstance(self.datum, EllipticDatum):
            raise ValueError("Relabeling applies to elliptic coefficients only")
        order, half = self.datum.order, self.weight // 2
        return {(int(l) + half) // order: complex(v) for l, v in zip(self.indices, self.values)
                if (int(l) + half) % order == 0}

    @classmethod
    def from_elliptic_b(cls, b: Dict[int, complex], datum: EllipticDatum, weight: int, meta=None) -> "ExpansionCoeffs":
        half = weight // 2
        pairs = sorted((datum.order * m - half, v) for m, v in b.items() if datum.order * m - half >= 0)
        return cls("ell", datum, weight, np.array([p[0] for p in pairs], dtype=int),
                   np.array([p[1] for p in pairs], dtype=complex), dict(meta or {}))

    def to_rows(self) -> List[Dict[str, Any]]:
        return [{"tag": self.tag, "index": int(i), "re": float(v.real), "im": float(v.imag)}
                for i, v in zip(self.indices, self.values)]

    def __len__(self) -> int:
        return len(self.indices)

    def __repr__(self):
        return f"<ExpansionCoeffs(tag={self.tag}, weight={self.weight}, n={len(self)})>"

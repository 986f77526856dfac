import threading
import time
from typing import Dict, Iterator, Optional, Tuple

import numpy as np

from config.config_loader import config_loader
from config.logging_config import get_logger, log_function_entry, log_function_exit, log_performance
from models.domain.group import ArithmeticGroup
from models.domain.group_element import GroupElement
from models.domain.qexpansion import QExpansion
from services.arithmetic.moebius_service import moebius_service
from services.exceptions import InvalidInputError

logger = get_logger(__name__)


def convergents(a: int, c: int) -> Iterator[Tuple[int, int, int, int]]:
    """Yield (p_j, q_j, p_{j-1}, q_{j-1}) for the continued fraction of a / c, c > 0."""
    p_prev, q_prev, p, q = 0, 1, 1, 0
    x, y = a, c
    while y:
        partial, r = divmod(x, y)
        p_prev, q_prev, p, q = p, q, partial * p + p_prev, partial * q + q_prev
        yield p, q, p_prev, q_prev
        x, y = y, r


class ModularSymbols:
    """Periods of a weight 2 newform on Gamma0(N), N prime, from its Manin symbols.

    With E(z) = sum a(n) / (2 pi i n) q^n the integral from i*oo to z, the twelve-odd
    symbols {g 0, g oo} for g in Gamma0(N) \\ SL2(Z) are read off E at i and at
    (j + i) / N through the Fricke relation f(-1/(N z)) = eps N z^2 f(z). The period of
    gamma = (a, b; c, d) is the integral from oo to a/c, a sum of symbols over the
    convergents of a/c; nothing is ever evaluated below Im z = sqrt(3) / (2 N).
    """

    def __init__(self, form: QExpansion, level: int):
        if form.weight != 2:
            raise InvalidInputError(f"Modular symbols need a weight 2 form, got weight {form.weight}")
        if form.fricke_sign not in (-1, 1):
            raise InvalidInputError(f"Form {form.label} carries no Fricke sign")
        if level < 2 or any(level % p == 0 for p in range(2, int(level ** 0.5) + 1)):
            raise InvalidInputError(f"Modular symbols are implemented for prime level only, got {level}")
        self.form = form
        self.level = level
        self.sign = form.fricke_sign
        self.direct_height = config_loader.get_numeric("modsym", "direct_height", 0.05)
        self._periods: Dict[Tuple[int, int], complex] = {}
        self._lock = threading.Lock()
        start_time = time.time()
        nodes = np.concatenate([[1j], (np.arange(level) + 1j) / level])
        values = form.eichler_integral(nodes)
        # Q(c:d) = integral from g i to g oo for any g with bottom row (c, d)
        self._half = {(0, 1): -complex(values[0])}
        for j in range(level):
            self._half[(1, j)] = -self.sign * complex(values[j + 1])
        self._symbols = {row: self._half[row] - self._half[self._reduce(row[1], -row[0])] for row in self._half}
        self.cusp_zero = self._symbols[(0, 1)]
        log_performance(logger, "modular_symbols", time.time() - start_time, level=level,
                        symbols=len(self._symbols))

    def _reduce(self, c: int, d: int) -> Tuple[int, int]:
        """Canonical point of P1(Z/N) for a coprime pair (c, d)."""
        n = self.level
        if c % n == 0:
            return (0, 1)
        return (1, d * pow(c, -1, n) % n)

    def symbol(self, c: int, d: int) -> complex:
        """Integral from g 0 to g oo for g in SL2(Z) with bottom row (c, d)."""
        return self._symbols[self._reduce(c, d)]

    def cusp_integral(self, a: int, c: int) -> complex:
        """Integral of f from i*oo to the cusp a/c (gcd(a, c) = 1)."""
        if c == 0:
            return 0j
        if c < 0:
            a, c = -a, -c
        key = (a, c)
        cached = self._periods.get(key)
        if cached is not None:
            return cached
        total = 0j
        for p, q, p_prev, q_prev in convergents(a, c):
            if p * q_prev - p_prev * q == 1:
                total += self.symbol(q, q_prev)
            else:
                total += self.symbol(q, -q_prev)
        with self._lock:
            self._periods.setdefault(key, total)
        return total

    def period(self, g: GroupElement) -> complex:
        """Integral of f from z to g z for g in Gamma0(N); independent of z."""
        if g.c % self.level:
            raise InvalidInputError(f"{g} is not an element of gamma0:{self.level}")
        return self.cusp_integral(int(g.a), int(g.c))

    def _eichler_one(self, z: complex) -> complex:
        if z.imag >= self.direct_height:
            return complex(self.form.eichler_integral(z))
        w, g = moebius_service.reduce_with_element(z)
        h = g.inverse()
        if h.c % self.level == 0:
            return self.period(h) + complex(self.form.eichler_integral(w))
        # h = gamma r with r = (0, -1; 1, j) and gamma in Gamma0(N)
        j = int(h.d) * pow(int(h.c), -1, self.level) % self.level
        gamma = h @ GroupElement(j, 1, -1, 0)
        moved = self.sign * (complex(self.form.eichler_integral((w + j) / self.level)) + self.cusp_zero)
        return self.period(gamma) + moved

    def eichler(self, z):
        """E(z) anywhere in H; low points are pulled up with SL2(Z) and the Fricke involution."""
        if np.ndim(z) == 0:
            return self._eichler_one(complex(z))
        flat = np.asarray(z, dtype=complex).ravel()
        values = np.array([self._eichler_one(complex(p)) for p in flat], dtype=complex)
        return values.reshape(np.shape(z))

    def __repr__(self):
        return f"<ModularSymbols(form={self.form.label}, level={self.level}, eps={self.sign:+d})>"


class ModularSymbolService:
    """One ModularSymbols table per (form, level)."""

    def __init__(self):
        self._tables: Dict[Tuple[str, int, int], ModularSymbols] = {}
        self._lock = threading.Lock()

    def for_form(self, form: QExpansion, group: ArithmeticGroup) -> ModularSymbols:
        key = (form.label, form.order, group.level)
        table = self._tables.get(key)
        if table is None:
            log_function_entry(logger, "modular_symbols", form=form.label, group=group.tag)
            table = ModularSymbols(form, group.level)
            with self._lock:
                table = self._tables.setdefault(key, table)
            log_function_exit(logger, "modular_symbols", result=f"{{0, oo}} = {table.cusp_zero:.12g}")
        return table

    def clear(self) -> None:
        with self._lock:
            self._tables.clear()


modular_symbol_service = ModularSymbolService()

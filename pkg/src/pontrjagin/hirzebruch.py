"""Bernoulli numbers, the series x/tanh x and g(x), Adams polynomials and
characteristic classes of the bundles zeta_j over CP(2k).

Every series here is even; coefficient families are indexed by ``i`` with
``x**(2i)``.  The tables are built once per precision and reused (shared
read-only afterwards).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Iterable, Sequence

from .series import PowerSeries, PrecisionError, divide, rational_power
from .valuation import as_fraction, is_p_integral, nu2

__all__ = [
    "bernoulli",
    "bernoulli_positive",
    "tanh_series",
    "tanh_series_from_exp",
    "h_series",
    "h_series_closed_form",
    "a",
    "a_closed_form",
    "g_series",
    "g_series_from_tanh",
    "b",
    "a_power",
    "h_power",
    "h_normalized_derivative",
    "g_normalized_derivative",
    "adams_T_polynomial",
    "verify_adams_T",
    "BundleCoefficients",
    "pontrjagin_total",
    "p1_of_zeta",
    "l_class_of_zeta",
    "l_class_of_zeta_h_ratio",
]

_bernoulli_lock = threading.Lock()
_bernoulli_values: list[Fraction] = [Fraction(1), Fraction(-1, 2)]


def bernoulli(n: int) -> Fraction:
    """``beta_n`` from ``x/(e^x - 1) = sum beta_n x^n / n!`` (so ``beta_1 = -1/2``)."""
    if n < 0:
        raise ValueError(f"index must be nonnegative, got {n}")
    if n >= len(_bernoulli_values):
        with _bernoulli_lock:
            vals = _bernoulli_values
            for m in range(len(vals), n + 1):
                if m % 2:
                    vals.append(Fraction(0))
                    continue
                # sum_{j=0}^{m} C(m+1, j) beta_j = 0
                s = sum(comb(m + 1, j) * vals[j] for j in range(0, m, 2)) + (m + 1) * vals[1]
                vals.append(-s / (m + 1))
    return _bernoulli_values[n]


def bernoulli_positive(i: int) -> Fraction:
    """``B_i = (-1)**(i+1) * beta_{2i} = |beta_{2i}|`` for ``i >= 1``."""
    if i < 1:
        raise ValueError(f"index must be positive, got {i}")
    return (-1) ** (i + 1) * bernoulli(2 * i)


class _GrowingCache:
    """Keeps the highest-precision series built so far and truncates on demand."""

    def __init__(self, build: Callable[[int], PowerSeries]):
        self._build = build
        self._best: PowerSeries | None = None
        self._lock = threading.Lock()

    def __call__(self, precision: int) -> PowerSeries:
        best = self._best
        if best is None or best.precision < precision:
            with self._lock:
                best = self._best
                if best is None or best.precision < precision:
                    best = self._build(precision)
                    self._best = best
        return best.truncate(precision)


def _tanh_closed(precision: int) -> PowerSeries:
    c = [Fraction(0)] * (precision + 1)
    for i in range(1, (precision + 1) // 2 + 1):
        four = 4 ** i
        c[2 * i - 1] = Fraction((-1) ** (i + 1) * four * (four - 1)) * bernoulli_positive(i) / factorial(2 * i)
    return PowerSeries(c, precision)


tanh_series = _GrowingCache(_tanh_closed)
tanh_series.__doc__ = "tanh x from its Bernoulli-number closed form."


def _tanh_exp(precision: int) -> PowerSeries:
    sinh = [Fraction(1, factorial(n)) if n % 2 else Fraction(0) for n in range(precision + 1)]
    cosh = [Fraction(0) if n % 2 else Fraction(1, factorial(n)) for n in range(precision + 1)]
    return divide(PowerSeries(sinh), PowerSeries(cosh)).to_power_series()


tanh_series_from_exp = _GrowingCache(_tanh_exp)
tanh_series_from_exp.__doc__ = "tanh x as sinh x / cosh x from the exponential series."


def _h_division(precision: int) -> PowerSeries:
    t = tanh_series_from_exp(precision + 1)
    return divide(PowerSeries.variable(precision + 1), t).to_power_series()


h_series = _GrowingCache(_h_division)
h_series.__doc__ = "h(x) = x / tanh x by exact series division (tanh from sinh/cosh)."


def a_closed_form(i: int) -> Fraction:
    """``a_i = (-1)**(i+1) 2**(2i) B_i / (2i)!`` with ``a_0 = 1``."""
    if i == 0:
        return Fraction(1)
    return Fraction((-1) ** (i + 1) * 4 ** i) * bernoulli_positive(i) / factorial(2 * i)


def _h_closed(precision: int) -> PowerSeries:
    c = [Fraction(0)] * (precision + 1)
    for i in range(precision // 2 + 1):
        c[2 * i] = a_closed_form(i)
    return PowerSeries(c, precision)


h_series_closed_form = _GrowingCache(_h_closed)


def a(i: int, precision: int | None = None) -> Fraction:
    """Coefficient of ``x**(2i)`` in ``h(x)`` read from the division route."""
    if precision is not None and 2 * i > precision:
        raise PrecisionError(f"a_{i} needs precision {2 * i}, got {precision}")
    return h_series(2 * i).coefficient(2 * i)


def _g_ratio(precision: int) -> PowerSeries:
    h = h_series(precision)
    return (divide(h.scale_variable(3), h).to_power_series() - 1) / 8


g_series = _GrowingCache(_g_ratio)
g_series.__doc__ = "g(x) = (h(3x)/h(x) - 1) / 8."


def _g_tanh(precision: int) -> PowerSeries:
    t2 = tanh_series(precision) ** 2
    return divide(t2, t2 + 3).to_power_series()


g_series_from_tanh = _GrowingCache(_g_tanh)
g_series_from_tanh.__doc__ = "g(x) = tanh^2 x / (3 + tanh^2 x)."


def b(i: int, precision: int | None = None) -> Fraction:
    """Coefficient of ``x**(2i)`` in ``g(x)``; ``i >= 1``."""
    if i < 1:
        raise ValueError("the b family starts at i = 1")
    if precision is not None and 2 * i > precision:
        raise PrecisionError(f"b_{i} needs precision {2 * i}, got {precision}")
    return g_series(2 * i).coefficient(2 * i)


@lru_cache(maxsize=256)
def h_power(l: int, precision: int) -> PowerSeries:
    """``h(x)**l`` to the given precision (``l`` may be negative)."""
    return h_series(precision) ** l


def a_power(l: int, i: int, precision: int | None = None) -> Fraction:
    """Coefficient of ``x**(2i)`` in ``h(x)**l``."""
    if l < 1:
        raise ValueError(f"a_power needs l >= 1, got {l}")
    if precision is None:
        precision = 2 * i
    if 2 * i > precision:
        raise PrecisionError(f"coefficient x^{2 * i} needs precision {2 * i}, got {precision}")
    return h_power(l, precision).coefficient(2 * i)


def h_normalized_derivative(j: int) -> Fraction:
    """``u_j = h^(2j)(0) / 2**(2j-1)``: ``u_1 = 1/3`` and ``u_j = 1 mod 4`` for ``j >= 2``."""
    return a(j) * factorial(2 * j) / 2 ** (2 * j - 1)


def g_normalized_derivative(j: int) -> Fraction:
    """``u_j = g^(2j)(0) / 2**(2j-1)``, congruent to 3 mod 4 for every ``j >= 1``."""
    return b(j) * factorial(2 * j) / 2 ** (2 * j - 1)


@lru_cache(maxsize=None)
def adams_T_polynomial(j: int) -> tuple[int, ...]:
    """Integer coefficients (constant first) of ``T_j`` with ``T_j(t + 1/t - 2) = t**j + t**-j - 2``.

    ``t**n + t**-n`` is a polynomial ``V_n`` in ``w = t + 1/t`` with
    ``V_{n+1} = w V_n - V_{n-1}``; then ``T_j(z) = V_j(z + 2) - 2``.
    """
    if j < 1:
        raise ValueError(f"j must be positive, got {j}")
    prev, cur = [2], [0, 1]
    for _ in range(j - 1):
        nxt = [0] + cur
        for d, c in enumerate(prev):
            nxt[d] -= c
        prev, cur = cur, nxt
    # substitute w = z + 2
    out = [0] * (len(cur))
    for d, c in enumerate(cur):
        for e in range(d + 1):
            out[e] += c * comb(d, e) * 2 ** (d - e)
    out[0] -= 2
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def _laurent_mul(p: dict[int, int], q: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def verify_adams_T(j: int) -> bool:
    """Substitute ``z = t + 1/t - 2`` into ``T_j`` as a Laurent polynomial in ``t``."""
    coeffs = adams_T_polynomial(j)
    z = {1: 1, -1: 1, 0: -2}
    total: dict[int, int] = {}
    zpow: dict[int, int] = {0: 1}
    for c in coeffs:
        for e, v in zpow.items():
            total[e] = total.get(e, 0) + c * v
        zpow = _laurent_mul(zpow, z)
    total = {e: v for e, v in total.items() if v}
    target = {j: 1, -j: 1, 0: -2}
    return len(coeffs) == j + 1 and coeffs[-1] == 1 and total == target


@dataclass(frozen=True)
class BundleCoefficients:
    """The coefficients ``m_1 .. m_k`` of ``zeta = m_1 zeta_1 + ... + m_k zeta_k`` over CP(2k)."""

    k: int
    m: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        m = tuple(as_fraction(v) for v in self.m)
        if len(m) != self.k:
            raise ValueError(f"expected {self.k} coefficients, got {len(m)}")
        for j, v in enumerate(m, 1):
            if not is_p_integral(v, 2):
                raise ValueError(f"m_{j} = {v} is not 2-integral")
        object.__setattr__(self, "m", m)

    @classmethod
    def of(cls, m: Iterable[int | Fraction]) -> BundleCoefficients:
        m = tuple(m)
        return cls(len(m), tuple(as_fraction(v) for v in m))

    @classmethod
    def zero(cls, k: int) -> BundleCoefficients:
        return cls(k, (Fraction(0),) * k)

    @property
    def r(self) -> int:
        return nu2(self.k)

    @property
    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.m)

    def odd_sum(self) -> Fraction:
        return sum((v for j, v in enumerate(self.m, 1) if j % 2), Fraction(0))


def _signed_power(f: PowerSeries, m: Fraction) -> PowerSeries:
    if m.denominator == 1:
        return f ** m.numerator
    return rational_power(f, m.numerator, m.denominator, p=2)


def pontrjagin_total(zeta: BundleCoefficients, precision: int) -> PowerSeries:
    """``prod_j ((1 + 9 j^2 x^2) / (1 + j^2 x^2)) ** m_j`` truncated at ``x**precision``."""
    if precision < 2:
        raise ValueError("precision must be at least 2")
    total = PowerSeries.constant(1, precision)
    for j, m in enumerate(zeta.m, 1):
        if not m:
            continue
        num = PowerSeries.monomial(2, precision, 9 * j * j) + 1
        den = PowerSeries.monomial(2, precision, j * j) + 1
        total = total * _signed_power(divide(num, den).to_power_series(), m)
    if total.coefficient(2) != p1_of_zeta(zeta):
        raise ArithmeticError("degree-2 Pontrjagin coefficient disagrees with 8 * sum j^2 m_j")
    return total


def p1_of_zeta(zeta: BundleCoefficients) -> Fraction:
    return 8 * sum((j * j * m for j, m in enumerate(zeta.m, 1)), Fraction(0))


def l_class_of_zeta(zeta: BundleCoefficients, precision: int) -> PowerSeries:
    """``prod_j (1 + 8 g(jx)) ** m_j``."""
    g = g_series(precision)
    total = PowerSeries.constant(1, precision)
    for j, m in enumerate(zeta.m, 1):
        if m:
            total = total * _signed_power(g.scale_variable(j) * 8 + 1, m)
    return total


def l_class_of_zeta_h_ratio(zeta: BundleCoefficients, precision: int) -> PowerSeries:
    """``prod_j (h(3jx) / h(jx)) ** m_j``; must equal :func:`l_class_of_zeta`."""
    h = h_series(precision)
    total = PowerSeries.constant(1, precision)
    for j, m in enumerate(zeta.m, 1):
        if m:
            ratio = divide(h.scale_variable(3 * j), h.scale_variable(j)).to_power_series()
            total = total * _signed_power(ratio, m)
    return total


def even_coefficients(f: PowerSeries, start: int = 0) -> Sequence[Fraction]:
    return f.coefficients[2 * start :: 2]

"""Truncated formal power series and finite-tail Laurent series over the rationals.

A :class:`PowerSeries` stores the coefficients of ``x**0 .. x**precision``;
everything above ``precision`` is unknown, not zero, and reading it raises
:class:`PrecisionError`.  A :class:`LaurentSeries` additionally carries a
(possibly negative) lowest exponent.  Leading zeros of a Laurent series are
trimmed on construction, so ``lowest_exponent`` is the true order whenever the
series is not zero to its precision.

Precision bookkeeping:

* ``f + g``, ``f * g`` on power series: ``min`` of the operand precisions.
* Laurent products: ``min(prec_f + low_g, prec_g + low_f)``.
* ``compose(F, G)``: ``min(ord(G) * (prec_F + 1) - 1, prec_G)``.
* ``revert``/``qth_root``/``rational_power``: precision of the input.

All values are immutable.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence, Union

from .valuation import INFINITY, ExtNat, as_fraction, format_rational, is_p_integral, nu_p

__all__ = [
    "PrecisionError",
    "IntegralityError",
    "PowerSeries",
    "LaurentSeries",
    "coefficient",
    "add",
    "mul",
    "scale",
    "divide",
    "derivative",
    "residue",
    "compose",
    "residue_change_of_variable",
    "revert",
    "qth_root",
    "rational_power",
    "pow_int",
    "BoundViolation",
    "verify_valuation_bound",
    "frobenius_twist",
    "frobenius_congruence_violations",
    "to_json",
    "from_json",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class PrecisionError(ValueError):
    """A coefficient beyond the guaranteed precision was requested."""


class IntegralityError(ValueError):
    """A p-integrality precondition or certification failed."""


def _convolve(a: Sequence[Fraction], b: Sequence[Fraction], n: int) -> list[Fraction]:
    """Coefficients ``0..n-1`` of the product of two coefficient lists."""
    out = [_ZERO] * n
    bnz = [(j, c) for j, c in enumerate(b[:n]) if c]
    for i, ai in enumerate(a[:n]):
        if not ai:
            continue
        lim = n - i
        for j, bj in bnz:
            if j >= lim:
                break
            out[i + j] += ai * bj
    return out


def _series_quotient(f: Sequence[Fraction], g: Sequence[Fraction], n: int) -> list[Fraction]:
    """First ``n`` coefficients of ``f / g`` for coefficient lists with ``g[0] != 0``."""
    g0 = g[0]
    gnz = [(j, c) for j, c in enumerate(g[:n]) if c and j]
    q: list[Fraction] = []
    for k in range(n):
        acc = f[k] if k < len(f) else _ZERO
        for j, gj in gnz:
            if j > k:
                break
            acc -= gj * q[k - j]
        q.append(acc / g0)
    return q


class PowerSeries:
    """Dense truncated power series ``c_0 + c_1 x + ... + c_N x**N + O(x**(N+1))``.

    ``precision`` may be ``-1`` (nothing known), which arises from
    differentiating a precision-0 series.
    """

    __slots__ = ("_c",)

    def __init__(self, coefficients: Iterable[Union[int, Fraction]], precision: int | None = None):
        c = [as_fraction(x) for x in coefficients]
        if precision is None:
            precision = len(c) - 1
        if precision < -1:
            raise ValueError(f"precision must be >= -1, got {precision}")
        if len(c) > precision + 1:
            c = c[: precision + 1]
        else:
            c.extend([_ZERO] * (precision + 1 - len(c)))
        self._c = tuple(c)

    # -- constructors -------------------------------------------------------
    @classmethod
    def _raw(cls, coeffs: Sequence[Fraction]) -> PowerSeries:
        obj = cls.__new__(cls)
        obj._c = tuple(coeffs)
        return obj

    @classmethod
    def constant(cls, value: Union[int, Fraction], precision: int) -> PowerSeries:
        return cls([value], precision)

    @classmethod
    def variable(cls, precision: int) -> PowerSeries:
        """The series ``x`` known to ``precision``."""
        return cls([0, 1], precision)

    @classmethod
    def monomial(cls, exponent: int, precision: int, coefficient: Union[int, Fraction] = 1) -> PowerSeries:
        c = [_ZERO] * (precision + 1)
        if exponent <= precision:
            c[exponent] = as_fraction(coefficient)
        return cls._raw(c)

    # -- accessors ----------------------------------------------------------
    @property
    def precision(self) -> int:
        return len(self._c) - 1

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return self._c

    def coefficient(self, i: int) -> Fraction:
        if i < 0:
            return _ZERO
        if i > self.precision:
            raise PrecisionError(f"coefficient of x^{i} requested, precision is {self.precision}")
        return self._c[i]

    __getitem__ = coefficient

    def order(self) -> ExtNat:
        for i, c in enumerate(self._c):
            if c:
                return i
        return INFINITY

    def is_zero(self) -> bool:
        return not any(self._c)

    def truncate(self, precision: int) -> PowerSeries:
        if precision > self.precision:
            raise PrecisionError(f"cannot raise precision {self.precision} to {precision}")
        return PowerSeries._raw(self._c[: precision + 1])

    def to_laurent(self) -> LaurentSeries:
        return LaurentSeries(self._c, 0, self.precision)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PowerSeries):
            return self._c == other._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        terms = [f"{c}*x^{i}" for i, c in enumerate(self._c) if c]
        body = " + ".join(terms) if terms else "0"
        return f"PowerSeries({body} + O(x^{self.precision + 1}))"

    # -- ring structure -----------------------------------------------------
    def __add__(self, other: object) -> PowerSeries:
        if isinstance(other, (int, Fraction)):
            if self.precision < 0:
                return self
            c = list(self._c)
            c[0] += other
            return PowerSeries._raw(c)
        if not isinstance(other, PowerSeries):
            return NotImplemented
        n = min(len(self._c), len(other._c))
        return PowerSeries._raw([a + b for a, b in zip(self._c[:n], other._c[:n])])

    __radd__ = __add__

    def __neg__(self) -> PowerSeries:
        return PowerSeries._raw([-c for c in self._c])

    def __sub__(self, other: object) -> PowerSeries:
        if isinstance(other, (int, Fraction, PowerSeries)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other: object) -> PowerSeries:
        return (-self) + other

    def __mul__(self, other: object) -> PowerSeries:
        if isinstance(other, (int, Fraction)):
            return PowerSeries._raw([c * other for c in self._c])
        if not isinstance(other, PowerSeries):
            return NotImplemented
        n = min(len(self._c), len(other._c))
        return PowerSeries._raw(_convolve(self._c, other._c, n))

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> PowerSeries:
        if isinstance(other, (int, Fraction)):
            other = as_fraction(other)
            return PowerSeries._raw([c / other for c in self._c])
        if isinstance(other, PowerSeries):
            q = divide(self, other)
            return q.to_power_series()
        return NotImplemented

    def __pow__(self, exponent: int) -> PowerSeries:
        if exponent < 0:
            return self.reciprocal() ** (-exponent)
        return pow_int(self, exponent)

    def reciprocal(self) -> PowerSeries:
        """``1 / f`` for a series with invertible constant term."""
        if self.precision < 0:
            return self
        if not self._c[0]:
            raise ZeroDivisionError("constant term is zero; the reciprocal is a Laurent series")
        return PowerSeries._raw(_series_quotient([_ONE], self._c, len(self._c)))

    # -- calculus and substitutions ----------------------------------------
    def derivative(self) -> PowerSeries:
        return PowerSeries._raw([i * c for i, c in enumerate(self._c)][1:])

    def scale_variable(self, factor: Union[int, Fraction]) -> PowerSeries:
        """``f(factor * x)``."""
        factor = as_fraction(factor)
        out = []
        pw = _ONE
        for c in self._c:
            out.append(c * pw)
            pw *= factor
        return PowerSeries._raw(out)

    def __call__(self, other: PowerSeries) -> PowerSeries:
        return compose(self, other)


class LaurentSeries:
    """Laurent series ``sum_{i >= low} c_i x**i + O(x**(precision+1))``.

    Leading zero coefficients are trimmed on construction; a series that is
    zero to its precision is stored with no coefficients and
    ``lowest_exponent == precision + 1``.
    """

    __slots__ = ("_low", "_c")

    def __init__(
        self,
        coefficients: Iterable[Union[int, Fraction]],
        lowest_exponent: int = 0,
        precision: int | None = None,
    ):
        c = [as_fraction(x) for x in coefficients]
        if precision is None:
            precision = lowest_exponent + len(c) - 1
        n = precision - lowest_exponent + 1
        if n < 0:
            raise ValueError("precision lies below the lowest exponent")
        if len(c) > n:
            c = c[:n]
        else:
            c.extend([_ZERO] * (n - len(c)))
        skip = 0
        while skip < len(c) and not c[skip]:
            skip += 1
        self._low = lowest_exponent + skip
        self._c = tuple(c[skip:])

    @classmethod
    def from_power_series(cls, f: PowerSeries) -> LaurentSeries:
        return cls(f.coefficients, 0, f.precision)

    @classmethod
    def monomial(cls, exponent: int, precision: int, coefficient: Union[int, Fraction] = 1) -> LaurentSeries:
        return cls([coefficient], exponent, precision)

    @property
    def lowest_exponent(self) -> int:
        return self._low

    @property
    def precision(self) -> int:
        return self._low + len(self._c) - 1

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return self._c

    def coefficient(self, i: int) -> Fraction:
        if i > self.precision:
            raise PrecisionError(f"coefficient of x^{i} requested, precision is {self.precision}")
        if i < self._low:
            return _ZERO
        return self._c[i - self._low]

    __getitem__ = coefficient

    def order(self) -> ExtNat:
        return self._low if self._c else INFINITY

    def is_zero(self) -> bool:
        return not self._c

    def residue(self) -> Fraction:
        return self.coefficient(-1)

    def truncate(self, precision: int) -> LaurentSeries:
        if precision > self.precision:
            raise PrecisionError(f"cannot raise precision {self.precision} to {precision}")
        return LaurentSeries(self._c, self._low, precision)

    def to_power_series(self) -> PowerSeries:
        if self._c and self._low < 0:
            raise ValueError("series has negative-exponent terms")
        if self.precision < -1:
            raise PrecisionError("no nonnegative coefficient is known")
        return PowerSeries([self.coefficient(i) for i in range(self.precision + 1)], self.precision)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LaurentSeries):
            return self._low == other._low and self._c == other._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._low, self._c))

    def __repr__(self) -> str:
        terms = [f"{c}*x^{self._low + i}" for i, c in enumerate(self._c) if c]
        body = " + ".join(terms) if terms else "0"
        return f"LaurentSeries({body} + O(x^{self.precision + 1}))"

    def __add__(self, other: object) -> LaurentSeries:
        if isinstance(other, (int, Fraction)):
            other = LaurentSeries([other], 0, max(self.precision, 0))
        elif isinstance(other, PowerSeries):
            other = other.to_laurent()
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        low = min(self._low, other._low)
        prec = min(self.precision, other.precision)
        if prec < low:
            return LaurentSeries([], prec + 1, prec)
        return LaurentSeries(
            [self.coefficient(i) + other.coefficient(i) for i in range(low, prec + 1)], low, prec
        )

    __radd__ = __add__

    def __neg__(self) -> LaurentSeries:
        return LaurentSeries([-c for c in self._c], self._low, self.precision)

    def __sub__(self, other: object) -> LaurentSeries:
        if isinstance(other, (int, Fraction, PowerSeries, LaurentSeries)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other: object) -> LaurentSeries:
        return (-self) + other

    def __mul__(self, other: object) -> LaurentSeries:
        if isinstance(other, (int, Fraction)):
            return LaurentSeries([c * other for c in self._c], self._low, self.precision)
        if isinstance(other, PowerSeries):
            other = other.to_laurent()
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        low = self._low + other._low
        prec = min(self.precision + other._low, other.precision + self._low)
        n = prec - low + 1
        if n <= 0:
            return LaurentSeries([], prec + 1, prec)
        return LaurentSeries(_convolve(self._c, other._c, n), low, prec)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> LaurentSeries:
        if isinstance(other, (int, Fraction)):
            other = as_fraction(other)
            return LaurentSeries([c / other for c in self._c], self._low, self.precision)
        if isinstance(other, (PowerSeries, LaurentSeries)):
            return divide(self, other)
        return NotImplemented

    def __rtruediv__(self, other: object) -> LaurentSeries:
        if isinstance(other, (int, Fraction)):
            return divide(LaurentSeries([other], 0, max(self.precision - self._low, 0)), self)
        return NotImplemented

    def __pow__(self, exponent: int) -> LaurentSeries:
        base = self
        if exponent < 0:
            base = divide(LaurentSeries([1], 0, self.precision - self._low), self)
            exponent = -exponent
        result = LaurentSeries([1], 0, base.precision - base._low)
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def derivative(self) -> LaurentSeries:
        return LaurentSeries(
            [(self._low + i) * c for i, c in enumerate(self._c)], self._low - 1, self.precision - 1
        )


Series = Union[PowerSeries, LaurentSeries]


def _as_laurent(f: Series) -> LaurentSeries:
    return f.to_laurent() if isinstance(f, PowerSeries) else f


# -- functional surface ----------------------------------------------------

def coefficient(f: Series, i: int) -> Fraction:
    return f.coefficient(i)


def add(f: Series, g: Series) -> Series:
    return f + g


def mul(f: Series, g: Series) -> Series:
    return f * g


def scale(f: Series, c: Union[int, Fraction]) -> Series:
    return f * as_fraction(c)


def derivative(f: Series) -> Series:
    return f.derivative()


def residue(f: Series) -> Fraction:
    return _as_laurent(f).residue()


def divide(f: Series, g: Series) -> LaurentSeries:
    """Exact quotient ``f / g`` as a Laurent series.

    The result starts at ``ord(f) - ord(g)`` and its precision is limited by
    the relative precision of both operands.
    """
    f = _as_laurent(f)
    g = _as_laurent(g)
    if g.is_zero():
        raise ZeroDivisionError("divisor is zero to its precision")
    low = f.lowest_exponent - g.lowest_exponent
    n = min(f.precision - f.lowest_exponent, g.precision - g.lowest_exponent) + 1
    if n <= 0:
        return LaurentSeries([], low, low + n - 1)
    return LaurentSeries(_series_quotient(f.coefficients, g.coefficients, n), low, low + n - 1)


def _compose_power(F: PowerSeries, G: PowerSeries) -> PowerSeries:
    if G.precision >= 0 and G.coefficient(0):
        raise ValueError("inner series must have zero constant term")
    if F.precision < 0:
        return PowerSeries([], -1)
    ord_g = G.order()
    if ord_g == INFINITY:
        ord_g = G.precision + 1
    prec = min(ord_g * (F.precision + 1) - 1, G.precision)
    Gt = G.truncate(prec)
    n = prec + 1
    acc = [_ZERO] * n
    for c in reversed(F.coefficients):
        acc = _convolve(acc, Gt.coefficients, n)
        acc[0] += c
    return PowerSeries._raw(acc)


def compose(F: Series, G: PowerSeries) -> Series:
    """Substitute ``x = G(y)`` into ``F``.

    ``G(0)`` must vanish.  If ``F`` has negative-exponent terms then
    ``G'(0)`` must be nonzero so that ``1 / G`` is a Laurent series.
    """
    if isinstance(F, PowerSeries):
        return _compose_power(F, G)
    if G.precision < 1 or G.coefficient(0):
        raise ValueError("inner series must have zero constant term")
    low = F.lowest_exponent
    if F.precision >= -1 and (F.is_zero() or low >= 0):
        P = PowerSeries([F.coefficient(i) for i in range(F.precision + 1)], F.precision)
        return _compose_power(P, G).to_laurent()
    if not G.coefficient(1):
        raise ValueError("inner series needs a nonzero linear term to substitute into negative powers")
    if F.is_zero():
        return LaurentSeries([], F.precision + 1, F.precision)
    P = PowerSeries(F.coefficients, F.precision - low)
    inv_g = divide(LaurentSeries([1], 0, G.precision), G)
    return (inv_g ** (-low)) * _compose_power(P, G)


def residue_change_of_variable(F: Series, G: PowerSeries) -> tuple[Fraction, Fraction]:
    """Return ``(Res_x F, Res_y F(G(y)) G'(y))``; the two agree for admissible ``G``."""
    if G.precision < 1 or G.coefficient(0) or not G.coefficient(1):
        raise ValueError("substitution needs G(0) = 0 and G'(0) != 0")
    F = _as_laurent(F)
    lhs = F.residue()
    rhs = (compose(F, G) * G.derivative()).residue()
    return lhs, rhs


def _check_p_integral(coeffs: Iterable[Fraction], p: int, what: str) -> None:
    for i, c in enumerate(coeffs):
        if not is_p_integral(c, p):
            raise IntegralityError(f"{what}: coefficient {i} = {c} is not {p}-integral")


def revert(F: PowerSeries, p: int | None = None) -> PowerSeries:
    """Compositional inverse ``G`` with ``G(0) = 0`` and ``F(G(y)) = y``.

    Coefficients are solved one at a time from
    ``q_1 r_j + q_2 r^(2)_j + ... + q_j r^(j)_j = 0`` where ``r^(i)_j`` is the
    ``y**j`` coefficient of ``G**i`` (which only involves ``r_1 .. r_{j-1}``
    for ``i >= 2``).  With ``p`` given, the input must be p-integral with a
    p-unit linear coefficient and every output coefficient is checked to be
    p-integral.
    """
    N = F.precision
    if N < 1:
        raise ValueError("reversion needs precision >= 1")
    q = F.coefficients
    if q[0]:
        raise ValueError("F(0) must be zero")
    if not q[1]:
        raise ValueError("F'(0) must be nonzero")
    if p is not None:
        _check_p_integral(q, p, "revert input")
        if nu_p(q[1], p) != 0:
            raise IntegralityError(f"F'(0) = {q[1]} is not a {p}-adic unit")
    # pw[i][j]: coefficient of y^j in G^i
    pw = [[_ZERO] * (N + 1) for _ in range(N + 1)]
    r = [_ZERO] * (N + 1)
    r[1] = 1 / q[1]
    pw[1][1] = r[1]
    for j in range(2, N + 1):
        total = _ZERO
        for i in range(2, j + 1):
            prev = pw[i - 1]
            acc = _ZERO
            for t in range(1, j - i + 2):
                if r[t] and prev[j - t]:
                    acc += r[t] * prev[j - t]
            pw[i][j] = acc
            if q[i]:
                total += q[i] * acc
        r[j] = -total / q[1]
        pw[1][j] = r[j]
    G = PowerSeries._raw(r)
    if p is not None:
        _check_p_integral(r, p, "revert output")
    return G


def _require_unit_constant(f: PowerSeries) -> None:
    if f.precision < 0 or f.coefficient(0) != 1:
        raise ValueError("series must have constant term 1")


def qth_root(f: PowerSeries, q: int, p: int = 2, certify: bool = True) -> PowerSeries:
    """The unique ``phi`` with ``phi(0) = 1`` and ``phi**q == f``.

    Built as ``v(f - 1)`` where ``v - 1`` is the reversion of ``(1 + x)**q - 1``.
    ``q`` must be prime to ``p``; with ``certify`` the input and output are
    checked to be p-integral.
    """
    _require_unit_constant(f)
    if q < 1:
        raise ValueError(f"root index must be positive, got {q}")
    if math.gcd(p, q) != 1:
        raise ValueError(f"root index {q} is not prime to p = {p}")
    if certify:
        _check_p_integral(f.coefficients, p, "qth_root input")
    if q == 1:
        return f
    N = f.precision
    if N == 0:
        return f
    binom_series = pow_int(PowerSeries([1, 1], N), q) - 1
    v = revert(binom_series, p if certify else None) + 1
    phi = compose(v, f - 1)
    if certify:
        _check_p_integral(phi.coefficients, p, "qth_root output")
    return phi


def rational_power(f: PowerSeries, m: int, q: int, p: int = 2, certify: bool = True) -> PowerSeries:
    """``f**(m/q)`` for ``f(0) = 1`` and ``q`` prime to ``p``.

    Evaluated both as ``(f**(1/q))**m`` and ``(f**m)**(1/q)``; the two must agree.
    """
    _require_unit_constant(f)
    root_then_power = qth_root(f, q, p, certify) ** m
    power_then_root = qth_root(f ** m, q, p, certify)
    if root_then_power != power_then_root:
        raise ArithmeticError("the two evaluation orders of a rational power disagree")
    return root_then_power


def pow_int(f: PowerSeries, l: int) -> PowerSeries:
    """``f**l`` for ``l >= 0`` by binary exponentiation, truncated at ``f``'s precision."""
    if l < 0:
        raise ValueError(f"exponent must be nonnegative, got {l}")
    result = PowerSeries.constant(1, f.precision) if f.precision >= 0 else f
    base = f
    while l:
        if l & 1:
            result = result * base
        l >>= 1
        if l:
            base = base * base
    return result


class BoundViolation(NamedTuple):
    index: int
    actual: ExtNat
    bound: int


def verify_valuation_bound(f: PowerSeries, l: int) -> list[BoundViolation]:
    """Check ``nu2(c_i) >= nu2(l) - nu2(i)`` for the coefficients ``c_i`` of ``f**l``."""
    if l < 1:
        raise ValueError(f"exponent must be positive, got {l}")
    _check_p_integral(f.coefficients, 2, "verify_valuation_bound input")
    c = pow_int(f, l).coefficients
    nl = nu_p(l, 2)
    out = []
    for i in range(1, len(c)):
        bound = nl - nu_p(i, 2)
        actual = nu_p(c[i], 2)
        if actual < bound:
            out.append(BoundViolation(i, actual, bound))
    return out


def frobenius_twist(f: PowerSeries, p: int, m: int) -> PowerSeries:
    """``sum_i (c_i x**i)**(p**m)`` truncated to the precision of ``f``."""
    e = p ** m
    out = [_ZERO] * (f.precision + 1)
    for i, c in enumerate(f.coefficients):
        if c and i * e <= f.precision:
            out[i * e] = c ** e
    return PowerSeries._raw(out)


def frobenius_congruence_violations(f: PowerSeries, p: int, m: int, n: int) -> list[int]:
    """Exponents where ``f**(p**(m+n))`` and ``twist(f)**(p**n)`` differ modulo ``p**(n+1)``."""
    _check_p_integral(f.coefficients, p, "frobenius input")
    lhs = pow_int(f, p ** (m + n))
    rhs = pow_int(frobenius_twist(f, p, m), p ** n)
    return [i for i, (a, b) in enumerate(zip(lhs.coefficients, rhs.coefficients)) if nu_p(a - b, p) < n + 1]


def to_json(f: Series) -> object:
    """Power series: a JSON array of ``"num/den"`` strings for ``x**0 .. x**precision``.

    Laurent series: ``{"lowest_exponent": e, "coefficients": [...]}``.
    """
    if isinstance(f, PowerSeries):
        return [format_rational(c) for c in f.coefficients]
    return {
        "lowest_exponent": f.lowest_exponent,
        "precision": f.precision,
        "coefficients": [format_rational(c) for c in f.coefficients],
    }


def from_json(data: object) -> Series:
    if isinstance(data, list):
        return PowerSeries([Fraction(s) for s in data])
    if isinstance(data, dict):
        return LaurentSeries(
            [Fraction(s) for s in data["coefficients"]], data["lowest_exponent"], data.get("precision")
        )
    raise TypeError("expected a JSON array or object")

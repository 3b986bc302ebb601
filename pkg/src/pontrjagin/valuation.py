"""2-adic (and general p-adic) valuations and binary digit-sum combinatorics.

Rationals are plain :class:`fractions.Fraction` values, which are always kept
in lowest terms with a positive denominator.  Valuations live in the extended
integers: a finite ``int`` (possibly negative for non-integral rationals) or
:data:`INFINITY` for zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

__all__ = [
    "INFINITY",
    "ExtNat",
    "as_fraction",
    "nu_p",
    "nu2",
    "kappa_p",
    "kappa2",
    "nu2_factorial",
    "legendre_nu2_factorial",
    "nu2_binomial",
    "binomial_is_odd",
    "nu2_power_pm",
    "DigitInequality",
    "digit_inequality_holds",
    "is_p_integral",
    "congruent_mod_2power",
    "residue_mod_2power",
    "format_rational",
    "parse_rational",
]

#: Valuation of zero.  ``INFINITY + n == INFINITY`` and ``INFINITY > n``.
INFINITY = math.inf

ExtNat = Union[int, float]

RationalLike = Union[int, Fraction]


def as_fraction(q: RationalLike) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    raise TypeError(f"expected int or Fraction, got {type(q).__name__}")


def _nu_p_int(n: int, p: int) -> int:
    # n != 0
    n = abs(n)
    if p == 2:
        return (n & -n).bit_length() - 1
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def nu_p(q: RationalLike, p: int) -> ExtNat:
    """Exponent of the prime ``p`` in ``q``; ``INFINITY`` for ``q == 0``."""
    q = as_fraction(q)
    if q == 0:
        return INFINITY
    return _nu_p_int(q.numerator, p) - _nu_p_int(q.denominator, p)


def nu2(q: RationalLike) -> ExtNat:
    return nu_p(q, 2)


def kappa_p(n: int, p: int) -> int:
    """Sum of the base-``p`` digits of ``n >= 0``."""
    if n < 0:
        raise ValueError(f"digit sum needs n >= 0, got {n}")
    if p == 2:
        return bin(n).count("1")
    total = 0
    while n:
        n, d = divmod(n, p)
        total += d
    return total


def kappa2(n: int) -> int:
    return kappa_p(n, 2)


def nu2_factorial(n: int) -> int:
    """2-order of ``n!``, computed as ``n - kappa2(n)``."""
    if n < 0:
        raise ValueError(f"factorial needs n >= 0, got {n}")
    return n - kappa2(n)


def legendre_nu2_factorial(n: int) -> int:
    """Legendre's sum ``sum_{i>=1} floor(n / 2**i)``; independent oracle."""
    if n < 0:
        raise ValueError(f"factorial needs n >= 0, got {n}")
    total = 0
    n //= 2
    while n:
        total += n
        n //= 2
    return total


def nu2_binomial(n: int, k: int) -> int:
    """2-order of ``C(n, k)`` from the digit sums of ``k``, ``n - k`` and ``n``."""
    if n < 0 or k < 0:
        raise ValueError("binomial arguments must be nonnegative")
    if k > n:
        raise ValueError(f"binomial needs k <= n, got n={n}, k={k}")
    return kappa2(k) + kappa2(n - k) - kappa2(n)


def binomial_is_odd(n: int, k: int) -> bool:
    """Digit criterion: ``C(n, k)`` is odd iff no binary digit of ``k`` exceeds that of ``n``."""
    if k < 0 or k > n:
        raise ValueError(f"binomial needs 0 <= k <= n, got n={n}, k={k}")
    return k & ~n == 0


def nu2_power_pm(n: int, i: int) -> ExtNat:
    """2-order of ``n**i - (-1)**i`` for odd ``n >= 1`` and ``i >= 1``, via the closed formula.

    For ``n == 1`` and even ``i`` the difference vanishes and the result is ``INFINITY``.
    """
    if n < 1 or n % 2 == 0:
        raise ValueError(f"n must be a positive odd integer, got {n}")
    if i < 1:
        raise ValueError(f"i must be positive, got {i}")
    if i % 2:
        return _nu_p_int(n + 1, 2)
    if n == 1:
        return INFINITY
    return _nu_p_int(n * n - 1, 2) + _nu_p_int(i, 2) - 1


@dataclass(frozen=True)
class DigitInequality:
    values: tuple[int, ...]
    left: int
    right: int

    @property
    def holds(self) -> bool:
        return self.left >= self.right


def digit_inequality_holds(values: Sequence[int]) -> DigitInequality:
    """Evaluate ``nu2(i1) + kappa2(i1) + ... + kappa2(is) >= nu2(i1 + ... + is) + 1``.

    Requires ``i1 >= 1`` and all entries nonnegative.  The record is returned
    rather than a bare flag so sweeps can log any violation verbatim.
    """
    values = tuple(int(v) for v in values)
    if not values:
        raise ValueError("need at least one integer")
    if values[0] < 1:
        raise ValueError("the first integer must be positive")
    if any(v < 0 for v in values):
        raise ValueError("integers must be nonnegative")
    left = _nu_p_int(values[0], 2) + sum(kappa2(v) for v in values)
    right = _nu_p_int(sum(values), 2) + 1
    return DigitInequality(values, left, right)


def is_p_integral(q: RationalLike, p: int = 2) -> bool:
    return as_fraction(q).denominator % p != 0


def congruent_mod_2power(a: RationalLike, b: RationalLike, s: int) -> bool:
    """``a == b mod 2**s`` in the 2-local integers, i.e. ``nu2(a - b) >= s``."""
    return nu2(as_fraction(a) - as_fraction(b)) >= s


def residue_mod_2power(q: RationalLike, s: int) -> int:
    """Representative in ``[0, 2**s)`` of a 2-integral rational modulo ``2**s``."""
    q = as_fraction(q)
    if q.denominator % 2 == 0:
        raise ValueError(f"{q} is not 2-integral")
    mod = 1 << s
    return q.numerator * pow(q.denominator, -1, mod) % mod if s else 0


def format_rational(q: RationalLike) -> str:
    """Canonical ``"num/den"`` string (lowest terms, sign on the numerator)."""
    q = as_fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())

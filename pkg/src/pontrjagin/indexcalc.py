"""Coefficient functionals C and D, the index of a homotopy CP(2k), the
2-adic propositions as sweep verifiers, and the divisibility-by-16 verdict.

``C(j_1, ..., j_s)`` is the ``x**(2k)`` coefficient of
``g(j_1 x) ... g(j_s x) h(x)**(2k+1)``; ``D`` is the same functional with the
arguments given by multiplicity.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, prod
from typing import Iterator, Sequence

from .hirzebruch import BundleCoefficients, g_series, h_power, l_class_of_zeta, p1_of_zeta, tanh_series
from .reports import CheckRecord
from .series import LaurentSeries, PowerSeries, PrecisionError, divide, residue_change_of_variable, revert
from .valuation import INFINITY, ExtNat, nu2

__all__ = [
    "CSpec",
    "DSpec",
    "c_value",
    "c_direct",
    "c_substitution",
    "c_closed_form",
    "c_rational_function",
    "d_value",
    "generalized_binomial",
    "index_value",
    "index_direct",
    "index_expansion",
    "index_congruence_margin",
    "Verdict",
    "IndexReport",
    "divisibility_verdict",
    "proposition_records",
    "verify_valuation_propositions",
    "odd_c_residues",
    "SearchResult",
    "solution_search",
]


@dataclass(frozen=True)
class CSpec:
    k: int
    js: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        js = tuple(sorted(int(j) for j in self.js))
        if not js:
            raise ValueError("C needs at least one argument")
        if js[0] < 1 or js[-1] > self.k:
            raise ValueError(f"C arguments must lie in 1..{self.k}, got {js}")
        object.__setattr__(self, "js", js)

    @property
    def s(self) -> int:
        return len(self.js)


@dataclass(frozen=True)
class DSpec:
    k: int
    multiplicities: tuple[int, ...]

    def __post_init__(self) -> None:
        mult = tuple(int(i) for i in self.multiplicities)
        if any(i < 0 for i in mult):
            raise ValueError("multiplicities must be nonnegative")
        if sum(mult) < 1:
            raise ValueError("D needs total multiplicity >= 1")
        object.__setattr__(self, "multiplicities", mult)

    def to_cspec(self) -> CSpec:
        js = [j for j, i in enumerate(self.multiplicities, 1) for _ in range(i)]
        return CSpec(self.k, tuple(js))


def _check_precision(k: int, precision: int | None) -> int:
    if precision is None:
        return 2 * k
    if precision < 2 * k:
        raise PrecisionError(f"extracting x^{2 * k} needs precision >= {2 * k}, got {precision}")
    return precision


@lru_cache(maxsize=4096)
def _g_scaled_power(j: int, e: int, precision: int) -> PowerSeries:
    return g_series(precision).scale_variable(j) ** e


@lru_cache(maxsize=None)
def _c_direct_cached(k: int, js: tuple[int, ...], precision: int) -> Fraction:
    f = h_power(2 * k + 1, precision)
    for j, grp in itertools.groupby(js):
        f = f * _g_scaled_power(j, len(list(grp)), precision)
    return f.coefficient(2 * k)


def c_direct(spec: CSpec, precision: int | None = None) -> Fraction:
    """Expand the product of ``g(j x)`` series with ``h**(2k+1)`` and read off ``x**(2k)``."""
    return _c_direct_cached(spec.k, spec.js, _check_precision(spec.k, precision))


@lru_cache(maxsize=64)
def _artanh(precision: int) -> PowerSeries:
    return revert(tanh_series(precision), p=2)


def c_substitution(spec: CSpec, precision: int | None = None) -> Fraction:
    """Residue route: ``C = Res_x(prod g(j x) / tanh(x)**(2k+1))``, evaluated after ``x = artanh(y)``."""
    k = spec.k
    _check_precision(k, precision)
    n = 2 * k + 2
    t = tanh_series(n)
    integrand = divide(LaurentSeries([1], 0, n - 1), t) ** (2 * k + 1)
    g = g_series(n)
    for j in spec.js:
        integrand = integrand * g.scale_variable(j)
    res_x, res_y = residue_change_of_variable(integrand, _artanh(n))
    if res_x != res_y:
        raise ArithmeticError(f"residue changed under substitution: {res_x} != {res_y}")
    return res_y


def c_value(spec: CSpec, precision: int | None = None, route: str = "direct") -> Fraction:
    """``C(j_1, ..., j_s)`` by ``route`` in {"direct", "substitution", "both"}."""
    if route == "direct":
        return c_direct(spec, precision)
    if route == "substitution":
        return c_substitution(spec, precision)
    if route == "both":
        v1 = c_direct(spec, precision)
        v2 = c_substitution(spec, precision)
        if v1 != v2:
            raise ArithmeticError(f"C{spec.js} at k={spec.k}: direct {v1} != substitution {v2}")
        return v1
    raise ValueError(f"unknown route {route!r}")


def c_closed_form(s: int, k: int) -> Fraction:
    """``C(1, ..., 1)`` with ``s`` ones, from its closed form."""
    if s < 1 or k < 1:
        raise ValueError("s and k must be positive")
    if s > k:
        raise ValueError(f"closed form needs s <= k, got s={s}, k={k}")
    inner = sum(comb(k - s + i, i) * 3 ** (s - 1 - i) * 4 ** i for i in range(s))
    return Fraction(3 ** k + (-1) ** (k - s) * inner, 4 ** s * 3 ** k)


def c_rational_function(s: int, k: int) -> Fraction:
    """Coefficient of ``x**(k-s)`` in ``1 / ((3 + x)**s (1 - x))`` by negative-binomial expansion."""
    if s > k:
        return Fraction(0)
    return sum(
        (Fraction(comb(s + n - 1, n) * (-1) ** n, 3 ** (s + n)) for n in range(k - s + 1)),
        Fraction(0),
    )


def d_value(spec: DSpec, precision: int | None = None, route: str = "direct") -> Fraction:
    return c_value(spec.to_cspec(), precision, route)


def generalized_binomial(m: Fraction | int, i: int) -> Fraction:
    """``m (m-1) ... (m-i+1) / i!`` for any rational ``m``."""
    out = Fraction(1)
    for t in range(i):
        out = out * (m - t) / (t + 1)
    return out


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def index_direct(zeta: BundleCoefficients, precision: int | None = None) -> Fraction:
    """``(L(zeta) h(x)**(2k+1))_{2k}`` from the L-class product."""
    k = zeta.k
    prec = _check_precision(k, precision)
    return (l_class_of_zeta(zeta, prec) * h_power(2 * k + 1, prec)).coefficient(2 * k)


def index_expansion(zeta: BundleCoefficients, precision: int | None = None) -> Fraction:
    """``1 + sum_{s>=1} 8**s sum_{|i|=s} prod binom(m_j, i_j) D(i)``.

    Products of more than ``k`` factors ``g(j x)`` start beyond ``x**(2k)``,
    so the outer sum stops at ``s = k`` for every rational ``m``.
    """
    k = zeta.k
    prec = _check_precision(k, precision)
    binoms = [[generalized_binomial(m, i) for i in range(k + 1)] for m in zeta.m]
    total = Fraction(1)
    for s in range(1, k + 1):
        inner = Fraction(0)
        for vec in _compositions(s, k):
            coef = Fraction(1)
            for row, i in zip(binoms, vec):
                if i:
                    coef *= row[i]
                    if not coef:
                        break
            if coef:
                inner += coef * _d_cached(k, vec, prec)
        total += 8 ** s * inner
    return total


@lru_cache(maxsize=None)
def _d_cached(k: int, vec: tuple[int, ...], precision: int) -> Fraction:
    f = h_power(2 * k + 1, precision)
    for j, e in enumerate(vec, 1):
        if e:
            f = f * _g_scaled_power(j, e, precision)
    return f.coefficient(2 * k)


def index_value(zeta: BundleCoefficients, precision: int | None = None, route: str = "direct") -> Fraction:
    """Index of the homotopy CP(2k) determined by ``zeta``; ``route`` in {"direct", "expansion", "both"}."""
    if route == "direct":
        return index_direct(zeta, precision)
    if route == "expansion":
        return index_expansion(zeta, precision)
    if route == "both":
        v1 = index_direct(zeta, precision)
        v2 = index_expansion(zeta, precision)
        if v1 != v2:
            raise ArithmeticError(f"index routes disagree for m={zeta.m}: {v1} != {v2}")
        return v1
    raise ValueError(f"unknown route {route!r}")


def _margin(zeta: BundleCoefficients, index: Fraction) -> ExtNat:
    c1 = c_direct(CSpec(zeta.k, (1,)))
    return nu2(index - 1 - 8 * c1 * zeta.odd_sum())


def index_congruence_margin(zeta: BundleCoefficients, route: str = "direct") -> ExtNat:
    """``nu2(Index - 1 - 8 C(1) sum_{j odd} m_j)``; at least ``nu2(k) + 4``."""
    if not zeta.is_integral:
        raise ValueError("congruence margin is defined for integer m")
    return _margin(zeta, index_value(zeta, route=route))


class Verdict(str, enum.Enum):
    INDEX_NOT_ONE = "INDEX_NOT_ONE"
    DIVISIBLE_BY_16_CONFIRMED = "DIVISIBLE_BY_16_CONFIRMED"
    VIOLATION = "VIOLATION"


@dataclass(frozen=True)
class IndexReport:
    k: int
    r: int
    m: tuple[Fraction, ...]
    index_value: Fraction
    linear_term: Fraction
    congruence_margin: ExtNat
    odd_sum: Fraction
    p1: Fraction
    verdict: Verdict

    def to_record(self) -> CheckRecord:
        return CheckRecord(
            check="main-theorem",
            params={"k": self.k, "m": list(self.m)},
            passed=self.verdict is not Verdict.VIOLATION,
            value=self.index_value,
            nu2=self.congruence_margin,
            bound=self.r + 4,
            extra={
                "r": self.r,
                "linear_term": self.linear_term,
                "odd_sum": self.odd_sum,
                "p1": self.p1,
                "verdict": self.verdict.value,
            },
        )


def divisibility_verdict(zeta: BundleCoefficients) -> IndexReport:
    k = zeta.k
    index = index_direct(zeta)
    linear = sum((m * c_direct(CSpec(k, (j,))) for j, m in enumerate(zeta.m, 1)), Fraction(0))
    odd_sum = zeta.odd_sum()
    p1 = p1_of_zeta(zeta)
    if index != 1:
        verdict = Verdict.INDEX_NOT_ONE
    elif nu2(odd_sum) >= 1 and nu2(p1) >= 4:
        verdict = Verdict.DIVISIBLE_BY_16_CONFIRMED
    else:
        verdict = Verdict.VIOLATION
    return IndexReport(k, zeta.r, zeta.m, index, linear, _margin(zeta, index), odd_sum, p1, verdict)


def _record(check: str, k: int, js: Sequence[int], value: Fraction, bound: int, exact: bool = False,
            **params: object) -> CheckRecord:
    v = nu2(value)
    ok = v == bound if exact else v >= bound
    return CheckRecord(check, {"k": k, "js": list(js), **params}, ok, value, v, bound, "==" if exact else ">=")


def proposition_records(k: int, s_max: int) -> list[CheckRecord]:
    """Evaluate every C over sorted tuples with entries <= k and length <= s_max, checking each
    applicable 2-order statement.

    Checks: ``odd-j`` (equality with r), ``even-j`` (>= r+1), ``odd-difference``
    (>= r+3-s when one odd entry is swapped for another odd value),
    ``all-ones`` (>= r+2-2s), ``has-even`` (>= r+2-s) and ``general``
    (>= r+2-2s, s >= 2).
    """
    r = nu2(k)
    out: list[CheckRecord] = []
    for s in range(1, s_max + 1):
        for js in itertools.combinations_with_replacement(range(1, k + 1), s):
            c = c_direct(CSpec(k, js))
            if s == 1:
                j = js[0]
                if j % 2:
                    out.append(_record("odd-j", k, js, c, r, exact=True))
                else:
                    out.append(_record("even-j", k, js, c, r + 1))
            else:
                out.append(_record("general", k, js, c, r + 2 - 2 * s))
                if any(j % 2 == 0 for j in js):
                    out.append(_record("has-even", k, js, c, r + 2 - s))
            if all(j == 1 for j in js):
                out.append(_record("all-ones", k, js, c, r + 2 - 2 * s))
            for j in sorted({j for j in js if j % 2}):
                for j2 in range(j + 2, k + 1, 2):
                    other = list(js)
                    other[other.index(j)] = j2
                    diff = c - c_direct(CSpec(k, tuple(other)))
                    out.append(_record("odd-difference", k, js, diff, r + 3 - s, swap=[j, j2]))
    return out


def verify_valuation_propositions(k: int, s_max: int) -> list[CheckRecord]:
    """Violating records of :func:`proposition_records`; empty when every statement holds."""
    if k < 1 or s_max < 1:
        raise ValueError("k and s_max must be positive")
    return [rec for rec in proposition_records(k, s_max) if not rec.passed]


def odd_c_residues(k: int) -> list[tuple[int, Fraction, ExtNat, Fraction]]:
    """For odd ``j <= k``: ``(j, C(j), nu2 C(j), C(j) / 2**r)``.

    Documents the normalization behind the odd-j congruence by data: the unit
    parts ``C(j) / 2**r`` all agree with ``C(1) / 2**r`` modulo 4.
    """
    r = nu2(k)
    out = []
    for j in range(1, k + 1, 2):
        c = c_direct(CSpec(k, (j,)))
        out.append((j, c, nu2(c), c / 2 ** r))
    return out


@dataclass(frozen=True)
class SearchResult:
    k: int
    box: int
    solutions: tuple[BundleCoefficients, ...]
    checked: int
    partial: bool


def solution_search(k: int, box: int, budget: int = 2_000_000) -> SearchResult:
    """All integer ``m`` in ``[-box, box]**k`` whose index is exactly 1.

    At most ``budget`` vectors are examined; if the box is larger the result
    is flagged ``partial``.
    """
    if k < 1 or box < 0:
        raise ValueError("need k >= 1 and box >= 0")
    prec = 2 * k
    g = g_series(prec)
    base = h_power(2 * k + 1, prec)
    factors = {
        (j, e): (g.scale_variable(j) * 8 + 1) ** e for j in range(1, k + 1) for e in range(-box, box + 1)
    }
    sols = []
    checked = 0
    partial = False
    for m in itertools.product(range(-box, box + 1), repeat=k):
        if checked >= budget:
            partial = True
            break
        checked += 1
        f = prod((factors[j, e] for j, e in enumerate(m, 1) if e), start=base)
        if f.coefficient(2 * k) == 1:
            sols.append(BundleCoefficients.of(m))
    return SearchResult(k, box, tuple(sols), checked, partial)

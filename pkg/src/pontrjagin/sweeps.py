"""Named verification sweeps producing :class:`CheckRecord` lists.

Each lemma is split into independent tasks (usually one per ``k`` or per
chunk of indices) so the CLI can fan them out over a process pool; the
results are sorted before emission, so the report does not depend on the
number of workers.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Any, Callable

from . import hirzebruch as hz
from . import indexcalc as ic
from .reports import CheckRecord
from .series import (
    PowerSeries,
    LaurentSeries,
    compose,
    frobenius_congruence_violations,
    qth_root,
    residue_change_of_variable,
    revert,
)
from .valuation import (
    binomial_is_odd,
    congruent_mod_2power,
    digit_inequality_holds,
    kappa2,
    legendre_nu2_factorial,
    nu2,
    nu2_binomial,
    nu2_factorial,
    nu2_power_pm,
)

__all__ = ["SweepParams", "LEMMAS", "lemma_tasks", "run_task"]


@dataclass(frozen=True)
class SweepParams:
    i_max: int = 128
    k_max: int = 16
    s_max: int = 2
    box: int = 3
    seed: int = 0
    cases: int = 200


Task = tuple[str, dict[str, Any]]

# -- number theory ---------------------------------------------------------


def _factorial(lo: int, hi: int) -> list[CheckRecord]:
    out = []
    for n in range(lo, hi + 1):
        v, oracle = nu2_factorial(n), legendre_nu2_factorial(n)
        out.append(CheckRecord("nu2-factorial", {"n": n}, v == oracle, None, v, oracle, "=="))
    return out


def _binomial(n: int) -> list[CheckRecord]:
    bad = []
    for k in range(n + 1):
        c = comb(n, k)
        if nu2_binomial(n, k) != nu2(c) or binomial_is_odd(n, k) != (c % 2 == 1):
            bad.append(k)
    return [CheckRecord("nu2-binomial", {"n": n}, not bad, extra={"bad_k": bad} if bad else {})]


def _power_pm(n: int, i_max: int) -> list[CheckRecord]:
    bad = [i for i in range(1, i_max + 1) if nu2_power_pm(n, i) != nu2(n ** i - (-1) ** i)]
    return [CheckRecord("nu2-power-pm", {"n": n, "i_max": i_max}, not bad, extra={"bad_i": bad} if bad else {})]


def random_digit_tuples(cases: int, seed: int) -> list[tuple[int, ...]]:
    rng = random.Random(seed)
    out = []
    for _ in range(cases):
        s = rng.randint(1, 6)
        first = rng.randint(1, 1 << rng.randint(1, 16))
        out.append((first,) + tuple(rng.randint(0, 1 << rng.randint(1, 16)) for _ in range(s - 1)))
    return out


def _digit_inequality(cases: int, seed: int) -> list[CheckRecord]:
    bad = []
    for t in random_digit_tuples(cases, seed):
        rec = digit_inequality_holds(t)
        if not rec.holds:
            bad.append([list(t), rec.left, rec.right])
    return [CheckRecord("digit-inequality", {"cases": cases, "seed": seed}, not bad,
                        extra={"violations": bad} if bad else {})]


# -- coefficient families --------------------------------------------------


def _a_valuation(i_max: int) -> list[CheckRecord]:
    hz.h_series(2 * i_max)
    out = []
    for i in range(1, i_max + 1):
        v = hz.a(i)
        out.append(CheckRecord("a-valuation", {"i": i}, nu2(v) == kappa2(i) - 1, v, nu2(v), kappa2(i) - 1, "=="))
    return out


def _b_valuation(i_max: int) -> list[CheckRecord]:
    hz.g_series(2 * i_max)
    out = []
    for i in range(1, i_max + 1):
        v = hz.b(i)
        out.append(CheckRecord("b-valuation", {"i": i}, nu2(v) == kappa2(i) - 1, v, nu2(v), kappa2(i) - 1, "=="))
    return out


def _mismatches(f: PowerSeries, g: PowerSeries) -> list[int]:
    return [i for i, (x, y) in enumerate(zip(f.coefficients, g.coefficients)) if x != y]


def _dual_route(i_max: int) -> list[CheckRecord]:
    n = 2 * i_max
    h = hz.h_series(n)
    t = hz.tanh_series(n + 1)
    g = hz.g_series(n)
    pairs = {
        "h-division-vs-closed-form": (h, hz.h_series_closed_form(n)),
        "tanh-closed-form-vs-exp": (t, hz.tanh_series_from_exp(n + 1)),
        "g-ratio-vs-tanh": (g, hz.g_series_from_tanh(n)),
        "h-times-tanh-is-x": ((h * t.truncate(n)).truncate(n - 1) if n else h,
                              PowerSeries.variable(n).truncate(n - 1) if n else h),
        "g-times-3-plus-tanh2": (g * (t.truncate(n) ** 2 + 3), t.truncate(n) ** 2),
    }
    out = []
    for name, (f1, f2) in pairs.items():
        bad = _mismatches(f1, f2)
        out.append(CheckRecord("dual-route", {"identity": name, "degree": n}, not bad,
                               extra={"mismatched_degrees": bad} if bad else {}))
    return out


def _u_congruence(i_max: int) -> list[CheckRecord]:
    hz.g_series(2 * i_max)
    out = []
    for j in range(1, i_max + 1):
        uh = hz.h_normalized_derivative(j)
        if j == 1:
            out.append(CheckRecord("u-congruence-h", {"j": j}, uh == Fraction(1, 3), uh, relation="=="))
        else:
            out.append(CheckRecord("u-congruence-h", {"j": j}, congruent_mod_2power(uh, 1, 2), uh,
                                   nu2(uh - 1), 2, ">="))
        ug = hz.g_normalized_derivative(j)
        out.append(CheckRecord("u-congruence-g", {"j": j}, congruent_mod_2power(ug, 3, 2), ug,
                               nu2(ug - 3), 2, ">="))
    return out


def _adams(j_max: int) -> list[CheckRecord]:
    out = []
    for j in range(1, j_max + 1):
        T = hz.adams_T_polynomial(j)
        ok = hz.verify_adams_T(j) and T[0] == 0 and T[-1] == 1
        out.append(CheckRecord("adams-T", {"j": j}, ok, extra={"degree": len(T) - 1}))
    return out


# -- coefficient functionals -----------------------------------------------


def _closed_form(k: int) -> list[CheckRecord]:
    out = []
    for s in range(1, k + 1):
        closed = ic.c_closed_form(s, k)
        direct = ic.c_direct(ic.CSpec(k, (1,) * s))
        rational = ic.c_rational_function(s, k)
        out.append(CheckRecord("closed-form", {"k": k, "s": s}, closed == direct == rational, closed,
                               nu2(closed), None, "==", {"direct": direct, "rational_function": rational}))
    return out


def _c_routes(k: int, s_max: int) -> list[CheckRecord]:
    out = []
    for s in range(1, s_max + 1):
        for js in itertools.combinations_with_replacement(range(1, k + 1), s):
            spec = ic.CSpec(k, js)
            d, sub = ic.c_direct(spec), ic.c_substitution(spec)
            out.append(CheckRecord("c-routes", {"k": k, "js": list(js)}, d == sub, d, nu2(d), None, "==",
                                   {"substitution": sub}))
    return out


def _c1_valuation(k: int) -> list[CheckRecord]:
    closed = ic.c_closed_form(1, k)
    direct = ic.c_direct(ic.CSpec(k, (1,)))
    corollary = Fraction(3 ** k - (-1) ** k, 4 * 3 ** k)
    ok = closed == direct == corollary and nu2(closed) == nu2(k)
    return [CheckRecord("c1-valuation", {"k": k}, ok, closed, nu2(closed), nu2(k), "==")]


def _propositions(k: int, s_max: int) -> list[CheckRecord]:
    return ic.proposition_records(k, s_max)


def random_m_vectors(k: int, cases: int, box: int, seed: int) -> list[tuple[int, ...]]:
    rng = random.Random(f"{seed}:{k}")
    return [tuple(rng.randint(-box, box) for _ in range(k)) for _ in range(cases)]


EXPANSION_K_MAX = 8


def _index_congruence(k: int, cases: int, box: int, seed: int) -> list[CheckRecord]:
    out = []
    r = nu2(k)
    for m in random_m_vectors(k, cases, box, seed):
        zeta = hz.BundleCoefficients.of(m)
        route = "both" if k <= EXPANSION_K_MAX else "direct"
        margin = ic.index_congruence_margin(zeta, route=route)
        out.append(CheckRecord("index-congruence", {"k": k, "m": list(m)}, margin >= r + 4,
                               ic.index_direct(zeta), margin, r + 4, ">=", {"route": route}))
    return out


def _main_theorem_search(k: int, box: int) -> list[CheckRecord]:
    res = ic.solution_search(k, box)
    out = [ic.divisibility_verdict(z).to_record() for z in res.solutions]
    out.append(CheckRecord("solution-search", {"k": k, "box": box}, not res.partial,
                           extra={"solutions": len(res.solutions), "checked": res.checked}))
    return out


def _main_theorem_zero(k: int) -> list[CheckRecord]:
    return [ic.divisibility_verdict(hz.BundleCoefficients.zero(k)).to_record()]


# -- series engine ---------------------------------------------------------


def _rand_frac(rng: random.Random, odd_den: bool = False, nonzero: bool = False) -> Fraction:
    while True:
        den = rng.choice((1, 3, 5, 7, 9)) if odd_den else rng.randint(1, 6)
        v = Fraction(rng.randint(-6, 6), den)
        if v or not nonzero:
            return v


def random_reversible(rng: random.Random, precision: int, odd_den: bool = False) -> PowerSeries:
    c = [Fraction(0), _rand_frac(rng, odd_den, nonzero=True)]
    if odd_den:
        while nu2(c[1]) != 0:
            c[1] = _rand_frac(rng, odd_den, nonzero=True)
    c += [_rand_frac(rng, odd_den) for _ in range(precision - 1)]
    return PowerSeries(c, precision)


def _revert_cases(cases: int, seed: int) -> list[CheckRecord]:
    rng = random.Random(f"revert:{seed}")
    bad = []
    for n in range(cases):
        prec = rng.randint(1, 8)
        F = random_reversible(rng, prec, odd_den=n % 2 == 0)
        G = revert(F, p=2 if n % 2 == 0 else None)
        y = PowerSeries.variable(prec)
        if compose(F, G) != y or compose(G, F) != y:
            bad.append(n)
    return [CheckRecord("revert-compose", {"cases": cases, "seed": seed}, not bad,
                        extra={"failed_cases": bad} if bad else {})]


def _residue_cases(cases: int, seed: int) -> list[CheckRecord]:
    rng = random.Random(f"residue:{seed}")
    bad = []
    for n in range(cases):
        low = -rng.randint(1, 4)
        G = random_reversible(rng, rng.randint(-low, -low + 4))
        F = LaurentSeries([_rand_frac(rng) for _ in range(-low + 2)], low)
        lhs, rhs = residue_change_of_variable(F, G)
        if lhs != rhs:
            bad.append(n)
    return [CheckRecord("residue-change-of-variable", {"cases": cases, "seed": seed}, not bad,
                        extra={"failed_cases": bad} if bad else {})]


def _qth_root_cases(cases: int, seed: int) -> list[CheckRecord]:
    rng = random.Random(f"qth:{seed}")
    bad = []
    for n in range(cases):
        prec = rng.randint(1, 7)
        f = PowerSeries([1] + [_rand_frac(rng, odd_den=True) for _ in range(prec)], prec)
        q = rng.choice((1, 3, 5, 7, 9))
        phi = qth_root(f, q, p=2)
        if phi ** q != f or phi.coefficient(0) != 1:
            bad.append(n)
    return [CheckRecord("qth-root", {"cases": cases, "seed": seed}, not bad,
                        extra={"failed_cases": bad} if bad else {})]


def _frobenius_cases(cases: int, seed: int) -> list[CheckRecord]:
    rng = random.Random(f"frobenius:{seed}")
    bad = []
    for n in range(cases):
        total = rng.randint(0, 4)
        m = rng.randint(0, total)
        prec = rng.randint(1, 10)
        f = PowerSeries([rng.randint(-5, 5) for _ in range(prec + 1)], prec)
        if frobenius_congruence_violations(f, 2, m, total - m):
            bad.append(n)
    return [CheckRecord("frobenius-congruence", {"cases": cases, "seed": seed}, not bad,
                        extra={"failed_cases": bad} if bad else {})]


_TASKS: dict[str, Callable[..., list[CheckRecord]]] = {
    "factorial": _factorial,
    "binomial": _binomial,
    "power_pm": _power_pm,
    "digit_inequality": _digit_inequality,
    "a_valuation": _a_valuation,
    "b_valuation": _b_valuation,
    "dual_route": _dual_route,
    "u_congruence": _u_congruence,
    "adams": _adams,
    "closed_form": _closed_form,
    "c_routes": _c_routes,
    "c1_valuation": _c1_valuation,
    "propositions": _propositions,
    "index_congruence": _index_congruence,
    "main_search": _main_theorem_search,
    "main_zero": _main_theorem_zero,
    "revert": _revert_cases,
    "residue": _residue_cases,
    "qth_root": _qth_root_cases,
    "frobenius": _frobenius_cases,
}


def run_task(task: Task) -> list[CheckRecord]:
    name, kwargs = task
    return _TASKS[name](**kwargs)


def _chunks(lo: int, hi: int, size: int) -> list[tuple[int, int]]:
    return [(a, min(a + size - 1, hi)) for a in range(lo, hi + 1, size)]


SEARCH_K_MAX = 2


def _lemma_tasks(name: str, p: SweepParams) -> list[Task]:
    ks = range(1, p.k_max + 1)
    if name == "nu2-factorial":
        return [("factorial", {"lo": lo, "hi": hi}) for lo, hi in _chunks(0, p.i_max, 1024)]
    if name == "nu2-binomial":
        return [("binomial", {"n": n}) for n in range(p.i_max + 1)]
    if name == "nu2-power":
        return [("power_pm", {"n": n, "i_max": 64}) for n in range(1, 100, 2)]
    if name == "digit-inequality":
        return [("digit_inequality", {"cases": p.cases, "seed": p.seed})]
    if name == "a-valuation":
        return [("a_valuation", {"i_max": p.i_max})]
    if name == "b-valuation":
        return [("b_valuation", {"i_max": p.i_max})]
    if name == "dual-route":
        return [("dual_route", {"i_max": p.i_max})]
    if name == "u-congruence":
        return [("u_congruence", {"i_max": p.i_max})]
    if name == "adams-T":
        return [("adams", {"j_max": p.i_max})]
    if name == "closed-form":
        return [("closed_form", {"k": k}) for k in ks]
    if name == "c-routes":
        return [("c_routes", {"k": k, "s_max": p.s_max}) for k in ks]
    if name == "c1-valuation":
        return [("c1_valuation", {"k": k}) for k in ks]
    if name == "propositions":
        return [("propositions", {"k": k, "s_max": p.s_max}) for k in ks]
    if name == "index-congruence":
        return [("index_congruence", {"k": k, "cases": p.cases, "box": p.box, "seed": p.seed}) for k in ks]
    if name == "main-theorem":
        search = [("main_search", {"k": k, "box": p.box}) for k in range(1, min(p.k_max, SEARCH_K_MAX) + 1)]
        return search + [("main_zero", {"k": k}) for k in ks]
    if name == "series-properties":
        return [(t, {"cases": p.cases, "seed": p.seed}) for t in ("revert", "residue", "qth_root", "frobenius")]
    raise KeyError(name)


LEMMAS = (
    "nu2-factorial",
    "nu2-binomial",
    "nu2-power",
    "digit-inequality",
    "a-valuation",
    "b-valuation",
    "dual-route",
    "u-congruence",
    "adams-T",
    "closed-form",
    "c-routes",
    "c1-valuation",
    "propositions",
    "index-congruence",
    "main-theorem",
    "series-properties",
)


def lemma_tasks(name: str, params: SweepParams) -> list[Task]:
    """Tasks for one lemma name, or for every lemma when ``name == "all"``."""
    if name == "all":
        return [t for lemma in LEMMAS for t in _lemma_tasks(lemma, params)]
    if name not in LEMMAS:
        raise KeyError(name)
    return _lemma_tasks(name, params)


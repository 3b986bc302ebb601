"""Command-line front end.

Usage::

    pontrjagin verify --lemma a-valuation --i-max 128
    pontrjagin index --k 2 --m 1,0
    pontrjagin search --k 2 --box 3
    pontrjagin dump-series --i-max 32 --format csv

Exit codes: 0 all checks passed, 1 at least one violation, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import hirzebruch as hz
from . import indexcalc as ic
from .reports import CheckRecord, encode_valuation, records_to_csv, records_to_json, table_to_csv
from .series import to_json
from .sweeps import LEMMAS, SweepParams, lemma_tasks, run_task
from .valuation import format_rational, kappa2, nu2

log = logging.getLogger("pontrjagin")

COMMANDS = ("dump-series", "verify", "index", "search")
SERIES_KINDS = ("coefficients", "h", "g", "tanh")


class ConfigError(Exception):
    pass


@dataclass
class SweepConfig:
    command: str | None = None
    lemma: str = "all"
    series: str = "coefficients"
    i_max: int = 128
    k_max: int = 16
    s_max: int = 2
    box: int = 3
    k: int | None = None
    m: str | None = None
    precision: int | None = None
    format: str = "json"
    out: str | None = None
    jobs: int = 1
    seed: int = 0
    cases: int = 200

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; expected one of {', '.join(COMMANDS)}")
        for name in ("i_max", "k_max", "s_max", "jobs", "cases"):
            if getattr(self, name) < 1:
                raise ConfigError(f"--{name.replace('_', '-')} must be positive")
        if self.box < 0:
            raise ConfigError("--box must be nonnegative")
        if self.k is not None and self.k < 1:
            raise ConfigError("--k must be positive")
        if self.precision is not None and self.precision < 0:
            raise ConfigError("--precision must be nonnegative")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.command == "verify" and self.lemma != "all" and self.lemma not in LEMMAS:
            raise ConfigError(f"unknown lemma {self.lemma!r}; expected 'all' or one of {', '.join(LEMMAS)}")
        if self.command == "dump-series" and self.series not in SERIES_KINDS:
            raise ConfigError(f"unknown series {self.series!r}")
        if self.command in ("index", "search") and self.k is None and self.m is None:
            raise ConfigError(f"{self.command} needs --k")

    def params(self) -> SweepParams:
        return SweepParams(self.i_max, self.k_max, self.s_max, self.box, self.seed, self.cases)


_FIELDS = {f.name for f in fields(SweepConfig)}


def load_config_file(path: str) -> dict[str, Any]:
    """Flat JSON object whose keys are flag names (dashes or underscores)."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a flat JSON object")
    out = {}
    for key, value in data.items():
        name = key.replace("-", "_")
        if name not in _FIELDS:
            raise ConfigError(f"unknown config field {key!r}")
        if isinstance(value, (dict, list)) and name != "m":
            raise ConfigError(f"config field {key!r} must be a scalar")
        if name == "m" and isinstance(value, list):
            value = ",".join(str(v) for v in value)
        out[name] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pontrjagin", description="Exact verification of the index computation "
                                "for homotopy complex projective spaces.")
    p.add_argument("command_pos", nargs="?", metavar="COMMAND", help=" | ".join(COMMANDS))
    p.add_argument("--command", dest="command", help="alternative to the positional COMMAND")
    p.add_argument("--config", help="flat JSON file with the same keys as the flags")
    p.add_argument("--lemma", help=f"verify: 'all' or one of {', '.join(LEMMAS)}")
    p.add_argument("--series", help=f"dump-series: one of {', '.join(SERIES_KINDS)}")
    for flag in ("--i-max", "--k-max", "--s-max", "--box", "--k", "--precision", "--jobs", "--seed", "--cases"):
        p.add_argument(flag, type=int)
    p.add_argument("--m", help="comma-separated coefficients m_1..m_k (integers or a/b with b odd)")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def resolve_config(ns: argparse.Namespace) -> SweepConfig:
    values: dict[str, Any] = {}
    if ns.config:
        values.update(load_config_file(ns.config))
    for name in _FIELDS:
        v = getattr(ns, name, None)
        if v is not None:
            values[name] = v
    if ns.command_pos is not None:
        if ns.command is not None and ns.command != ns.command_pos:
            raise ConfigError("conflicting positional COMMAND and --command")
        values["command"] = ns.command_pos
    try:
        cfg = SweepConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    for name in ("i_max", "k_max", "s_max", "box", "jobs", "seed", "cases", "k", "precision"):
        v = getattr(cfg, name)
        if v is not None and (isinstance(v, bool) or not isinstance(v, int)):
            raise ConfigError(f"{name} must be an integer")
    cfg.validate()
    return cfg


def parse_m(text: str, k: int | None) -> hz.BundleCoefficients:
    try:
        m = [Fraction(part.strip()) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --m value {text!r}") from exc
    if k is not None and len(m) != k:
        raise ConfigError(f"--m has {len(m)} entries but --k is {k}")
    try:
        return hz.BundleCoefficients.of(m)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# -- commands --------------------------------------------------------------


def _run_tasks(tasks: list, jobs: int) -> list[CheckRecord]:
    if jobs == 1 or len(tasks) == 1:
        results = [run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_task, tasks))
    return [r for batch in results for r in batch]


def cmd_verify(cfg: SweepConfig) -> tuple[str, bool]:
    tasks = lemma_tasks(cfg.lemma, cfg.params())
    log.info("running %d tasks for %s", len(tasks), cfg.lemma)
    records = _run_tasks(tasks, cfg.jobs)
    meta = {"command": "verify", "lemma": cfg.lemma, "params": vars(cfg.params())}
    ok = all(r.passed for r in records)
    text = records_to_json(records, meta) if cfg.format == "json" else records_to_csv(records)
    return text, ok


def _report_dict(rep: ic.IndexReport, extra: dict[str, Any]) -> dict[str, Any]:
    return {
        "k": rep.k,
        "r": rep.r,
        "m": [format_rational(v) for v in rep.m],
        "index": format_rational(rep.index_value),
        "linear_term": format_rational(rep.linear_term),
        "congruence_margin": encode_valuation(rep.congruence_margin),
        "margin_bound": rep.r + 4,
        "odd_sum": format_rational(rep.odd_sum),
        "p1": format_rational(rep.p1),
        "verdict": rep.verdict.value,
        **extra,
    }


def cmd_index(cfg: SweepConfig) -> tuple[str, bool]:
    zeta = parse_m(cfg.m, cfg.k) if cfg.m is not None else hz.BundleCoefficients.zero(cfg.k)
    rep = ic.divisibility_verdict(zeta)
    extra: dict[str, Any] = {}
    if cfg.precision is not None:
        extra["index_at_precision"] = format_rational(ic.index_direct(zeta, max(cfg.precision, 2 * zeta.k)))
    if zeta.k <= 8:
        expansion = ic.index_expansion(zeta)
        extra["index_expansion"] = format_rational(expansion)
        extra["routes_agree"] = expansion == rep.index_value
    ok = rep.verdict is not ic.Verdict.VIOLATION and extra.get("routes_agree", True)
    if cfg.format == "csv":
        d = _report_dict(rep, extra)
        return table_to_csv(list(d), [[json.dumps(v) if isinstance(v, list) else v for v in d.values()]]), ok
    return json.dumps(_report_dict(rep, extra), indent=2, sort_keys=True) + "\n", ok


def cmd_search(cfg: SweepConfig) -> tuple[str, bool]:
    k = cfg.k if cfg.k is not None else len(cfg.m.split(","))
    res = ic.solution_search(k, cfg.box)
    reports = [ic.divisibility_verdict(z) for z in res.solutions]
    ok = all(r.verdict is not ic.Verdict.VIOLATION for r in reports)
    if cfg.format == "csv":
        rows = [[json.dumps([format_rational(v) for v in r.m]), format_rational(r.p1), r.verdict.value] for r in reports]
        return table_to_csv(["m", "p1", "verdict"], rows), ok
    doc = {
        "k": k,
        "box": cfg.box,
        "checked": res.checked,
        "partial": res.partial,
        "solutions": [_report_dict(r, {}) for r in reports],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n", ok


def cmd_dump_series(cfg: SweepConfig) -> tuple[str, bool]:
    n = cfg.precision if cfg.precision is not None else 2 * cfg.i_max
    if cfg.series == "coefficients":
        i_max = n // 2
        hz.g_series(2 * i_max)
        rows = []
        for i in range(0, i_max + 1):
            ai = hz.a(i)
            bi = hz.b(i) if i else Fraction(0)
            rows.append([i, ai, encode_valuation(nu2(ai)), bi, encode_valuation(nu2(bi)), kappa2(i)])
        header = ["i", "a_i", "nu2_a_i", "b_i", "nu2_b_i", "kappa2_i"]
        if cfg.format == "csv":
            return table_to_csv(header, rows), True
        doc = [dict(zip(header, [r[0], format_rational(r[1]), r[2], format_rational(r[3]), r[4], r[5]])) for r in rows]
        return json.dumps(doc, indent=2) + "\n", True
    f = {"h": hz.h_series, "g": hz.g_series, "tanh": hz.tanh_series}[cfg.series](n)
    if cfg.format == "csv":
        return table_to_csv(["degree", "coefficient"], list(enumerate(f.coefficients))), True
    return json.dumps(to_json(f)) + "\n", True


_DISPATCH = {"verify": cmd_verify, "index": cmd_index, "search": cmd_search, "dump-series": cmd_dump_series}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(ns)
        if cfg.out is not None:
            out_path = Path(cfg.out)
            if out_path.is_dir() or not out_path.parent.exists():
                raise ConfigError(f"cannot write to {cfg.out}")
        text, ok = _DISPATCH[cfg.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        try:
            Path(cfg.out).write_text(text)
        except OSError as exc:
            print(f"error: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return 2
    if not ok:
        print("violations found", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

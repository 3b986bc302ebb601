"""Check records and their JSON/CSV encodings.

Exact values are always written as ``"num/den"`` strings; an infinite
valuation is written as the string ``"inf"``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .valuation import INFINITY, ExtNat, format_rational

__all__ = ["CheckRecord", "encode_valuation", "records_to_json", "records_to_csv", "table_to_csv"]


def encode_valuation(v: ExtNat | None) -> int | str | None:
    if v is None:
        return None
    return "inf" if v == INFINITY else int(v)


def _encode(value: Any) -> Any:
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    if isinstance(value, float) and value == INFINITY:
        return "inf"
    return value


@dataclass(frozen=True)
class CheckRecord:
    """One checked instance: parameters, exact value, its 2-order, the bound and a verdict."""

    check: str
    params: dict[str, Any]
    passed: bool
    value: Fraction | None = None
    nu2: ExtNat | None = None
    bound: int | None = None
    relation: str = ">="
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        d = {
            "check": self.check,
            "params": _encode(self.params),
            "value": None if self.value is None else format_rational(self.value),
            "nu2": encode_valuation(self.nu2),
            "bound": self.bound,
            "relation": self.relation,
            "pass": self.passed,
        }
        if self.extra:
            d["extra"] = _encode(self.extra)
        return d

    def sort_key(self) -> str:
        return json.dumps([self.check, _encode(self.params)], sort_keys=True)


def _sorted(records: Iterable[CheckRecord]) -> list[CheckRecord]:
    return sorted(records, key=CheckRecord.sort_key)


def records_to_json(records: Iterable[CheckRecord], meta: dict[str, Any] | None = None) -> str:
    recs = _sorted(records)
    failures = sum(not r.passed for r in recs)
    doc = {
        "meta": _encode(meta or {}),
        "summary": {"checked": len(recs), "failed": failures, "passed": len(recs) - failures},
        "records": [r.to_dict() for r in recs],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def records_to_csv(records: Iterable[CheckRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check", "params", "value", "nu2", "relation", "bound", "pass"])
    for r in _sorted(records):
        d = r.to_dict()
        w.writerow([d["check"], json.dumps(d["params"], sort_keys=True), d["value"], d["nu2"],
                    d["relation"], d["bound"], d["pass"]])
    return buf.getvalue()


def table_to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_encode(v) for v in row])
    return buf.getvalue()

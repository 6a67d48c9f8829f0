"""Report JSON/CSV emission and regression snapshots."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

SNAPSHOT_VERSION = 1


def clean(value):
    """JSON-safe copy with floats rendered at 15 significant digits."""
    if isinstance(value, dict):
        return {str(k): clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return [clean(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [clean(float(value.real)), clean(float(value.imag))]
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return float(format(v, ".15g"))
    return value


def dumps(obj) -> str:
    return json.dumps(clean(obj), sort_keys=False, separators=(",", ":"), ensure_ascii=True)


def digest(rows: list[dict]) -> str:
    return hashlib.sha256(dumps(rows).encode()).hexdigest()


def _finite(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def summarize(rows: list[dict]) -> dict:
    rows = clean(rows)
    ratios = [r.get("ratio") for r in rows if _finite(r.get("ratio"))]
    return {
        "n": len(rows),
        "failures": sum(1 for r in rows if r.get("pass") is False),
        "max_ratio": max(ratios) if ratios else None,
        "snapshot_hash": digest(rows),
    }


def build_report(suite: str, config: dict, rows: list[dict]) -> dict:
    rows = clean(rows)
    return {"suite": suite, "config": clean(config), "rows": rows, "summary": summarize(rows)}


def report_json(report: dict) -> str:
    return dumps(report) + "\n"


def rows_csv(rows: list[dict]) -> str:
    """CSV mirror of the row list; nested values are JSON-encoded."""
    rows = clean(rows)
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        out = []
        for c in cols:
            v = r.get(c)
            if v is None:
                out.append("")
            elif isinstance(v, (dict, list)):
                out.append(json.dumps(v, separators=(",", ":")))
            else:
                out.append(v)
        w.writerow(out)
    return buf.getvalue()


# -- snapshots ------------------------------------------------------------------

@dataclass(frozen=True)
class Snapshot:
    suite: str
    config_hash: str
    summary: dict
    digest: str
    ratios: list

    def to_json(self) -> str:
        return json.dumps(
            {"version": SNAPSHOT_VERSION, "suite": self.suite, "config_hash": self.config_hash,
             "summary": self.summary, "digest": self.digest, "ratios": self.ratios},
            indent=1,
        ) + "\n"

    @classmethod
    def from_report(cls, report: dict, config_hash: str) -> Snapshot:
        ratios = [r.get("ratio") for r in report["rows"]]
        return cls(report["suite"], config_hash, report["summary"], report["summary"]["snapshot_hash"], ratios)

    @classmethod
    def load(cls, path: str) -> Snapshot:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        return cls(raw["suite"], raw["config_hash"], raw["summary"], raw["digest"], raw["ratios"])


@dataclass(frozen=True)
class Comparison:
    ok: bool
    config_match: bool
    digest_match: bool
    drifted: list  # (row index, old ratio, new ratio)
    messages: list

    def __str__(self) -> str:
        return "\n".join(self.messages)


def _drift(old, new, tol: float) -> bool:
    if old == new:
        return False
    if not (_finite(old) and _finite(new)):
        return True
    scale = max(abs(old), 1e-12)
    return abs(new - old) / scale > tol


def compare(old: Snapshot, new: Snapshot, tolerance: float) -> Comparison:
    msgs = []
    config_match = old.config_hash == new.config_hash
    if not config_match:
        msgs.append(f"config hash mismatch: {old.config_hash[:12]} != {new.config_hash[:12]}")
    if old.suite != new.suite:
        msgs.append(f"suite mismatch: {old.suite} != {new.suite}")
    drifted = []
    if len(old.ratios) != len(new.ratios):
        msgs.append(f"row count changed: {len(old.ratios)} -> {len(new.ratios)}")
    for i, (a, b) in enumerate(zip(old.ratios, new.ratios)):
        if _drift(a, b, tolerance):
            drifted.append((i, a, b))
    if drifted:
        msgs.append(f"{len(drifted)} ratio(s) drifted beyond {tolerance:.1%}")
    if new.summary.get("failures"):
        msgs.append(f"{new.summary['failures']} hard failure(s) in current run")
    digest_match = old.digest == new.digest
    ok = (config_match and old.suite == new.suite and len(old.ratios) == len(new.ratios)
          and not drifted and not new.summary.get("failures"))
    msgs.append("snapshot matches" + (" byte-for-byte" if digest_match else " within tolerance") if ok else "snapshot regression")
    return Comparison(ok, config_match, digest_match, drifted, msgs)

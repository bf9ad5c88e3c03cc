"""Deterministic report serialization.

Reports must be byte-identical across runs with the same configuration,
so floats are printed with a fixed 17-significant-digit format (enough
to round-trip IEEE doubles), dictionaries keep insertion order, and no
locale- or environment-dependent formatting is involved.
"""

from __future__ import annotations

import json as _json
import math

import numpy as np

__all__ = ["format_number", "dumps_json", "report_to_dict", "sweep_to_csv"]

CSV_HEADER = "lambda,sup_error,terms_used,cancellation_magnitude,tail_bound"


def format_number(x):
    """Fixed-format scalar: bools as JSON, ints as-is, floats at 17 digits."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    xf = float(x)
    if not math.isfinite(xf):
        raise ValueError("non-finite number in report")
    return "%.17g" % xf


def _write(obj, out, level):
    pad = "  " * level
    if obj is None:
        out.append("null")
    elif isinstance(obj, str):
        out.append(_json.dumps(obj))
    elif isinstance(obj, (bool, np.bool_, int, np.integer, float, np.floating)):
        out.append(format_number(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for i, (k, v) in enumerate(items):
            if not isinstance(k, str):
                raise TypeError("report keys must be strings")
            out.append("  " * (level + 1))
            out.append(_json.dumps(k))
            out.append(": ")
            _write(v, out, level + 1)
            out.append(",\n" if i + 1 < len(items) else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not len(obj):
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append("  " * (level + 1))
            _write(v, out, level + 1)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj):
    """Render a report structure as deterministic, indented JSON text."""
    out = []
    _write(obj, out, 0)
    out.append("\n")
    return "".join(out)


def report_to_dict(report):
    """FellerReport -> plain dict with a fixed key order."""
    checks = []
    for c in report.checks:
        checks.append(
            {
                "id": c.id,
                "pass": bool(c.passed),
                "max_defect": float(c.max_defect),
                "tolerance": float(c.tolerance),
                "witnesses": [
                    {"input": d, "defect": float(v)} for d, v in c.witnesses
                ],
            }
        )
    return {
        "process": report.process,
        "parameters": report.parameters,
        "grid": report.grid,
        "config": report.config,
        "checks": checks,
        "equivalence_consistent": bool(report.equivalence_consistent),
        "expected_feller": report.expected_feller,
        "verdict_matches_expected": report.verdict_matches_expected,
    }


def sweep_to_csv(rows):
    """Inversion sweep rows -> CSV text with the fixed header."""
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                (
                    format_number(float(r.lam)),
                    format_number(float(r.sup_error)),
                    str(int(r.terms_used)),
                    format_number(float(r.cancellation_magnitude)),
                    format_number(float(r.tail_bound)),
                )
            )
        )
    return "\n".join(lines) + "\n"

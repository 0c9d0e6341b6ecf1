"""Problem ingestion and report serialisation (JSON, CSV, SVG)."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict
from pathlib import Path
from typing import Iterable, Sequence

import jsonschema

from .core import ExpSum, ExpTerm
from .errors import InvalidInput

PROBLEM_SCHEMA = {
    "type": "object",
    "required": ["terms"],
    "properties": {
        "terms": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["re", "im", "freq"],
                "properties": {
                    "re": {"type": "number"},
                    "im": {"type": "number"},
                    "freq": {"type": "number"},
                },
            },
        }
    },
}

_EXTENDED = {"oneOf": [{"type": "number"}, {"enum": ["-inf", "+inf"]}]}

DECOMPOSITION_SCHEMA = {
    "type": "object",
    "required": ["regions", "strips"],
    "properties": {
        "regions": {
            "type": "array",
            "minItems": 2,
            "items": {
                "type": "object",
                "required": ["x_lo", "x_hi", "dominant"],
                "properties": {"x_lo": _EXTENDED, "x_hi": _EXTENDED,
                               "dominant": {"type": "integer", "minimum": 0}},
            },
        },
        "strips": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["x_lo", "x_hi", "j", "k"],
                "properties": {"x_lo": {"type": "number"}, "x_hi": {"type": "number"},
                               "j": {"type": "integer"}, "k": {"type": "integer"}},
            },
        },
    },
}

ZERO_COLUMNS = ("re", "im", "multiplicity", "strip_index", "residual_logmod", "method")
DENSITY_COLUMNS = ("r", "count", "expected", "deviation")


def parse_problem(data) -> ExpSum:
    try:
        jsonschema.validate(data, PROBLEM_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InvalidInput(f"malformed problem: {exc.message}") from exc
    return ExpSum(tuple(ExpTerm(complex(t["re"], t["im"]), t["freq"]) for t in data["terms"]))


def load_problem(path) -> ExpSum:
    """Read a problem file ``{"terms": [{"re", "im", "freq"}, ...]}``."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read problem file {path}: {exc}") from exc
    return parse_problem(data)


def problem_to_dict(f: ExpSum) -> dict:
    return {"terms": [{"re": t.coeff.real, "im": t.coeff.imag, "freq": t.freq} for t in f.terms]}


def _ext(x: float):
    if x == math.inf:
        return "+inf"
    if x == -math.inf:
        return "-inf"
    return float(x)


def decomposition_to_dict(dec) -> dict:
    return {
        "regions": [{"x_lo": _ext(r.x_lo), "x_hi": _ext(r.x_hi), "dominant": r.dominant}
                    for r in dec.regions],
        "strips": [{"x_lo": s.x_lo, "x_hi": s.x_hi, "j": s.left_dominant, "k": s.right_dominant}
                   for s in dec.strips],
    }


def validate_decomposition(data) -> None:
    """Raise :class:`InvalidInput` unless ``data`` is a well-formed decomposition report."""
    try:
        jsonschema.validate(data, DECOMPOSITION_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InvalidInput(f"invalid decomposition report: {exc.message}") from exc
    if len(data["strips"]) != len(data["regions"]) - 1:
        raise InvalidInput("strip count must be one less than region count")


def _plain(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, float) and not math.isfinite(obj):
        return _ext(obj) if math.isinf(obj) else None
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def to_json(obj) -> str:
    """Deterministic JSON for dataclasses, dicts and lists (complex as ``{re, im}``)."""
    if hasattr(obj, "__dataclass_fields__"):
        obj = asdict(obj)
    elif isinstance(obj, list) and obj and hasattr(obj[0], "__dataclass_fields__"):
        obj = [asdict(o) for o in obj]
    return json.dumps(_plain(obj), indent=2, allow_nan=False) + "\n"


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def zeros_to_csv(records) -> str:
    return _csv(ZERO_COLUMNS, ((repr(r.z.real), repr(r.z.imag), r.multiplicity, r.strip_index,
                                repr(r.residual_logmod), r.method) for r in records))


def density_to_csv(report) -> str:
    return _csv(DENSITY_COLUMNS, ((repr(r), c, repr(c - d), repr(d))
                                  for r, c, d in report.samples))


def read_zeros_csv(text: str) -> list[dict]:
    rows = list(csv.DictReader(io.StringIO(text)))
    for row in rows:
        for key in ("re", "im", "residual_logmod"):
            row[key] = float(row[key])
        row["multiplicity"] = int(row["multiplicity"])
        row["strip_index"] = int(row["strip_index"])
    return rows


def strip_svg(dec, zeros=(), y_window=None, width: int = 720, height: int = 420) -> str:
    """Zero-free regions and critical strips as vertical bands, optionally with zeros."""
    x_lo, x_hi = dec.span
    pad = max(0.5, 0.25 * (x_hi - x_lo))
    x0, x1 = x_lo - pad, x_hi + pad
    if zeros and y_window is None:
        ys = [r.z.imag for r in zeros]
        y_window = (min(ys) - 1.0, max(ys) + 1.0)
    y0, y1 = y_window or (-1.0, 1.0)
    top, bottom = 30, height - 30
    sx = lambda x: (x - x0) / (x1 - x0) * width
    sy = lambda y: bottom - (y - y0) / (y1 - y0) * (bottom - top)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
           f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>']
    for r in dec.regions:
        a, b = sx(max(r.x_lo, x0)), sx(min(r.x_hi, x1))
        out.append(f'<rect x="{a:.2f}" y="{top}" width="{max(b - a, 0):.2f}" '
                   f'height="{bottom - top}" fill="#e8f1fb"/>')
        out.append(f'<text x="{(a + b) / 2:.2f}" y="{top - 8}" text-anchor="middle">'
                   f'dominant {r.dominant}</text>')
    for i, s in enumerate(dec.strips):
        a, b = sx(s.x_lo), sx(s.x_hi)
        out.append(f'<rect x="{a:.2f}" y="{top}" width="{max(b - a, 1):.2f}" '
                   f'height="{bottom - top}" fill="#f6d7b0"/>')
        for x in (s.x_lo, s.x_hi):
            out.append(f'<line x1="{sx(x):.2f}" y1="{top}" x2="{sx(x):.2f}" y2="{bottom}" '
                       f'stroke="#a0522d" stroke-dasharray="4 3"/>')
            out.append(f'<text x="{sx(x):.2f}" y="{bottom + 14}" text-anchor="middle">'
                       f'{x:.4f}</text>')
        out.append(f'<text x="{(a + b) / 2:.2f}" y="{(top + bottom) / 2:.2f}" '
                   f'text-anchor="middle">&#923;({s.left_dominant},{s.right_dominant})</text>')
    for r in zeros:
        out.append(f'<circle cx="{sx(r.z.real):.2f}" cy="{sy(r.z.imag):.2f}" '
                   f'r="{2 + r.multiplicity}" fill="#1f4e79"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

"""CSV traces, coefficient dumps, SVG plots and run manifests."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from pathlib import Path

import numpy as np

from .config import atomic_write
from .wavefunction import FourierCoefficients


def fmt(value) -> str:
    """17 significant digits, locale independent; round-trips float64 exactly."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        return format(v, ".17g")
    return str(value)


def csv_text(columns: list[str], rows, footer: dict | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    for key, value in (footer or {}).items():
        buf.write(f"# {key} = {fmt(value)}\n")
    return buf.getvalue()


def write_csv(path, columns, rows, footer=None) -> Path:
    return atomic_write(path, csv_text(columns, rows, footer))


def read_csv(path) -> tuple[list[dict], dict]:
    """Rows as dicts of strings/floats plus the '# key = value' footer."""
    lines = Path(path).read_text().splitlines()
    body = [ln for ln in lines if not ln.startswith("#")]
    footer = {}
    for ln in lines:
        if ln.startswith("#") and "=" in ln:
            k, v = ln[1:].split("=", 1)
            footer[k.strip()] = _num(v.strip())
    rows = [{k: _num(v) for k, v in r.items()} for r in csv.DictReader(body)]
    return rows, footer


def _num(text: str):
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def write_coefficients(path, coeffs: FourierCoefficients) -> Path:
    rows = [("cos", n, v) for n, v in enumerate(coeffs.a_n)]
    rows += [("sin", n, v) for n, v in enumerate(coeffs.b_n)]
    return write_csv(path, ["family", "n", "value"], rows)


def read_coefficients(path) -> FourierCoefficients:
    rows, _ = read_csv(path)
    m = 1 + max(int(r["n"]) for r in rows)
    a, b = np.zeros(m), np.zeros(m)
    for r in rows:
        (a if r["family"] == "cos" else b)[int(r["n"])] = float(r["value"])
    return FourierCoefficients(a, b)


def svg_polyline(x, y, *, xlabel: str = "", ylabel: str = "", title: str = "",
                 y_range: tuple[float, float] | None = None) -> str:
    """Static 800x600 line plot; deterministic output for identical input."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    left, right, top, bottom = 80.0, 770.0, 40.0, 540.0
    x0, x1 = float(np.min(x)), float(np.max(x))
    y0, y1 = y_range if y_range else (float(np.min(y)), float(np.max(y)))
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    px = left + (x - x0) / (x1 - x0) * (right - left)
    py = bottom - (y - y0) / (y1 - y0) * (bottom - top)
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 800 600" width="800" height="600">',
        '<rect x="0" y="0" width="800" height="600" fill="white"/>',
        f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="black"/>',
    ]
    if y0 < 0 < y1:
        yz = bottom - (0 - y0) / (y1 - y0) * (bottom - top)
        parts.append(f'<line x1="{left}" y1="{yz:.2f}" x2="{right}" y2="{yz:.2f}" '
                     'stroke="gray" stroke-dasharray="4,4"/>')
    parts += [
        f'<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{pts}"/>',
        f'<text x="{left}" y="{bottom + 25}" font-size="12">{x0:.6g}</text>',
        f'<text x="{right}" y="{bottom + 25}" font-size="12" text-anchor="end">{x1:.6g}</text>',
        f'<text x="{left - 5}" y="{bottom}" font-size="12" text-anchor="end">{y0:.6g}</text>',
        f'<text x="{left - 5}" y="{top + 4}" font-size="12" text-anchor="end">{y1:.6g}</text>',
        f'<text x="{(left + right) / 2}" y="{bottom + 45}" font-size="14" '
        f'text-anchor="middle">{xlabel}</text>',
        f'<text x="20" y="{(top + bottom) / 2}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 20 {(top + bottom) / 2})">{ylabel}</text>',
        f'<text x="400" y="25" font-size="16" text-anchor="middle">{title}</text>',
        "</svg>",
    ]
    return "\n".join(parts) + "\n"


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(path, command: str, params: dict, outputs: list[Path], duration: float,
                   calibration_version: str | None, version: str) -> Path:
    data = {
        "command": command,
        "params": params,
        "seed": params.get("seed"),
        "calibration_version": calibration_version,
        "version": version,
        "duration_s": round(duration, 3),
        "outputs": {Path(p).name: sha256(p) for p in outputs},
    }
    return atomic_write(path, json.dumps(data, indent=2, sort_keys=True) + "\n")


def read_manifest(path) -> dict:
    return json.loads(Path(path).read_text())

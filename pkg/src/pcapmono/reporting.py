"""Serialization of scan results: CSV rows and JSON-ready summaries."""

from __future__ import annotations

import csv
import io
import json
import math

SCAN_COLUMNS = ("t", "level", "r", "area", "H", "grad_u", "int_H_grad", "int_grad_sq",
                "int_H_sq", "alpha", "beta", "gamma", "F", "dF_forward")


def _fmt(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"refusing to write non-finite value {x!r}")
    return "%.17e" % x


def scan_rows(report):
    """One row per grid point. dF_forward is F(t_{i+1}) - F(t_i), empty on the last row."""
    n = len(report.samples)
    for i, s in enumerate(report.samples):
        g = s.surface
        row = [s.t, g.level, g.r, g.area, g.H, g.grad_u, g.int_H_grad, g.int_grad_sq,
               g.int_H_sq, s.alpha, s.beta, s.gamma, s.F]
        cells = [_fmt(v) for v in row]
        cells.append(_fmt(float(report.dF[i])) if i < n - 1 else "")
        yield cells


def scan_csv_text(report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCAN_COLUMNS)
    writer.writerows(scan_rows(report))
    return buf.getvalue()


def dumps(obj) -> str:
    """Deterministic JSON; NaN and infinities are rejected."""
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"

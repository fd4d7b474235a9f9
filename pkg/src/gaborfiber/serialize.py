"""Window and report (de)serialization.

Window files are either CSV with header ``x,value_re,value_im`` on a uniform
grid, or JSON in the form produced by :meth:`WindowSpec.to_dict`.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import AlignmentError
from .spaces import TailModel, WindowSpec, builtin, from_samples

SCHEMA_VERSION = 1
CSV_HEADER = ("x", "value_re", "value_im")


def window_from_dict(d):
    """Inverse of :meth:`WindowSpec.to_dict`; missing parameters take builtin defaults."""
    kind = d["kind"]
    tail = TailModel(**d["cell_sups"]) if d.get("cell_sups") else None
    if kind == "samples":
        s = d["samples"]
        re = np.asarray(s["re"], dtype=float)
        im = np.asarray(s.get("im", np.zeros_like(re)), dtype=float)
        return from_samples(re + 1j * im, d["step"], start=d.get("start", 0), cell_sups=tail)
    base = builtin(kind)
    return WindowSpec(
        kind,
        {**base.params, **d.get("params", {})},
        shift=float(d.get("shift", 0.0)),
        dilation=float(d.get("dilation", 1.0)),
        cell_sups=tail if tail is not None else base.cell_sups,
    )


def read_window_csv(path):
    """Read a sampled window; the ``x`` column must be a uniform grid."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(c.strip() for c in rows[0]) != CSV_HEADER:
        raise ValueError(f"{path}: expected header {','.join(CSV_HEADER)}")
    data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float)
    if data.shape[0] < 2:
        raise ValueError(f"{path}: need at least two samples")
    x = data[:, 0]
    step = float(x[1] - x[0])
    if step <= 0 or not np.allclose(np.diff(x), step, rtol=1e-9, atol=1e-12):
        raise AlignmentError(f"{path}: x column is not a uniform increasing grid")
    start = x[0] / step
    if abs(start - round(start)) > 1e-6:
        raise AlignmentError(f"{path}: first abscissa {x[0]!r} is not on the grid of step {step!r}")
    return from_samples(data[:, 1] + 1j * data[:, 2], step, start=int(round(start)))


def write_window_csv(path, w):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(CSV_HEADER)
        x = (w.start + np.arange(w.samples.size)) * w.step
        for xi, v in zip(x, w.samples):
            out.writerow([repr(float(xi)), repr(float(v.real)), repr(float(v.imag))])


def parse_window(text):
    """Resolve a window argument: a ``.csv``/``.json`` path or ``name:key=val,...``."""
    p = Path(text)
    if p.suffix.lower() == ".csv":
        return read_window_csv(p)
    if p.suffix.lower() == ".json":
        with open(p) as fh:
            return window_from_dict(json.load(fh))
    name, _, rest = text.partition(":")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, sep, val = item.partition("=")
        if not sep:
            raise ValueError(f"malformed window parameter {item!r}; expected key=value")
        params[key.strip()] = int(val) if key.strip() == "bumps" else float(val)
    return builtin(name.strip(), **params)


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def report(command, config, result):
    """Versioned report envelope."""
    return _clean({"schema_version": SCHEMA_VERSION, "command": command, "config": config, "result": result})


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True)

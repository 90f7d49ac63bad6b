"""Flat-file output with 17 significant digits, and the matching readers."""

from __future__ import annotations

import csv
import enum
import json
import math
from pathlib import Path

import numpy as np


def fmt(x: float) -> str:
    return "%.17g" % float(x)


def _json(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, enum.Enum):
        return _json(obj.value, indent, level)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        s = fmt(x)
        return s if any(c in s for c in ".en") else s + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_json(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _json(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float at 17 significant digits; non-finite becomes ``null``."""
    return _json(obj, indent, 0) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj))


def read_json(path):
    return json.loads(Path(path).read_text())


def _write_rows(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([c if isinstance(c, str) else (str(c) if isinstance(c, (int, np.integer)) else fmt(c))
                        for c in row])


def write_trajectory_csv(path, traj) -> None:
    """Columns ``t,u1..,v1..,V,dissipation``."""
    size = traj.u.shape[1]
    header = ["t"] + [f"u{j}" for j in range(1, size + 1)] + [f"v{j}" for j in range(1, size + 1)]
    header += ["V", "dissipation"]
    V, D = traj.energy(), traj.dissipation()
    rows = ([traj.t[i], *traj.u[i], *traj.v[i], V[i], D[i]] for i in range(len(traj.t)))
    _write_rows(path, header, rows)


def write_discrete_csv(path, traj) -> None:
    """Columns ``p,u1..,deviation_max``."""
    size = traj.u.shape[1]
    header = ["p"] + [f"u{j}" for j in range(1, size + 1)] + ["deviation_max"]
    rows = ([int(traj.p[i]), *traj.u[i], traj.deviation_max[i]] for i in range(len(traj.p)))
    _write_rows(path, header, rows)


SWEEP_HEADER = ["param_value", "classification", "max_re_lambda_or_max_modulus", "paper_condition_agreement"]


def write_sweep_csv(path, rows) -> None:
    """``rows`` holds ``(value, classification, metric, (agree, applicable))`` tuples."""
    _write_rows(path, SWEEP_HEADER,
                ([v, c, m, f"{a[0]}/{a[1]}"] for v, c, m, a in rows))


def read_csv(path) -> dict[str, np.ndarray | list[str]]:
    """Column name to values; numeric columns come back as float arrays."""
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        cols: list[list[str]] = [[] for _ in header]
        for row in r:
            for c, v in zip(cols, row):
                c.append(v)
    out: dict = {}
    for name, vals in zip(header, cols):
        try:
            out[name] = np.array([float(v) for v in vals])
        except ValueError:
            out[name] = vals
    return out

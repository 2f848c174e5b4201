"""Reading and writing point clouds, graphs and labels."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .geometry import PointCloud
from .pseudograph import Pseudograph


class CloudFormatError(ValueError):
    def __init__(self, path, line: int | None, msg: str):
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {msg}")
        self.line = line


def fmt(x) -> str:
    """Numbers printed with 12 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def round_floats(obj):
    """Recursively round floats to 12 significant digits for JSON output."""
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return float(f"{v:.12g}") if math.isfinite(v) else str(v)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def guess_format(path) -> str:
    ext = Path(path).suffix.lower().lstrip(".")
    return {"swc": "swc", "json": "json", "dot": "dot", "gv": "dot"}.get(ext, "csv")


def _parse_row(fields, path, lineno) -> list[float]:
    try:
        vals = [float(s) for s in fields]
    except ValueError:
        raise CloudFormatError(path, lineno, f"non-numeric value in {fields!r}") from None
    if not all(math.isfinite(v) for v in vals):
        raise CloudFormatError(path, lineno, "non-finite value")
    return vals


def _read_csv(path) -> np.ndarray:
    rows, dim = [], None
    with open(path, newline="") as fh:
        for lineno, fields in enumerate(csv.reader(fh), start=1):
            fields = [s.strip() for s in fields]
            if not fields or all(s == "" for s in fields) or fields[0].startswith("#"):
                continue
            if not rows and dim is None:
                try:
                    [float(s) for s in fields]
                except ValueError:
                    dim = len(fields)  # header row
                    continue
            vals = _parse_row(fields, path, lineno)
            if dim is None:
                dim = len(vals)
            elif len(vals) != dim:
                raise CloudFormatError(path, lineno, f"expected {dim} columns, found {len(vals)}")
            rows.append(vals)
    if not rows:
        raise CloudFormatError(path, None, "no points found")
    return np.array(rows, dtype=float)


def _read_swc(path) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) < 7:
                raise CloudFormatError(path, lineno, f"SWC row needs 7 columns, found {len(fields)}")
            # id, type, x, y, z, radius, parent; only the coordinates are kept
            rows.append(_parse_row(fields[2:5], path, lineno))
    if not rows:
        raise CloudFormatError(path, None, "no points found")
    return np.array(rows, dtype=float)


def read_cloud(path, format: str | None = None) -> PointCloud:
    format = format or guess_format(path)
    if format == "csv":
        return PointCloud(_read_csv(path))
    if format == "swc":
        return PointCloud(_read_swc(path))
    raise ValueError(f"unsupported cloud format {format!r}")


def write_cloud(cloud, path, header: bool = False) -> None:
    pts = cloud.points if isinstance(cloud, PointCloud) else np.atleast_2d(np.asarray(cloud, dtype=float))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if header:
            w.writerow([f"x{k}" for k in range(pts.shape[1])])
        for p in pts:
            w.writerow([repr(float(v)) for v in p])  # repr round-trips exactly


def write_labeled_points(cloud, labels, degrees, path) -> None:
    pts = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([*(f"x{k}" for k in range(pts.shape[1])), "label", "degree"])
        for p, lab, deg in zip(pts, labels, degrees):
            w.writerow([*(fmt(v) for v in p), int(lab), int(deg)])


def write_graph(g: Pseudograph, path, format: str | None = None) -> None:
    format = format or guess_format(path)
    if format == "json":
        Path(path).write_text(json.dumps(g.to_dict()) + "\n")
    elif format == "dot":
        Path(path).write_text(g.to_dot())
    else:
        raise ValueError(f"unsupported graph format {format!r}")


def read_graph(path) -> Pseudograph:
    return Pseudograph.from_dict(json.loads(Path(path).read_text()))

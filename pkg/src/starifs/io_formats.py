"""Density-field encodings: CSV, JSON, and plain PGM.

CSV is the primary format: header ``index,x[,y],density``, one row per
grid point in row-major order, 17 significant digits so 64-bit values
round-trip losslessly.  JSON mirrors the same table.  PGM (plain P2,
maxval 255) quantizes density d to round-half-up(255 d) and is the only
lossy encoding.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

PGM_MAXVAL = 255
_PGM_VALUES_PER_LINE = 16


def _fmt(v):
    return f"{v:.17g}"


@dataclass
class DensityTable:
    """A density field with its grid coordinates, as written to disk."""

    columns: tuple
    rows: list

    @property
    def density(self):
        return np.array([r[-1] for r in self.rows])

    def grid_shape(self):
        """(width, height) of the row-major grid the table covers."""
        if "y" in self.columns:
            xs = {r[1] for r in self.rows}
            ys = {r[2] for r in self.rows}
            return len(xs), len(ys)
        return len(self.rows), 1


def table_from_space(space, density):
    if space.coords is None:
        raise ConfigError("density export needs a space with coordinates")
    dim = space.coords.shape[1]
    if dim == 1:
        columns = ("index", "x", "density")
        rows = [
            (i, float(space.coords[i, 0]), float(density[i])) for i in range(space.n)
        ]
    elif dim == 2:
        columns = ("index", "x", "y", "density")
        rows = [
            (i, float(space.coords[i, 0]), float(space.coords[i, 1]), float(density[i]))
            for i in range(space.n)
        ]
    else:
        raise ConfigError("density export supports 1-D and 2-D grids only")
    return DensityTable(columns, rows)


def write_density_csv(path, table):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(table.columns) + "\n")
        for row in table.rows:
            fh.write(",".join([str(int(row[0]))] + [_fmt(v) for v in row[1:]]) + "\n")


def read_density_csv(path):
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ConfigError(f"{path}: empty density file")
    columns = tuple(lines[0].split(","))
    if columns not in (("index", "x", "density"), ("index", "x", "y", "density")):
        raise ConfigError(f"{path}: unrecognized density header {','.join(columns)}")
    rows = []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != len(columns):
            raise ConfigError(f"{path}:{lineno}: expected {len(columns)} fields")
        try:
            rows.append(tuple([int(parts[0])] + [float(p) for p in parts[1:]]))
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    return DensityTable(columns, rows)


def write_density_json(path, table):
    payload = {"columns": list(table.columns), "rows": [list(r) for r in table.rows]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_density_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    try:
        columns = tuple(payload["columns"])
        rows = [tuple([int(r[0])] + [float(v) for v in r[1:]]) for r in payload["rows"]]
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise ConfigError(f"{path}: malformed density JSON ({exc})") from exc
    return DensityTable(columns, rows)


def write_density_pgm(path, table):
    """Plain P2, maxval 255, row-major; value = round-half-up(255 d)."""
    width, height = table.grid_shape()
    values = [int(math.floor(PGM_MAXVAL * r[-1] + 0.5)) for r in table.rows]
    lines = [f"P2", f"{width} {height}", str(PGM_MAXVAL)]
    for start in range(0, len(values), _PGM_VALUES_PER_LINE):
        lines.append(" ".join(str(v) for v in values[start : start + _PGM_VALUES_PER_LINE]))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_density_pgm(path):
    """Read a plain PGM back as a density table.

    PGM carries no geometry, so coordinates are reconstructed as a
    uniform unit grid; densities are value/maxval.
    """
    with open(path, "r", encoding="utf-8") as fh:
        tokens = []
        for ln in fh:
            body = ln.split("#", 1)[0]
            tokens.extend(body.split())
    if len(tokens) < 4 or tokens[0] != "P2":
        raise ConfigError(f"{path}: not a plain P2 PGM")
    try:
        width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
        values = [int(t) for t in tokens[4:]]
    except ValueError as exc:
        raise ConfigError(f"{path}: malformed PGM ({exc})") from exc
    if len(values) != width * height:
        raise ConfigError(f"{path}: PGM pixel count does not match its header")
    if width < 1 or height < 1 or maxval < 1:
        raise ConfigError(f"{path}: malformed PGM header")
    rows = []
    if height == 1:
        columns = ("index", "x", "density")
        xs = np.linspace(0.0, 1.0, width) if width > 1 else np.zeros(1)
        for i, v in enumerate(values):
            rows.append((i, float(xs[i]), v / maxval))
    else:
        columns = ("index", "x", "y", "density")
        xs = np.linspace(0.0, 1.0, width)
        ys = np.linspace(0.0, 1.0, height)
        for i, v in enumerate(values):
            rows.append((i, float(xs[i % width]), float(ys[i // width]), v / maxval))
    return DensityTable(columns, rows)


READERS = {"csv": read_density_csv, "json": read_density_json, "pgm": read_density_pgm}
WRITERS = {"csv": write_density_csv, "json": write_density_json, "pgm": write_density_pgm}


def sniff_format(path):
    name = str(path).lower()
    for ext in READERS:
        if name.endswith("." + ext):
            return ext
    raise ConfigError(f"{path}: cannot infer density format from the extension")


def write_report_json(path, report):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")

"""Text formats: function specs, grid/polygon/interval CSVs, sweep output.

A function spec file holds one record per line::

    family=gaussian mu=0 sigma=1
    family=grid file=f.csv

Blank lines and ``#`` comments are ignored. Grid files are two-column
``x,f`` CSVs with a header, written with 17 significant digits so that a
write/read cycle is exact.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Sequence

import numpy as np

from .bodies import Interval, Polygon
from .core.analytic import AnalyticDensity, Exponential, Gaussian, Laplace, RadialExp, Uniform
from .core.functions import PotentialGrid, make_grid_density
from .errors import EmptyInput, ParseError, ValidationError
from .stability import SWEEP_HEADER, SweepRecord, fit_exponent

FAMILY_KEYS = {
    "gaussian": ("mu", "sigma"),
    "uniform": ("a", "b"),
    "exponential": ("rate",),
    "laplace": ("mu", "scale"),
    "radialexp": ("n", "height", "rate"),
    "grid": ("file",),
}
ALIASES = {("laplace", "b"): "scale"}


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def parse_record(line: str, lineno: int | None = None, base: Path | None = None):
    """Parse one ``key=value`` record into an analytic density or a grid."""
    fields = {}
    for tok in line.split():
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}", lineno)
        k, v = tok.split("=", 1)
        if k in fields:
            raise ParseError(f"duplicate key {k!r}", lineno)
        fields[k] = v
    family = fields.pop("family", None)
    if family is None:
        raise ParseError("missing family=", lineno)
    if family not in FAMILY_KEYS:
        raise ParseError(f"unknown family {family!r}", lineno)
    fields = {ALIASES.get((family, k), k): v for k, v in fields.items()}
    unknown = set(fields) - set(FAMILY_KEYS[family])
    if unknown:
        raise ParseError(f"unknown keys for {family}: {', '.join(sorted(unknown))}", lineno)
    if family == "grid":
        if "file" not in fields:
            raise ParseError("grid needs file=", lineno)
        path = Path(fields["file"])
        if not path.is_absolute() and base is not None:
            path = base / path
        return read_grid_csv(path)
    try:
        params = {}
        for k, v in fields.items():
            params[k] = int(v) if k == "n" else float(v)
    except ValueError as exc:
        raise ParseError(f"bad number: {exc}", lineno) from None
    cls = {"gaussian": Gaussian, "uniform": Uniform, "exponential": Exponential, "laplace": Laplace, "radialexp": RadialExp}[family]
    try:
        return cls(**params)
    except ValidationError as exc:
        raise ParseError(str(exc), lineno) from None


def parse_function_specs(path) -> list:
    """All records of a spec file, in order."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(parse_record(line, i, path.parent))
    if not out:
        raise ParseError(f"{path} contains no function record")
    return out


def parse_function_spec(path):
    """The single record of a spec file (:class:`AnalyticDensity` or :class:`PotentialGrid`)."""
    recs = parse_function_specs(path)
    if len(recs) != 1:
        raise ParseError(f"{path} holds {len(recs)} records, expected one")
    return recs[0]


def materialize(obj, resolution: int = 1024) -> PotentialGrid:
    """Grid form of a parsed record; grids pass through unchanged."""
    if isinstance(obj, PotentialGrid):
        return obj
    if isinstance(obj, AnalyticDensity):
        return obj.to_grid(resolution)
    raise ValidationError(f"cannot materialise {type(obj).__name__}")


def read_grid_csv(path) -> PotentialGrid:
    x, f = _read_columns(path, ("x", "f"))
    return make_grid_density(x, f)


def write_grid_csv(grid: PotentialGrid, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("x,f\n")
        for x, v in zip(grid.nodes, grid.values):
            fh.write(f"{_fmt(x)},{_fmt(v)}\n")


def _read_columns(path, header: tuple[str, str]):
    path = Path(path)
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    with fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != list(header):
        raise ParseError(f"{path}: expected header {','.join(header)}", 1)
    a, b = [], []
    for i, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise ParseError(f"{path}: expected 2 columns", i)
        try:
            a.append(float(row[0]))
            b.append(float(row[1]))
        except ValueError:
            raise ParseError(f"{path}: bad number in {row!r}", i) from None
    if not a:
        raise ParseError(f"{path}: no data rows")
    return np.array(a), np.array(b)


def read_polygon_csv(path) -> Polygon:
    """Counterclockwise ``x,y`` vertex rows."""
    x, y = _read_columns(path, ("x", "y"))
    return Polygon(np.column_stack((x, y)))


def write_polygon_csv(poly: Polygon, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("x,y\n")
        for x, y in poly.vertices:
            fh.write(f"{_fmt(x)},{_fmt(y)}\n")


def read_intervals_csv(path) -> np.ndarray:
    """``a,b`` rows of an interval union."""
    a, b = _read_columns(path, ("a", "b"))
    return np.column_stack((a, b))


def read_body_csv(path):
    """A polygon (``x,y``) or a single interval (``a,b``) by header."""
    with open(path) as fh:
        head = fh.readline().strip()
    if head == "a,b":
        iv = read_intervals_csv(path)
        if len(iv) != 1:
            raise ParseError(f"{path}: a convex body needs exactly one interval")
        return Interval(float(iv[0, 0]), float(iv[0, 1]))
    return read_polygon_csv(path)


def write_sweep_csv(records: Sequence[SweepRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(SWEEP_HEADER) + "\n")
        for r in records:
            fh.write(",".join(r.row()) + "\n")


def read_sweep_csv(path) -> list[SweepRecord]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if tuple(rows[0]) != SWEEP_HEADER:
        raise ParseError(f"{path}: unexpected sweep header", 1)
    return [SweepRecord(r[0], *map(float, r[1:])) for r in rows[1:] if r]


def emit_plot_data(records: Sequence[SweepRecord], path) -> float:
    """Write ``ln l1  ln eps`` rows under a comment header carrying the fitted slope.

    Records with a non-positive distance or deficit have no logarithm and
    are skipped. Returns the slope (``nan`` when it cannot be fitted).
    """
    if len(records) == 0:
        raise EmptyInput("no records to plot")
    slope, used = fit_exponent(records)
    with open(path, "w") as fh:
        fh.write("# ln(l1) ln(epsilon)\n")
        fh.write(f"# fitted_slope={slope:.6f} fit_points={used}\n")
        for r in records:
            if r.l1 > 0 and r.epsilon > 0:
                fh.write(f"{math.log(r.l1):.17g} {math.log(r.epsilon):.17g}\n")
    return slope

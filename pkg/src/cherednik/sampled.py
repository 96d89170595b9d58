"""Sampled functions on grids and their CSV/JSON forms.

CSV files start with ``#`` comment lines holding a JSON echo of the run
configuration, followed by a fixed header row.  ``repr`` of floats is used
throughout so a reread file round-trips exactly.
"""

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "MEASURE_TAGS",
    "SampledFunction1D",
    "SpectralFunction",
    "TimeFreqFunction",
    "write_csv",
    "read_csv",
    "dumps_json",
]

MEASURE_TAGS = ("lebesgue", "weight_A", "plancherel_sigma")


def _as_grid(grid, name):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise DomainError(f"{name} must be strictly increasing")
    return grid


@dataclass
class SampledFunction1D:
    grid: np.ndarray
    values: np.ndarray
    measure_tag: str = "weight_A"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.grid = _as_grid(self.grid, "grid")
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.grid.shape:
            raise DomainError("grid and values must have the same length")
        if self.measure_tag not in MEASURE_TAGS:
            raise DomainError(f"measure_tag must be one of {MEASURE_TAGS}")

    def columns(self):
        return ("grid", "re", "im"), zip(self.grid, self.values.real, self.values.imag)

    def to_dict(self):
        return {
            "kind": "sampled1d",
            "measure_tag": self.measure_tag,
            "meta": self.meta,
            "grid": self.grid.tolist(),
            "re": self.values.real.tolist(),
            "im": self.values.imag.tolist(),
        }


@dataclass
class SpectralFunction:
    """Values of a transform on a lambda grid that avoids 0."""

    lambda_grid: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.lambda_grid = _as_grid(self.lambda_grid, "lambda_grid")
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.lambda_grid.shape:
            raise DomainError("lambda_grid and values must have the same length")
        if np.any(self.lambda_grid == 0):
            raise DomainError("lambda_grid must not contain 0")

    @property
    def grid(self):
        return self.lambda_grid

    def is_symmetric(self, tol=1e-12):
        g = self.lambda_grid
        return np.allclose(g, -g[::-1], atol=tol, rtol=0)

    def columns(self):
        return ("grid", "re", "im"), zip(self.lambda_grid, self.values.real, self.values.imag)

    def to_dict(self):
        return {
            "kind": "spectral",
            "meta": self.meta,
            "grid": self.lambda_grid.tolist(),
            "re": self.values.real.tolist(),
            "im": self.values.imag.tolist(),
        }


@dataclass
class TimeFreqFunction:
    """Samples of a function of (x, xi); ``values[i, j]`` is at ``(x_grid[i], xi_grid[j])``."""

    x_grid: np.ndarray
    xi_grid: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x_grid = _as_grid(self.x_grid, "x_grid")
        self.xi_grid = _as_grid(self.xi_grid, "xi_grid")
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.x_grid.size, self.xi_grid.size):
            raise DomainError("values must have shape (len(x_grid), len(xi_grid))")

    def columns(self):
        X, XI = np.meshgrid(self.x_grid, self.xi_grid, indexing="ij")
        return ("x", "xi", "re", "im"), zip(
            X.ravel(), XI.ravel(), self.values.real.ravel(), self.values.imag.ravel()
        )

    def to_dict(self):
        return {
            "kind": "timefreq",
            "meta": self.meta,
            "x_grid": self.x_grid.tolist(),
            "xi_grid": self.xi_grid.tolist(),
            "re": self.values.real.tolist(),
            "im": self.values.imag.tolist(),
        }


def _fmt(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_, int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_csv(obj, stream, header=None):
    """Write ``obj`` (anything with ``columns()``) as CSV to a text stream.

    ``header`` is a JSON-serialisable dict echoed as ``# `` lines.
    """
    if header is not None:
        for line in json.dumps(header, sort_keys=True, indent=1).splitlines():
            stream.write(f"# {line}\n")
    names, rows = obj.columns()
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(names)
    for row in rows:
        w.writerow([_fmt(v) for v in row])


def read_csv(source):
    """Read a CSV written by :func:`write_csv`.

    Returns ``(header_dict, columns)`` where ``columns`` maps column names to
    float arrays (string arrays for text columns).  ``source`` is a path or an open text stream.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, newline="") as fh:
            text = fh.read()
    else:
        text = source.read()
    comment, body = [], []
    for line in text.splitlines():
        (comment if line.startswith("#") else body).append(line)
    header = json.loads("\n".join(c[2:] for c in comment)) if comment else {}
    reader = csv.reader(io.StringIO("\n".join(body)))
    names = next(reader)
    rows = [r for r in reader if r]
    cols = {}
    for i, n in enumerate(names):
        raw = [r[i] for r in rows]
        try:
            cols[n] = np.array([float(v) for v in raw], dtype=float)
        except ValueError:
            cols[n] = np.array(raw, dtype=str)
    return header, cols


def dumps_json(obj, header=None):
    """JSON text for a sampled object or a plain dict, with optional header."""
    payload = obj.to_dict() if hasattr(obj, "to_dict") else obj
    if header is not None:
        payload = {"config": header, "data": payload}
    return json.dumps(payload, sort_keys=True, indent=1, default=_json_default)


def _json_default(v):
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    raise TypeError(f"not JSON serialisable: {type(v).__name__}")

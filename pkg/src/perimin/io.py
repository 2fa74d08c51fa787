"""Scenario files (JSON), raster masks (plain PGM) and exact-value JSON encoding.

Scenario document, version 1::

    {"version": 1, "capacity_scale": 65536,
     "builtin": {"name": "tripod", "params": {"k_max": 0, "h": "1/128"}}}

or a custom space made of grids::

    {"version": 1, "capacity_scale": 65536,
     "custom": {"grids": [[cols, rows, h, weights], ...],
                "atoms": [[grid, row, col, mass], ...],
                "gluings": [[[grid, row, col], [grid, row, col]], ...],
                "omega": [[run, run, ...], ...]}}

``weights`` is a number or a ``rows x cols`` nested list.  Rationals may be
given as strings such as ``"1/128"``.  Each ``omega`` entry run-length encodes
one grid in row-major order, alternating outside/inside and starting with an
outside run (which may be 0).
"""
from __future__ import annotations

import json
import os
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import scenarios
from .space import CapacityScaleError, GridSpec, Space, VertexSet, add_atom, build_grid, glue


class ScenarioFormatError(ValueError):
    """The scenario document is malformed or inconsistent."""


def parse_rational(value, what: str = "value") -> Fraction:
    if isinstance(value, bool):
        raise ScenarioFormatError(f"{what}: expected a number, got a boolean")
    try:
        if isinstance(value, float):
            if not np.isfinite(value):
                raise ValueError
            return Fraction(str(value))
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ScenarioFormatError(f"{what}: cannot read {value!r} as a rational number") from None


def exact(value: Fraction, scale: int) -> dict:
    """``{"numerator", "scale", "decimal"}``; ``scale`` grows when the value needs it."""
    value = Fraction(value)
    s = scale if (value * scale).denominator == 1 else np.lcm(scale, value.denominator).item()
    return {"numerator": int(value * s), "scale": int(s), "decimal": repr(float(value))}


def from_exact(doc: dict) -> Fraction:
    return Fraction(int(doc["numerator"]), int(doc["scale"]))


# ---------------------------------------------------------------------------
# scenario documents

def _builtin_param(value):
    if isinstance(value, str) or isinstance(value, float):
        return parse_rational(value)
    return value


def scenario_from_document(doc: dict) -> scenarios.Scenario:
    if not isinstance(doc, dict):
        raise ScenarioFormatError("scenario document must be a JSON object")
    if doc.get("version") != 1:
        raise ScenarioFormatError(f"unsupported scenario version {doc.get('version')!r}")
    scale = doc.get("capacity_scale")
    env = os.environ.get("PERIMIN_SCALE")
    if env:
        scale = int(env)
    if scale is not None and (isinstance(scale, bool) or not isinstance(scale, int) or scale <= 0):
        raise ScenarioFormatError("capacity_scale must be a positive integer")
    has_builtin, has_custom = "builtin" in doc, "custom" in doc
    if has_builtin == has_custom:
        raise ScenarioFormatError("give exactly one of 'builtin' or 'custom'")
    try:
        if has_builtin:
            entry = doc["builtin"]
            if not isinstance(entry, dict) or "name" not in entry:
                raise ScenarioFormatError("builtin needs a name")
            params = {k: _builtin_param(v) for k, v in (entry.get("params") or {}).items()}
            if scale is not None:
                params["scale"] = scale
            return scenarios.build(entry["name"], **params)
        return _custom(doc["custom"], scale)
    except ScenarioFormatError:
        raise
    except (TypeError, KeyError, ValueError) as exc:
        if isinstance(exc, CapacityScaleError):
            raise
        raise ScenarioFormatError(str(exc)) from exc


def _decode_runs(runs, size: int, what: str) -> np.ndarray:
    if not isinstance(runs, list) or any(isinstance(r, bool) or not isinstance(r, int) or r < 0 for r in runs):
        raise ScenarioFormatError(f"{what}: runs must be nonnegative integers")
    if sum(runs) != size:
        raise ScenarioFormatError(f"{what}: runs cover {sum(runs)} cells, grid has {size}")
    values = np.arange(len(runs)) % 2 == 1
    return np.repeat(values, runs)


def encode_runs(mask: np.ndarray) -> list[int]:
    """Inverse of the omega run-length encoding."""
    flat = np.asarray(mask, dtype=bool).ravel()
    runs, current, count = [], False, 0
    for v in flat:
        if v == current:
            count += 1
        else:
            runs.append(count)
            current, count = bool(v), 1
    runs.append(count)
    return runs


def _custom(doc: dict, scale) -> scenarios.Scenario:
    grids = doc.get("grids")
    if not isinstance(grids, list) or not grids:
        raise ScenarioFormatError("custom scenario needs a nonempty 'grids' list")
    pieces, shapes = [], []
    for g, entry in enumerate(grids):
        if not isinstance(entry, list) or len(entry) != 4:
            raise ScenarioFormatError(f"grid {g}: expected [cols, rows, h, weights]")
        cols, rows, h, weights = entry
        if isinstance(cols, bool) or isinstance(rows, bool) or not isinstance(cols, int) or not isinstance(rows, int) \
                or cols < 1 or rows < 1:
            raise ScenarioFormatError(f"grid {g}: cols and rows must be positive integers")
        h = parse_rational(h, f"grid {g} spacing")
        if h <= 0:
            raise ScenarioFormatError(f"grid {g}: spacing must be positive")
        if isinstance(weights, list):
            w = np.array([[float(parse_rational(x, f"grid {g} weight")) for x in row] for row in weights])
            if w.shape != (rows, cols):
                raise ScenarioFormatError(f"grid {g}: weights have shape {w.shape}, expected {(rows, cols)}")
        else:
            w = float(parse_rational(weights, f"grid {g} weight"))
        if np.any(np.asarray(w) < 0):
            raise ScenarioFormatError(f"grid {g}: weights must be nonnegative")
        pieces.append(build_grid(GridSpec(cols, rows, h, weights=w), scale=scale))
        shapes.append((rows, cols))

    def vertex(ref, what):
        if not isinstance(ref, list) or len(ref) != 3:
            raise ScenarioFormatError(f"{what}: expected [grid, row, col]")
        g, r, c = ref
        if not (0 <= g < len(shapes)) or not (0 <= r < shapes[g][0]) or not (0 <= c < shapes[g][1]):
            raise ScenarioFormatError(f"{what}: {ref} is outside the grids")
        return g, r, c

    groups = []
    for i, group in enumerate(doc.get("gluings") or []):
        refs = [vertex(ref, f"gluing {i}") for ref in group]
        groups.append([(g, r * shapes[g][1] + c) for g, r, c in refs])
    space = glue(pieces, groups)

    for i, atom in enumerate(doc.get("atoms") or []):
        if not isinstance(atom, list) or len(atom) != 4:
            raise ScenarioFormatError(f"atom {i}: expected [grid, row, col, mass]")
        g, r, c = vertex(atom[:3], f"atom {i}")
        mass = parse_rational(atom[3], f"atom {i} mass")
        if mass < 0:
            raise ScenarioFormatError(f"atom {i}: mass must be nonnegative")
        space = add_atom(space, int(space.charts[g][r, c]), mass)

    omega_runs = doc.get("omega")
    if not isinstance(omega_runs, list) or len(omega_runs) != len(shapes):
        raise ScenarioFormatError("omega needs one run-length list per grid")
    omega = np.zeros(space.n, dtype=bool)
    for g, runs in enumerate(omega_runs):
        rows, cols = shapes[g]
        mask = _decode_runs(runs, rows * cols, f"omega of grid {g}")
        omega[space.charts[g].ravel()[mask]] = True
    return scenarios.Scenario("custom", space, omega, {"grids": len(shapes)}, {})


def load_scenario(path) -> tuple[scenarios.Scenario, dict]:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ScenarioFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"{path} is not valid JSON: {exc}") from exc
    return scenario_from_document(doc), doc


# ---------------------------------------------------------------------------
# plain PGM masks, one image per chart

def _charts(space: Space) -> list[np.ndarray]:
    """Space charts plus one extra row for any vertex no chart shows."""
    charts = [np.asarray(c) for c in space.charts]
    covered = np.zeros(space.n, dtype=bool)
    for c in charts:
        covered[c.ravel()] = True
    if not covered.all():
        charts.append(np.flatnonzero(~covered).reshape(1, -1))
    return charts


def write_masks(space: Space, mask: VertexSet, prefix) -> list[Path]:
    """Write ``{prefix}-chart{i}.pgm`` (0 outside, 255 inside); row 0 of a chart is the bottom line."""
    mask = np.asarray(mask, dtype=bool)
    Path(f"{prefix}-").parent.mkdir(parents=True, exist_ok=True)
    out = []
    for i, chart in enumerate(_charts(space)):
        img = np.where(mask[chart], 255, 0)[::-1]
        rows, cols = img.shape
        lines = ["P2", f"{cols} {rows}", "255"] + [" ".join(map(str, r)) for r in img]
        path = Path(f"{prefix}-chart{i}.pgm")
        path.write_text("\n".join(lines) + "\n")
        out.append(path)
    return out


def _read_pgm(path: Path) -> np.ndarray:
    tokens = []
    for line in path.read_text().splitlines():
        tokens += line.split("#", 1)[0].split()
    if not tokens or tokens[0] != "P2":
        raise ScenarioFormatError(f"{path}: not a plain (P2) PGM file")
    try:
        cols, rows, maxval = (int(t) for t in tokens[1:4])
        data = np.array([int(t) for t in tokens[4:]], dtype=np.int64)
    except ValueError:
        raise ScenarioFormatError(f"{path}: malformed PGM header or pixel data") from None
    if data.size != rows * cols or maxval <= 0:
        raise ScenarioFormatError(f"{path}: expected {rows * cols} pixels, found {data.size}")
    return data.reshape(rows, cols)[::-1] > 0


def read_masks(space: Space, prefix) -> VertexSet:
    """Inverse of :func:`write_masks`; every vertex must read the same value on all charts."""
    seen = np.zeros(space.n, dtype=np.int8)
    value = np.zeros(space.n, dtype=bool)
    for i, chart in enumerate(_charts(space)):
        path = Path(f"{prefix}-chart{i}.pgm")
        if not path.exists():
            raise ScenarioFormatError(f"missing mask file {path}")
        img = _read_pgm(path)
        if img.shape != chart.shape:
            raise ScenarioFormatError(f"{path}: image is {img.shape}, chart is {chart.shape}")
        ids, bits = chart.ravel(), img.ravel()
        clash = (seen[ids] == 1) & (value[ids] != bits)
        if clash.any():
            raise ScenarioFormatError(f"{path}: vertex {int(ids[clash][0])} disagrees with another chart")
        value[ids] = bits
        seen[ids] = 1
    return value

"""File formats.

* system JSON: ``{"A": [[...]], "C": [[...]]}``; each entry is a number or
  an ``[re, im]`` pair.
* trajectory CSV: header ``t,s1,...,sN``, one row per time step; entries
  with a nonzero imaginary part are written as ``re+imj``.
* polynomial-matrix JSON: ``{"R": [[coeffs, ...], ...]}`` (a bare grid is
  accepted too), coefficients in ascending degree, each a number or pair.
* attack sidecar JSON: ``{"seed", "weight", "support", "magnitude", ...}``.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from secidx.model import DEFAULT_TOL, SystemModel, ToleranceConfig, Trajectory, make_system


class FormatError(ValueError):
    """Malformed input file."""


def decode_scalar(v) -> complex:
    if isinstance(v, bool):
        raise FormatError(f"not a number: {v!r}")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(
        isinstance(p, (int, float)) and not isinstance(p, bool) for p in v
    ):
        return complex(v[0], v[1])
    raise FormatError(f"expected a number or [re, im] pair, got {v!r}")


def encode_scalar(z: complex):
    z = complex(z)
    if z.imag == 0:
        return z.real
    return [z.real, z.imag]


def encode_vector(x) -> list:
    return [encode_scalar(z) for z in np.asarray(x).reshape(-1)]


def decode_matrix(rows, name: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise FormatError(f"{name} must be a nonempty array of arrays")
    if len({len(r) for r in rows}) != 1:
        raise FormatError(f"{name} rows have different lengths")
    return np.array([[decode_scalar(v) for v in r] for r in rows], dtype=complex)


def encode_matrix(M) -> list:
    return [[encode_scalar(z) for z in row] for row in np.asarray(M)]


def parse_system(obj: dict, tol: ToleranceConfig = DEFAULT_TOL) -> SystemModel:
    if not isinstance(obj, dict) or "A" not in obj or "C" not in obj:
        raise FormatError('system file needs keys "A" and "C"')
    return make_system(decode_matrix(obj["A"], "A"), decode_matrix(obj["C"], "C"), tol)


def read_system(path, tol: ToleranceConfig = DEFAULT_TOL) -> SystemModel:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    return parse_system(obj, tol)


def write_system(path, sys: SystemModel) -> None:
    obj = {"A": encode_matrix(sys.A), "C": encode_matrix(sys.C)}
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")


def format_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    return f"{z.real!r}{z.imag:+.17g}j"


def parse_complex(s: str) -> complex:
    try:
        return complex(s.strip().replace(" ", ""))
    except ValueError as exc:
        raise FormatError(f"bad numeric entry {s!r}") from exc


def write_trajectory(path, traj: Trajectory) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t"] + [f"s{i}" for i in range(1, traj.N + 1)])
        for t in range(traj.T):
            w.writerow([t] + [format_complex(z) for z in traj.samples[:, t]])


def read_trajectory(path) -> Trajectory:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise FormatError(f"{path}: empty trajectory file")
    header = [h.strip() for h in rows[0]]
    N = len(header) - 1
    if N < 1 or header[0] != "t" or header[1:] != [f"s{i}" for i in range(1, N + 1)]:
        raise FormatError(f"{path}: header must be t,s1,...,sN")
    body = rows[1:]
    if not body:
        raise FormatError(f"{path}: no samples")
    samples = np.empty((N, len(body)), dtype=complex)
    for k, r in enumerate(body):
        if len(r) != N + 1:
            raise FormatError(f"{path}: row {k + 2} has {len(r)} fields, expected {N + 1}")
        samples[:, k] = [parse_complex(v) for v in r[1:]]
    return Trajectory(samples)


def parse_poly_matrix(obj):
    from secidx.polymat import PolyMatrix

    grid = obj.get("R") if isinstance(obj, dict) else obj
    if not isinstance(grid, list) or not grid or not all(isinstance(r, list) and r for r in grid):
        raise FormatError("polynomial matrix must be a nonempty grid of coefficient arrays")
    if len({len(r) for r in grid}) != 1:
        raise FormatError("polynomial matrix rows have different lengths")
    entries = []
    for row in grid:
        out = []
        for cell in row:
            if not isinstance(cell, list) or not cell:
                raise FormatError(f"entry must be a nonempty coefficient array, got {cell!r}")
            out.append([decode_scalar(c) for c in cell])
        entries.append(out)
    return PolyMatrix.from_entries(entries)


def read_poly_matrix(path):
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    return parse_poly_matrix(obj)


def write_poly_matrix(path, R) -> None:
    Path(path).write_text(json.dumps({"R": R.to_entries()}, indent=2) + "\n")


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True)

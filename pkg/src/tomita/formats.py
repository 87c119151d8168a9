"""Readers and writers for matrix, block-vector, spectrum and target files.

Matrix JSON:   {"n": int, "entries": [[[re, im], ...], ...]}   (row-major)
Matrix CSV:    one row per line, cells like "1.5-2j"
Block JSON:    {"n": int, "N": int, "blocks": [[matrix, ...], ...]}
Spectrum JSON: {"factor_type": str, "head": [[mu, m], ...],
                "tail": {"ratio": r, "mult": m, "start": mu0} | null}
Target JSON:   {"lattice_base": b, "mult": "inf"} or {"entries": [[lam, n], ...]}
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .block_factor import BlockVector
from .spectral_classifier import DeltaSpectrum, GeometricTail, SpectralData


class FormatError(ValueError):
    pass


def _load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def matrix_to_obj(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "n": int(m.shape[0]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in m],
    }


def matrix_from_obj(obj) -> np.ndarray:
    entries = obj["entries"] if isinstance(obj, dict) else obj
    try:
        a = np.array([[complex(re, im) for re, im in row] for row in entries], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad matrix entries: {exc}") from exc
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise FormatError(f"matrix must be square, got shape {a.shape}")
    if isinstance(obj, dict) and "n" in obj and obj["n"] != a.shape[0]:
        raise FormatError(f"declared n={obj['n']} but entries have size {a.shape[0]}")
    if not np.all(np.isfinite(a)):
        raise FormatError("matrix has non-finite entries")
    return a


def _format_cell(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def read_matrix(path) -> np.ndarray:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        try:
            with open(path, newline="") as fh:
                rows = [[complex(c.strip().replace(" ", "")) for c in row] for row in csv.reader(fh) if row]
        except ValueError as exc:
            raise FormatError(f"{path}: bad CSV cell ({exc})") from exc
        return matrix_from_obj([[[z.real, z.imag] for z in row] for row in rows])
    try:
        return matrix_from_obj(_load_json(path))
    except KeyError as exc:
        raise FormatError(f"{path}: missing key {exc}") from exc


def write_matrix(path, m: np.ndarray):
    path = Path(path)
    m = np.asarray(m, dtype=complex)
    if path.suffix.lower() == ".csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in m:
            writer.writerow([_format_cell(z) for z in row])
        path.write_text(buf.getvalue())
    else:
        path.write_text(json.dumps(matrix_to_obj(m)) + "\n")


def block_vector_to_obj(u: BlockVector) -> dict:
    return {
        "n": u.n,
        "N": u.N,
        "blocks": [[matrix_to_obj(u.blocks[i, j]) for j in range(u.N)] for i in range(u.N)],
    }


def read_block_vector(path) -> BlockVector:
    obj = _load_json(path)
    try:
        blocks = np.array([[matrix_from_obj(b) for b in row] for row in obj["blocks"]])
        n, big_n = obj["n"], obj["N"]
    except KeyError as exc:
        raise FormatError(f"{path}: missing key {exc}") from exc
    if blocks.shape != (big_n, big_n, n, n):
        raise FormatError(f"{path}: blocks have shape {blocks.shape}, expected {(big_n, big_n, n, n)}")
    return BlockVector(blocks)


def write_block_vector(path, u: BlockVector):
    Path(path).write_text(json.dumps(block_vector_to_obj(u)) + "\n")


def spectrum_from_obj(obj: dict, normalize: bool = True) -> SpectralData:
    try:
        tail = obj.get("tail")
        gt = None
        if tail is not None:
            gt = GeometricTail(ratio=float(tail["ratio"]), mult=float(tail["mult"]), start=float(tail["start"]))
        head = [(float(mu), float(m)) for mu, m in obj.get("head", [])]
        return SpectralData.build(obj["factor_type"], head, gt, normalize=normalize)
    except KeyError as exc:
        raise FormatError(f"missing key {exc}") from exc


def read_spectrum(path, normalize: bool = True) -> SpectralData:
    return spectrum_from_obj(_load_json(path), normalize=normalize)


def write_spectrum(path, s: SpectralData):
    Path(path).write_text(json.dumps(s.to_dict()) + "\n")


def _mult(x) -> float:
    if isinstance(x, str) and x.lower() in ("inf", "infinity"):
        return math.inf
    return float(x)


def target_from_obj(obj: dict) -> DeltaSpectrum:
    if "lattice_base" in obj:
        return DeltaSpectrum.lattice(float(obj["lattice_base"]), _mult(obj.get("mult", "inf")))
    try:
        entries = [(float(l), _mult(n)) for l, n in obj["entries"]]
    except KeyError as exc:
        raise FormatError(f"missing key {exc}") from exc
    return DeltaSpectrum(entries=tuple(sorted(entries)), approximate=bool(obj.get("approximate", False)))


def read_target(path) -> DeltaSpectrum:
    return target_from_obj(_load_json(path))

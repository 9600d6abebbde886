"""JSON schemas shared by the library and the CLI.

Matrix: {"n": int, "labels": [str]?, "entries": [[row-major floats]]}
Measure: {"n": int, "weights": [floats]}
SpectralData: {"blocks": [{"re","im","m"}], "U_re", "U_im", "residual"}
DualityFunction: {"nhat", "n", "D", "residual", "rank"}
IntertwiningOperator: matrix schema with "rows" for rectangular shapes and a
"stochastic" flag.

Floats round-trip exactly: json emits the shortest decimal representation.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import Measure, RateMatrix, StateSpace
from .duality import DualityFunction
from .errors import ParseError
from .intertwining import IntertwiningOperator
from .spectral import JordanBlock, JordanStructure, SpectralData


def _require(obj: dict, key: str):
    if key not in obj:
        raise ParseError(f"missing key {key!r}")
    return obj[key]


def matrix_to_json(m: RateMatrix) -> dict:
    out = {"n": m.n, "entries": np.asarray(m.entries).tolist()}
    if m.space.labels is not None:
        out["labels"] = list(m.space.labels)
    return out


def matrix_from_json(obj: dict) -> RateMatrix:
    if not isinstance(obj, dict):
        raise ParseError("matrix document must be a JSON object")
    n = _require(obj, "n")
    entries = np.asarray(_require(obj, "entries"), dtype=float)
    if entries.ndim != 2 or entries.shape != (n, n):
        raise ParseError(f"entries shape {entries.shape} does not match n={n}")
    labels = obj.get("labels")
    return RateMatrix.from_entries(entries, labels=labels)


def measure_to_json(mu: Measure) -> dict:
    return {"n": mu.space.n, "weights": np.asarray(mu.weights).tolist()}


def measure_from_json(obj: dict) -> Measure:
    if not isinstance(obj, dict):
        raise ParseError("measure document must be a JSON object")
    n = _require(obj, "n")
    weights = np.asarray(_require(obj, "weights"), dtype=float)
    if weights.shape != (n,):
        raise ParseError(f"weights shape {weights.shape} does not match n={n}")
    try:
        return Measure.from_weights(weights)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def spectral_to_json(sd: SpectralData) -> dict:
    return {
        "blocks": [
            {"re": b.eigenvalue.real, "im": b.eigenvalue.imag, "m": b.size}
            for b in sd.structure.blocks
        ],
        "U_re": sd.U.real.tolist(),
        "U_im": sd.U.imag.tolist(),
        "residual": sd.residual,
    }


def structure_from_json(obj: dict) -> JordanStructure:
    blocks = tuple(
        JordanBlock(complex(b["re"], b["im"]), int(b["m"])) for b in _require(obj, "blocks")
    )
    return JordanStructure(blocks)


def duality_to_json(d: DualityFunction) -> dict:
    return {
        "nhat": d.dual_space.n,
        "n": d.primal_space.n,
        "D": np.asarray(d.matrix).tolist(),
        "residual": d.residual,
        "rank": d.rank,
    }


def duality_from_json(obj: dict) -> DualityFunction:
    nhat = _require(obj, "nhat")
    n = _require(obj, "n")
    matrix = np.asarray(_require(obj, "D"), dtype=float)
    if matrix.shape != (nhat, n):
        raise ParseError(f"D shape {matrix.shape} does not match ({nhat}, {n})")
    return DualityFunction(
        StateSpace(nhat), StateSpace(n), matrix, float(obj.get("residual", 0.0)), int(obj.get("rank", 0))
    )


def intertwiner_to_json(op: IntertwiningOperator) -> dict:
    return {
        "n": op.from_space.n,
        "rows": op.to_space.n,
        "entries": np.asarray(op.matrix).tolist(),
        "stochastic": op.stochastic,
    }


def intertwiner_from_json(obj: dict) -> IntertwiningOperator:
    n = _require(obj, "n")
    rows = obj.get("rows", n)
    entries = np.asarray(_require(obj, "entries"), dtype=float)
    if entries.shape != (rows, n):
        raise ParseError(f"entries shape {entries.shape} does not match ({rows}, {n})")
    return IntertwiningOperator(StateSpace(n), StateSpace(rows), entries)


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read JSON from {path}: {exc}") from exc


def save_json(obj: dict, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")
    return path


def load_matrix(path) -> RateMatrix:
    return matrix_from_json(load_json(path))


def load_measure(path) -> Measure:
    return measure_from_json(load_json(path))

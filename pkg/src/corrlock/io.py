"""JSON encodings for matrices, states, ensembles and MUB families.

Matrix: ``{"dim": [r, c], "re": [...], "im": [...]}`` with row-major entries.
Ensemble: ``{"items": [{"p": real, "vec": {"re": [...], "im": [...]}}]}``.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .mub import MubFamily
from .qmath import DensityMatrix, Ensemble


def fmt(x: float) -> str:
    """Twelve significant digits; used for every float the CLI prints."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return format(x, ".12g")


def round12(x: float) -> float:
    x = float(x)
    return x if not math.isfinite(x) else float(format(x, ".12g"))


def _rounded(obj):
    """Recursively round floats so that JSON output is stable to 12 significant digits."""
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if not math.isfinite(x) else round12(x)
    return obj


def dumps(obj) -> str:
    return json.dumps(_rounded(obj), sort_keys=True)


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = m[:, None]
    return {"dim": list(m.shape), "re": m.real.ravel().tolist(), "im": m.imag.ravel().tolist()}


def matrix_from_json(obj: dict) -> np.ndarray:
    r, c = obj["dim"]
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    if re.size != r * c or im.size != r * c:
        raise ValueError("matrix entry count does not match dim")
    return (re + 1j * im).reshape(r, c)


def state_to_json(rho: DensityMatrix) -> dict:
    out = matrix_to_json(rho.matrix)
    out["dims"] = [rho.dim_a, rho.dim_b]
    return out


def state_from_json(obj: dict) -> DensityMatrix:
    m = matrix_from_json(obj)
    da, db = obj.get("dims", [m.shape[0], 1])
    return DensityMatrix(m, da, db)


def ensemble_to_json(e: Ensemble) -> dict:
    return {
        "items": [
            {"p": float(p), "vec": {"re": v.real.tolist(), "im": v.imag.tolist()}}
            for p, v in zip(e.probs, e.states)
        ]
    }


def ensemble_from_json(obj: dict) -> Ensemble:
    items = []
    for it in obj["items"]:
        re = np.asarray(it["vec"]["re"], dtype=float)
        im = np.asarray(it["vec"].get("im", np.zeros_like(re)), dtype=float)
        items.append((float(it["p"]), re + 1j * im))
    return Ensemble.from_items(items)


def mub_to_json(m: MubFamily) -> dict:
    return {"d": m.d, "L": m.L, "unitaries": [matrix_to_json(u) for u in m.unitaries]}


def mub_from_json(obj: dict) -> MubFamily:
    return MubFamily(int(obj["d"]), tuple(matrix_from_json(u) for u in obj["unitaries"]))

"""JSON interchange: complex matrices as ``[re, im]`` pairs, POVMs, observables, fixtures."""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .estimation import ParamPoint
from .povm import Povm, SharpObservable, from_observable

SIG_DIGITS = 12
FIXTURE_PREFIX = "fixture:"


class InputError(ValidationError):
    """Malformed input file; ``location`` points at the offending place."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


def round_sig(x: float, digits: int = SIG_DIGITS) -> float:
    if not math.isfinite(x):
        return x
    r = float(f"{x:.{digits}g}")
    return 0.0 if r == 0 else r


def to_plain(obj, digits: int = SIG_DIGITS):
    """Recursively convert numpy values to JSON-ready Python, rounding floats."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v, digits) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist(), digits)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        # JSON has no NaN or infinity
        return round_sig(float(obj), digits) if math.isfinite(obj) else None
    if isinstance(obj, complex):
        raise TypeError("complex scalars must be encoded as [re, im] pairs")
    return obj


def dumps(obj) -> str:
    return json.dumps(to_plain(obj), indent=2, sort_keys=False, allow_nan=False) + "\n"


def matrix_to_json(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[z.real, z.imag] for z in row] for row in M]


def matrix_from_json(data, location: str = "matrix") -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"matrix entries must be [re, im] number pairs ({exc})", location) from None
    if arr.ndim == 2:
        arr = np.stack([arr, np.zeros_like(arr)], axis=-1)
    if arr.ndim != 3 or arr.shape[-1] != 2 or arr.shape[0] != arr.shape[1]:
        raise InputError(f"expected a square array of [re, im] pairs, got shape {arr.shape}", location)
    return arr[..., 0] + 1j * arr[..., 1]


def povm_to_json(p: Povm) -> dict:
    return {"dim": p.dim,
            "effects": [{"label": e.label, "matrix": matrix_to_json(e.operator)} for e in p.effects]}


def _field(data, key: str, location: str):
    if not isinstance(data, dict) or key not in data:
        raise InputError(f"missing field {key!r}", location)
    return data[key]


def povm_from_json(data, location: str = "povm", strict: bool = False) -> Povm:
    """Parse a POVM document; validation is left to the caller unless ``strict``."""
    dim = _field(data, "dim", location)
    effects = _field(data, "effects", location)
    if not isinstance(effects, list) or not effects:
        raise InputError("'effects' must be a nonempty list", location)
    ops, labels = [], []
    for k, eff in enumerate(effects):
        loc = f"{location}.effects[{k}]"
        M = matrix_from_json(_field(eff, "matrix", loc), f"{loc}.matrix")
        if M.shape != (dim, dim):
            raise InputError(f"effect has shape {M.shape}, declared dim is {dim}", loc)
        ops.append(M)
        labels.append(str(eff.get("label", k)))
    try:
        return Povm.from_operators(ops, labels, strict=strict)
    except ValidationError as exc:
        raise InputError(str(exc), location) from None


def observable_to_json(H) -> dict:
    if isinstance(H, SharpObservable):
        H = H.operator
    H = np.asarray(H)
    return {"dim": H.shape[0], "matrix": matrix_to_json(H)}


def observable_from_json(data, location: str = "observable") -> np.ndarray:
    dim = _field(data, "dim", location)
    M = matrix_from_json(_field(data, "matrix", location), f"{location}.matrix")
    if M.shape != (dim, dim):
        raise InputError(f"matrix has shape {M.shape}, declared dim is {dim}", location)
    return M


def sharp_from_json(data, location: str = "observable") -> SharpObservable:
    return from_observable(observable_from_json(data, location))


def stochastic_to_json(L) -> dict:
    L = np.asarray(L, dtype=float)
    return {"rows": L.shape[0], "cols": L.shape[1], "entries": L.tolist()}


def stochastic_from_json(data, location: str = "stochastic") -> np.ndarray:
    rows = _field(data, "rows", location)
    cols = _field(data, "cols", location)
    try:
        L = np.asarray(_field(data, "entries", location), dtype=float)
    except (TypeError, ValueError):
        raise InputError("entries must be a numeric 2-d array", location) from None
    if L.shape != (rows, cols):
        raise InputError(f"entries have shape {L.shape}, declared ({rows}, {cols})", location)
    return L


def param_point_to_json(pt: ParamPoint) -> dict:
    return {"rho": matrix_to_json(pt.rho), "tangents": [matrix_to_json(t) for t in pt.tangents]}


def param_point_from_json(data, location: str = "point") -> ParamPoint:
    rho = matrix_from_json(_field(data, "rho", location), f"{location}.rho")
    tangents = [matrix_from_json(t, f"{location}.tangents[{k}]")
                for k, t in enumerate(_field(data, "tangents", location))]
    try:
        return ParamPoint(rho, tuple(tangents))
    except ValidationError as exc:
        raise InputError(str(exc), location) from None


def load_json(source: str | Path):
    """Read a JSON document from a path or a ``fixture:NAME`` reference."""
    source = str(source)
    if source.startswith(FIXTURE_PREFIX):
        name = source[len(FIXTURE_PREFIX):]
        return json.loads(read_fixture_text(name)), source
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise InputError(f"cannot read file ({exc.strerror})", source) from None
    try:
        return json.loads(text), source
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc.msg} at line {exc.lineno} column {exc.colno}",
                         source) from None


def fixture_names() -> list[str]:
    root = resources.files("qincompat") / "data"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def read_fixture_text(name: str) -> str:
    path = resources.files("qincompat") / "data" / f"{name}.json"
    if not path.is_file():
        raise InputError(f"unknown fixture; available: {', '.join(fixture_names())}",
                         FIXTURE_PREFIX + name)
    return path.read_text()


def load_povm(source: str | Path) -> Povm:
    data, loc = load_json(source)
    return povm_from_json(data, loc)


def load_fixture(name: str) -> Povm:
    return load_povm(FIXTURE_PREFIX + name)

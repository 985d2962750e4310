"""JSON/JSON-lines readers and writers for instances, cluster systems and events."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterator

import numpy as np

from .dynamic import Event, event_from_dict
from .errors import ClusteringError
from .generator import GeneratorConfig, Instance
from .model import ClusterSystem, WeightMatrix


class DataError(ClusteringError):
    """An input file is malformed; the message names the file and field or line."""


def _read_json(path: str | Path) -> Any:
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None
    except OSError as e:
        raise DataError(f"{path}: {e.strerror}") from None


def instance_to_dict(inst: Instance, matrix_only: bool = False) -> dict:
    d: dict[str, Any] = {"b": inst.b, "u": inst.u}
    if not matrix_only and inst.bs is not None and inst.users is not None:
        d["bs"] = inst.bs.tolist()
        d["users"] = inst.users.tolist()
    d["weights"] = inst.weights.w.tolist()
    if inst.config is not None:
        d["generator"] = inst.config.to_dict()
    return d


def instance_from_dict(d: Any, source: str = "<instance>") -> Instance:
    if not isinstance(d, dict):
        raise DataError(f"{source}: expected a JSON object")
    if "weights" not in d:
        raise DataError(f"{source}: missing field 'weights'")
    try:
        W = WeightMatrix(d["weights"])
    except (ValueError, TypeError) as e:
        raise DataError(f"{source}: field 'weights': {e}") from None
    for key, n in (("b", W.b), ("u", W.u)):
        if key in d and d[key] != n:
            raise DataError(f"{source}: field {key!r} is {d[key]} but weights imply {n}")
    coords = {}
    for key, n in (("bs", W.b), ("users", W.u)):
        if key in d:
            arr = np.asarray(d[key], dtype=np.float64)
            if arr.shape != (n, 2):
                raise DataError(f"{source}: field {key!r} must have shape ({n}, 2), got {arr.shape}")
            coords[key] = arr
    config = None
    if "generator" in d and d["generator"] is not None:
        try:
            config = GeneratorConfig(**d["generator"])
        except (TypeError, ValueError) as e:
            raise DataError(f"{source}: field 'generator': {e}") from None
    return Instance(W, coords.get("bs"), coords.get("users"), config)


def load_instance(path: str | Path) -> Instance:
    return instance_from_dict(_read_json(path), str(path))


def save_instance(inst: Instance, path: str | Path | None, matrix_only: bool = False) -> None:
    write_json(instance_to_dict(inst, matrix_only), path)


def load_system(path: str | Path) -> ClusterSystem:
    """Read a cluster system, bare or wrapped under ``"system"`` as ``cluster`` writes it."""
    d = _read_json(path)
    if isinstance(d, dict) and isinstance(d.get("system"), dict):
        d = d["system"]
    if not isinstance(d, dict):
        raise DataError(f"{path}: expected a JSON object")
    try:
        return ClusterSystem.from_dict(d)
    except (ValueError, TypeError) as e:
        raise DataError(f"{path}: {e}") from None


def write_json(obj: Any, path: str | Path | None) -> None:
    text = json.dumps(obj, indent=2)
    if path is None or str(path) == "-":
        print(text)
    else:
        Path(path).write_text(text + "\n")


def read_events(path: str | Path) -> Iterator[Event]:
    """Parse a JSON-lines event stream, skipping blank lines."""
    try:
        f = open(path)
    except OSError as e:
        raise DataError(f"{path}: {e.strerror}") from None
    with f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                yield event_from_dict(json.loads(line))
            except json.JSONDecodeError as e:
                raise DataError(f"{path}: line {lineno}: {e.msg}") from None
            except (ValueError, TypeError, AttributeError) as e:
                raise DataError(f"{path}: line {lineno}: {e}") from None

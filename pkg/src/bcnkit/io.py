"""JSON documents for matrices, spaces and models."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Optional, Union

from .dsl import ModelError, compile_source
from .network import Bcn, Bn, StateSpace
from .stp import LogicalMatrix

__all__ = ["model_to_dict", "model_from_dict", "save_model", "load_model", "digest", "canonical_json"]


def model_to_dict(net: Union[Bcn, Bn], provenance: Optional[dict] = None) -> dict:
    if isinstance(net, Bcn):
        doc = {
            "kind": "bcn",
            "name": net.name,
            "input_space": net.input_space.to_dict(),
            "state_space": net.state_space.to_dict(),
            "output_space": net.output_space.to_dict(),
            "transition": net.transition.to_dict(),
            "output_map": net.output_map.to_dict(),
            "output_depends_on_input": net.output_depends_on_input,
        }
    else:
        doc = {
            "kind": "bn",
            "name": net.name,
            "state_space": net.state_space.to_dict(),
            "transition": net.transition.to_dict(),
        }
        if net.output_map is not None:
            doc["output_space"] = net.output_space.to_dict()
            doc["output_map"] = net.output_map.to_dict()
    if provenance:
        doc["provenance"] = provenance
    return doc


def model_from_dict(doc: dict) -> Union[Bcn, Bn]:
    kind = doc.get("kind")
    if kind == "bcn":
        return Bcn(
            StateSpace.from_dict(doc["input_space"]),
            StateSpace.from_dict(doc["state_space"]),
            StateSpace.from_dict(doc["output_space"]),
            LogicalMatrix.from_dict(doc["transition"]),
            LogicalMatrix.from_dict(doc["output_map"]),
            bool(doc.get("output_depends_on_input", False)),
            doc.get("name"),
        )
    if kind == "bn":
        out_map = LogicalMatrix.from_dict(doc["output_map"]) if "output_map" in doc else None
        out_space = StateSpace.from_dict(doc["output_space"]) if "output_space" in doc else None
        return Bn(StateSpace.from_dict(doc["state_space"]), LogicalMatrix.from_dict(doc["transition"]),
                  out_map, out_space, doc.get("name"))
    raise ValueError(f"unknown model kind {kind!r}")


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def digest(doc) -> str:
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()


def save_model(net: Union[Bcn, Bn], path: Union[str, Path], provenance: Optional[dict] = None) -> None:
    Path(path).write_text(canonical_json(model_to_dict(net, provenance)) + "\n")


def load_model(path: Union[str, Path]) -> Union[Bcn, Bn]:
    """Load a ``.bcn`` source (compiled on the fly) or a JSON model document.

    Any defect in the file surfaces as :class:`~bcnkit.dsl.ModelError`.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelError(f"cannot read {path}: {exc.strerror}") from None
    if path.suffix == ".bcn":
        return compile_source(text)
    try:
        return model_from_dict(json.loads(text))
    except (ValueError, KeyError, TypeError) as exc:
        raise ModelError(f"{path}: invalid model document: {exc}") from None

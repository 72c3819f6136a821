from pydantic import BaseModel, Field

from ..errors import InputFormatError, NotDynkinError
from ..formats import load_quiver
from ..quiver import (
    classify,
    format_root,
    maximal_root,
    minimal_imaginary_root,
    positive_roots,
    shape_for,
    two_row,
)
from .base import FlagPaveTool, QuiverInput, dumps

FAMILIES = {"A": "A", "D": "D", "E": "E", "affA": "affineA", "affD": "affineD", "affE": "affineE"}


class RootsInput(BaseModel):
    type: str = Field(..., description="A, D, E, affA, affD or affE")
    rank: int = Field(..., description="Rank n of the diagram")
    maximal: bool = Field(False, description="Only the maximal root (Dynkin)")
    delta: bool = Field(False, description="Only the minimal imaginary root (affine)")


class RootsTool(FlagPaveTool):
    name: str = "roots"
    description: str = "Positive roots of a Dynkin diagram, or the minimal imaginary root of an affine one, in the two-row layout."
    args_schema: type[BaseModel] = RootsInput

    def _run(self, type: str, rank: int, maximal: bool = False, delta: bool = False) -> str:
        family = FAMILIES.get(type)
        if family is None:
            raise InputFormatError(f"unknown type {type!r}; expected one of {', '.join(FAMILIES)}")
        try:
            shape = shape_for(family, rank)
        except ValueError as exc:
            raise InputFormatError(f"{type}{rank}: {exc}")
        if shape.is_affine:
            roots = [minimal_imaginary_root(shape)]
        elif delta:
            raise NotDynkinError(f"--delta needs an affine type, got {shape.label}")
        else:
            roots = [maximal_root(shape)] if maximal else positive_roots(shape)
        return dumps({
            "type": shape.label,
            "count": len(roots),
            "roots": [{"root": list(r), "label": format_root(shape, r), "layout": two_row(shape, r)} for r in roots],
        })

    def format_text(self, payload: dict) -> str:
        lines = [f"{payload['type']}: {payload['count']} root(s)"]
        for entry in payload["roots"]:
            lines.append(entry["label"])
            lines.append(entry["layout"])
            lines.append("")
        return "\n".join(lines).rstrip()


class ClassifyTool(FlagPaveTool):
    name: str = "classify"
    description: str = "Dynkin or affine type of a quiver file, with the canonical vertex order."
    args_schema: type[BaseModel] = QuiverInput

    def _run(self, quiver: str) -> str:
        q = load_quiver(quiver)
        shape = classify(q)
        return dumps({
            "quiver": q.name,
            "type": shape.label,
            "family": shape.family,
            "rank": shape.rank,
            "dynkin": shape.is_dynkin,
            "affine": shape.is_affine,
            "canonical_order": list(shape.order),
        })

    def format_text(self, payload: dict) -> str:
        return f"{payload['quiver']}: {payload['type']} (canonical order {' '.join(payload['canonical_order'])})"

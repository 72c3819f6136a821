"""
Shared shape of the command tools: a pydantic args schema and a ``_run`` that returns JSON.
"""

import json
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..errors import FlagPaveError, InputFormatError, exit_code_for
from ..extended import build_extended, phi
from ..formats import load_quiver, load_representation, parse_dimvec
from ..quiver import Quiver
from ..rep import Representation, build_indecomposable, direct_sum_of


class FlagPaveTool(BaseModel):
    """One command: validated arguments in, a JSON document out."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    description: str
    args_schema: type[BaseModel]

    def run(self, **kwargs) -> str:
        """Validate kwargs against args_schema and run; library errors propagate."""
        try:
            args = self.args_schema.model_validate(kwargs)
        except ValidationError as exc:
            details = "; ".join(f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in exc.errors())
            raise InputFormatError(f"{self.name}: {details}")
        return self._run(**args.model_dump())

    def safe_run(self, **kwargs) -> str:
        """Like run, with errors folded into an {"error", "type", "exit_code"} document."""
        try:
            return self.run(**kwargs)
        except FlagPaveError as exc:
            return dumps({"error": str(exc), "type": type(exc).__name__, "exit_code": exit_code_for(exc)})

    def _run(self, **kwargs) -> str:
        raise NotImplementedError

    def format_text(self, payload: dict) -> str:
        """Human-readable rendering; tools with a table layout override this."""
        return dumps(payload)


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2)


class QuiverInput(BaseModel):
    quiver: str = Field(..., description="Quiver file path or bundled quiver name (e.g. e6_ar)")


class ModuleInput(QuiverInput):
    root: Optional[str] = Field(None, description="Comma separated dimension vector; join several with '+' for a direct sum")
    rep: Optional[str] = Field(None, description="Representation file")


class DepthInput(BaseModel):
    d: int = Field(1, description="Flag length")
    strict: bool = Field(False, description="Strict flags")


def parse_roots(q: Quiver, text: str) -> dict[tuple[int, ...], int]:
    out: dict[tuple[int, ...], int] = {}
    for part in text.split("+"):
        root = parse_dimvec(part, len(q.vertices))
        out[root] = out.get(root, 0) + 1
    return out


def load_module(quiver: str, root: Optional[str], rep: Optional[str]) -> tuple[Quiver, Representation, str]:
    """The quiver and the selected module with a short label for reports."""
    q = load_quiver(quiver)
    if (root is None) == (rep is None):
        raise InputFormatError("select the module with exactly one of --root or --rep")
    if rep is not None:
        return q, load_representation(rep, q), rep
    roots = parse_roots(q, root)
    if len(roots) == 1 and next(iter(roots.values())) == 1:
        return q, build_indecomposable(q, next(iter(roots))), root
    return q, direct_sum_of(q, roots), root


def matrices_of(m: Representation) -> dict[str, list[list[str]]]:
    return {a.id: [[str(x) for x in row] for row in mat.to_rows()] for a, mat in zip(m.quiver.arrows, m.maps)}


def describe_module(m: Representation) -> dict:
    return {
        "dims": {v: n for v, n in zip(m.quiver.vertices, m.dims)},
        "maps": matrices_of(m),
    }


def phi_of(m: Representation, d: int, strict: bool):
    return phi(m, build_extended(m.quiver, d, strict))

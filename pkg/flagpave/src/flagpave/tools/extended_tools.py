from typing import Optional

from pydantic import BaseModel

from ..extended import build_extended, phi
from ..formats import load_quiver
from .base import DepthInput, FlagPaveTool, ModuleInput, QuiverInput, dumps, load_module, matrices_of


class ExtQuiverInput(QuiverInput, DepthInput):
    pass


class ExtQuiverTool(FlagPaveTool):
    name: str = "extquiver"
    description: str = "The extended quiver Q_d (or Q_d,str) with its virtual arrows and relations."
    args_schema: type[BaseModel] = ExtQuiverInput

    def _run(self, quiver: str, d: int = 1, strict: bool = False) -> str:
        eq = build_extended(load_quiver(quiver), d, strict)
        payload = eq.describe()
        payload["counts"] = {
            "vertices": len(eq.vertices),
            "arrows": len(eq.arrows),
            "virtual_arrows": len(eq.virtual),
        }
        return dumps(payload)

    def format_text(self, payload: dict) -> str:
        counts = payload["counts"]
        lines = [f"{payload['base']}_{payload['d']}{',str' if payload['strict'] else ''}: "
                 f"{counts['vertices']} vertices, {counts['arrows']} arrows, {counts['virtual_arrows']} virtual arrows"]
        for c in payload["virtual_arrows"]:
            (a1, b1), (a2, b2) = c["paths"]
            lines.append(f"  {c['id']}: {c['from']} -> {c['to']}   {a1}.{b1} = {a2}.{b2}")
        return "\n".join(lines)


class PhiInput(ModuleInput, DepthInput):
    pass


class PhiTool(FlagPaveTool):
    name: str = "phi"
    description: str = "Phi(M): the module over the bound extended algebra whose submodules are the flags of M."
    args_schema: type[BaseModel] = PhiInput

    def _run(self, quiver: str, root: Optional[str] = None, rep: Optional[str] = None,
             d: int = 1, strict: bool = False) -> str:
        q, m, label = load_module(quiver, root, rep)
        eq = build_extended(q, d, strict)
        t = phi(m, eq)
        return dumps({
            "module": label,
            "d": d,
            "strict": strict,
            "dims": {v: n for v, n in zip(eq.vertices, t.dims)},
            "maps": matrices_of(t),
            "violated_relations": t.validate(),
        })

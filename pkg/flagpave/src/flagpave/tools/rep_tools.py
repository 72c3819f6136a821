from typing import Optional

from pydantic import BaseModel, Field

from ..artheory import knit
from ..errors import InputFormatError
from ..extended import build_extended, euler_R, ext_all, phi
from ..formats import load_bound_module, load_quiver
from ..quiver import classify, euler_form, format_root
from ..rep import decompose, ext1_dim, hom_dim, is_indecomposable, ord_, ord_e
from .base import FlagPaveTool, ModuleInput, describe_module, dumps, load_module


def _summands(q, m) -> list[dict]:
    shape = classify(q)
    return [
        {"root": list(r), "label": format_root(shape, shape.from_quiver_order(q, r)), "multiplicity": k}
        for r, k in sorted(decompose(m).items())
    ]


class IndecTool(FlagPaveTool):
    name: str = "indec"
    description: str = "Explicit matrices of an indecomposable (or a direct sum) with its decomposition and orders."
    args_schema: type[BaseModel] = ModuleInput

    def _run(self, quiver: str, root: Optional[str] = None, rep: Optional[str] = None) -> str:
        q, m, label = load_module(quiver, root, rep)
        shape = classify(q)
        payload = {
            "module": label,
            "type": shape.label,
            **describe_module(m),
            "summands": _summands(q, m),
            "indecomposable": is_indecomposable(m),
            "ord": ord_(m),
            "ord_e": ord_e(m) if shape.family == "E" else None,
        }
        if payload["indecomposable"]:
            payload["position"] = list(knit(q).positions[m.dims])
        return dumps(payload)


class PairInput(ModuleInput):
    root2: Optional[str] = Field(None, description="Second module as a dimension vector")
    rep2: Optional[str] = Field(None, description="Second module as a representation file")


class HomTool(FlagPaveTool):
    name: str = "hom"
    description: str = "[M,N], [M,N]^1 and the Euler form <dim M, dim N> over the path algebra."
    args_schema: type[BaseModel] = PairInput

    def _run(self, quiver: str, root: Optional[str] = None, rep: Optional[str] = None,
             root2: Optional[str] = None, rep2: Optional[str] = None) -> str:
        q, m, first = load_module(quiver, root, rep)
        _, n, second = load_module(quiver, root2, rep2)
        hom = hom_dim(m, n)
        ext = ext1_dim(m, n)
        return dumps({
            "M": first,
            "N": second,
            "hom": hom,
            "ext1": ext,
            "euler": euler_form(q, (), m.dims, n.dims),
        })


class ExtInput(PairInput):
    d: int = Field(1, description="Flag length")
    strict: bool = Field(False, description="Strict extended quiver")
    bound: Optional[str] = Field(None, description="First module as a bound module file")
    bound2: Optional[str] = Field(None, description="Second module as a bound module file")


class ExtTool(FlagPaveTool):
    name: str = "ext"
    description: str = "[T,T'], [T,T']^1, [T,T']^2 over the bound extended algebra R, against the Euler form of R."
    args_schema: type[BaseModel] = ExtInput

    def _side(self, quiver, eq, root, rep, bound):
        if bound is not None:
            module = load_bound_module(bound, load_quiver(quiver))
            if module.extended != eq:
                raise InputFormatError(f"{bound}: module depth or strictness differs from --d/--strict")
            return module, bound
        _, m, label = load_module(quiver, root, rep)
        return phi(m, eq), f"Phi({label})"

    def _run(self, quiver: str, root: Optional[str] = None, rep: Optional[str] = None,
             root2: Optional[str] = None, rep2: Optional[str] = None, d: int = 1, strict: bool = False,
             bound: Optional[str] = None, bound2: Optional[str] = None) -> str:
        q = load_quiver(quiver)
        eq = build_extended(q, d, strict)
        t, first = self._side(quiver, eq, root, rep, bound)
        u, second = self._side(quiver, eq, root2, rep2, bound2)
        e0, e1, e2 = ext_all(t, u, eq)
        euler = euler_R(eq, t.dims, u.dims)
        return dumps({
            "T": first,
            "T'": second,
            "d": d,
            "strict": strict,
            "ext": [e0, e1, e2],
            "euler_R": euler,
            "consistent": euler == e0 - e1 + e2,
        })

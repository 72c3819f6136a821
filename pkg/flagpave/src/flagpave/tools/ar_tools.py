from typing import Optional

from pydantic import BaseModel, Field

from ..artheory import (
    EXPECTED_MONO_TABLE,
    ar_sequence,
    compute_S_X,
    compute_S_X_bruteforce,
    compute_X_S,
    knit,
    minimal_sectional_monos,
    mono_hom_table,
    tau,
    tau_inv,
    x_s_from_almost_split,
)
from ..errors import InjectiveInputError, InputFormatError, ProjectiveInputError
from ..formats import load_quiver
from ..rep import build_indecomposable, decompose
from .base import FlagPaveTool, ModuleInput, QuiverInput, dumps, load_module, matrices_of, parse_roots


class ARInput(QuiverInput):
    dot: Optional[str] = Field(None, description="Write the Graphviz DOT rendering to this path")


class ARTool(FlagPaveTool):
    name: str = "ar"
    description: str = "The Auslander-Reiten quiver: nodes with tau-orbit positions, irreducible arrows and translation."
    args_schema: type[BaseModel] = ARInput

    def _run(self, quiver: str, dot: Optional[str] = None) -> str:
        ar = knit(load_quiver(quiver))
        payload = ar.to_dict()
        payload["counts"] = {
            "nodes": len(ar.nodes),
            "arrows": sum(ar.arrows.values()),
            "translation": len(ar.translation),
            "projectives": sum(1 for r in ar.nodes if ar.is_projective(r)),
        }
        if dot:
            with open(dot, "w", encoding="utf-8") as handle:
                handle.write(ar.to_dot() + "\n")
            payload["dot"] = dot
        return dumps(payload)

    def format_text(self, payload: dict) -> str:
        counts = payload["counts"]
        lines = [f"{payload['type']}: {counts['nodes']} nodes, {counts['arrows']} arrows, "
                 f"{counts['translation']} translations"]
        for node in payload["nodes"]:
            vertex, step = node["position"]
            extra = f"  ord_e={node['ord_e']}" if node["ord_e"] is not None else ""
            lines.append(f"  tau^-{step} P({vertex})  {node['label']}{extra}")
        return "\n".join(lines)


class RootInput(QuiverInput):
    root: str = Field(..., description="Dimension vector of an indecomposable, comma separated")


def _node(quiver: str, root: str):
    q = load_quiver(quiver)
    roots = parse_roots(q, root)
    if len(roots) != 1 or next(iter(roots.values())) != 1:
        raise InputFormatError("this command takes a single indecomposable")
    return q, build_indecomposable(q, next(iter(roots)))


class TauTool(FlagPaveTool):
    name: str = "tau"
    description: str = "tau and tau^-1 of an indecomposable, computed from projective presentations."
    args_schema: type[BaseModel] = RootInput

    def _run(self, quiver: str, root: str) -> str:
        q, m = _node(quiver, root)
        ar = knit(q)
        payload = {"root": list(m.dims), "label": ar.label(m.dims)}
        try:
            t = tau(m)
            payload["tau"] = {"root": list(t.dims), "label": ar.label(t.dims), "maps": matrices_of(t)}
        except ProjectiveInputError:
            payload["tau"] = None
        try:
            t = tau_inv(m)
            payload["tau_inv"] = {"root": list(t.dims), "label": ar.label(t.dims), "maps": matrices_of(t)}
        except InjectiveInputError:
            payload["tau_inv"] = None
        return dumps(payload)


class ARSeqTool(FlagPaveTool):
    name: str = "arseq"
    description: str = "The almost split sequence 0 -> tau X -> E -> X -> 0 ending at a non-projective indecomposable."
    args_schema: type[BaseModel] = RootInput

    def _run(self, quiver: str, root: str) -> str:
        q, m = _node(quiver, root)
        ar = knit(q)
        seq = ar_sequence(m)
        left, right = ar.label(seq.left.dims), ar.label(seq.right.dims)
        middle = [ar.label(r) for r in seq.middle_roots]
        return dumps({
            "left": left,
            "middle": middle,
            "right": right,
            "exact": seq.is_exact(),
            "sequence": f"0 -> {left} -> {' ⊕ '.join(middle)} -> {right} -> 0",
        })

    def format_text(self, payload: dict) -> str:
        return payload["sequence"]


class SecMonoTool(FlagPaveTool):
    name: str = "secmono"
    description: str = "Minimal sectional monos into an indecomposable, in selection order, with their Hom/Ext table."
    args_schema: type[BaseModel] = RootInput

    def _run(self, quiver: str, root: str) -> str:
        q, y = _node(quiver, root)
        ar = knit(q)
        entries = []
        for mono in minimal_sectional_monos(ar, y.dims):
            x = ar.nodes[mono.source]
            s, _ = y.quotient(mono.morphism.image_subrep())
            table = mono_hom_table(x, y, s)
            entries.append({
                "path": [ar.label(r) for r in mono.path.nodes],
                "X": ar.label(mono.source),
                "S": {ar.label(r): k for r, k in sorted(decompose(s).items())},
                "table": table,
                "table_matches": table == EXPECTED_MONO_TABLE,
            })
        return dumps({"Y": ar.label(y.dims), "monos": entries})


class XSInput(ModuleInput):
    x: Optional[str] = Field(None, description="X as dimension vectors joined by '+'")
    s: Optional[str] = Field(None, description="S as dimension vectors joined by '+'")
    p: Optional[int] = Field(None, description="Also compute S^X by brute force over F_p")


class XSTool(FlagPaveTool):
    name: str = "xs"
    description: str = ("X_S and S^X for a pair with [S,X]^1 = 1; with --root Y the pair comes from the "
                        "selected minimal sectional mono X -> Y and S = Y/X.")
    args_schema: type[BaseModel] = XSInput

    def _run(self, quiver: str, root: Optional[str] = None, rep: Optional[str] = None,
             x: Optional[str] = None, s: Optional[str] = None, p: Optional[int] = None) -> str:
        q = load_quiver(quiver)
        ar = knit(q)
        cross_check = None
        if x is not None and s is not None:
            _, xm, _ = load_module(quiver, x, None)
            _, sm, _ = load_module(quiver, s, None)
        else:
            _, y, _ = load_module(quiver, root, rep)
            monos = minimal_sectional_monos(ar, y.dims)
            if not monos:
                raise InputFormatError(f"no minimal sectional mono into {ar.label(y.dims)}")
            mono = monos[0]
            xm = ar.nodes[mono.source]
            sm, _ = ar.nodes[y.dims].quotient(mono.morphism.image_subrep())
            cross_check = x_s_from_almost_split(ar, mono.path)
        x_s = compute_X_S(xm, sm)
        s_x = compute_S_X(xm, sm)

        def labels(parts):
            return {ar.label(r): k for r, k in sorted(parts.items())}

        payload = {
            "X": labels(decompose(xm)),
            "S": labels(decompose(sm)),
            "X_S": labels(decompose(x_s.as_representation())) if not x_s.is_zero() else {},
            "S^X": labels(decompose(s_x.as_representation())) if not s_x.is_zero() else {},
            "S^X_is_S": s_x.is_whole(),
        }
        if cross_check is not None:
            payload["X_S_from_almost_split"] = labels(cross_check)
        if p is not None:
            brute = compute_S_X_bruteforce(xm, sm, p)
            payload["S^X_bruteforce"] = {"p": p, "dims": list(brute.dimvec), "agrees": brute.dimvec == s_x.dimvec}
        return dumps(payload)

import logging
import random
from typing import Optional

from pydantic import BaseModel, Field

from ..artheory import EXPECTED_MONO_TABLE, knit, minimal_sectional_monos, mono_hom_table
from ..config import get_settings
from ..exactlinalg import GF
from ..errors import InputFormatError, OutOfScopeError
from ..extended import build_extended, euler_R, ext_all, phi
from ..formats import CountingRecordModel, check_report, load_quiver, parse_dimvec
from ..grassmann import (
    count_flags_directly,
    count_submodules,
    counting_records,
    degree_bound,
    interpolate_polynomial,
)
from ..paving import PavingEngine, count_recursive, paving_report
from ..quiver import classify, quiver_roots
from ..rep import build_indecomposable, ext1_dim, hom_dim, reduce_mod
from .base import DepthInput, FlagPaveTool, ModuleInput, QuiverInput, dumps, load_module

logger = logging.getLogger(__name__)


def _primes(values: Optional[list[int]]) -> list[int]:
    primes = list(values or get_settings().primes)
    for p in primes:
        try:
            GF(p)
        except ValueError:
            raise InputFormatError(f"{p} is not a prime")
    return primes


def _dimvecs(engine: PavingEngine, m, length: int, f: Optional[str], all_f: bool) -> list[tuple[int, ...]]:
    if (f is None) == (not all_f):
        raise InputFormatError("give exactly one of --f or --all-f")
    if f is not None:
        return [parse_dimvec(f, length)]
    return engine.admissible_dimvecs(m)


class CountInput(ModuleInput, DepthInput):
    f: Optional[str] = Field(None, description="Extended dimension vector, level-major, comma separated")
    all_f: bool = Field(False, description="Every admissible extended dimension vector")
    q: Optional[list[int]] = Field(None, description="Primes to count over")
    oracle: str = Field("submodules", description="submodules of Phi(M) or chains of subrepresentations")
    cross_check: bool = Field(False, description="Run both oracles and compare")
    fit: bool = Field(False, description="Interpolate the counting polynomial when enough primes are given")


class CountTool(FlagPaveTool):
    name: str = "count"
    description: str = "Brute-force point counts of Gr_f(Phi(M)) (or of the flag variety) over F_p."
    args_schema: type[BaseModel] = CountInput

    def _run(self, quiver: str, root: Optional[str] = None, rep: Optional[str] = None, d: int = 1,
             strict: bool = False, f: Optional[str] = None, all_f: bool = False, q: Optional[list[int]] = None,
             oracle: str = "submodules", cross_check: bool = False, fit: bool = False) -> str:
        if oracle not in ("submodules", "chains"):
            raise InputFormatError(f"unknown oracle {oracle!r}")
        quiv, m, label = load_module(quiver, root, rep)
        eq = build_extended(quiv, d, strict)
        fs = _dimvecs(PavingEngine(d, strict), m, len(eq.vertices), f, all_f)
        primes = _primes(q)
        records = []
        mismatches = 0
        for p in primes:
            reduced = reduce_mod(m, p)
            for vec in fs:
                if oracle == "submodules":
                    record = counting_records(m, eq, [vec], [p], module=label)[0].to_dict()
                else:
                    record = {"quiver": quiv.name, "rep": label, "d": d, "strict": strict, "f": list(vec), "p": p,
                              "count": count_flags_directly(reduced, d, strict, vec), "polynomial": None}
                record = CountingRecordModel.model_validate(record).model_dump()
                if cross_check:
                    other = (count_flags_directly(reduced, d, strict, vec) if oracle == "submodules"
                             else count_submodules(phi(reduced, eq), vec))
                    record["cross_check"] = other
                    if other != record["count"]:
                        mismatches += 1
                records.append(record)
        if fit:
            for vec in fs:
                degree = degree_bound(phi(m, eq), vec)
                points = [(r["p"], r["count"]) for r in records if tuple(r["f"]) == tuple(vec)]
                if len(points) < degree + 1:
                    continue
                poly = interpolate_polynomial(points, degree)
                for r in records:
                    if tuple(r["f"]) == tuple(vec):
                        r["polynomial"] = list(poly.coefficients)
        return dumps({
            "records": records,
            "status": "mismatch" if mismatches else "verified",
        })

    def format_text(self, payload: dict) -> str:
        lines = []
        for r in payload["records"]:
            extra = f"  (cross-check {r['cross_check']})" if "cross_check" in r else ""
            lines.append(f"f={','.join(map(str, r['f']))}  p={r['p']}  count={r['count']}{extra}")
        return "\n".join(lines)


class PaveInput(ModuleInput, DepthInput):
    f: Optional[str] = Field(None, description="Extended dimension vector, level-major, comma separated")
    all_f: bool = Field(False, description="Every extended dimension vector with a nonempty Grassmannian")
    q: Optional[list[int]] = Field(None, description="Primes for the verification block")


class PaveTool(FlagPaveTool):
    name: str = "pave"
    description: str = "Affine paving of Gr_f(Phi(M)) as cell-dimension multisets, verified against brute-force counts."
    args_schema: type[BaseModel] = PaveInput

    def _run(self, quiver: str, root: Optional[str] = None, rep: Optional[str] = None, d: int = 1,
             strict: bool = False, f: Optional[str] = None, all_f: bool = False,
             q: Optional[list[int]] = None) -> str:
        shape = classify(load_quiver(quiver))
        if shape.is_affine:
            raise OutOfScopeError(f"affine type {shape.label} is not paved here")
        quiv, m, label = load_module(quiver, root, rep)
        eq = build_extended(quiv, d, strict)
        fs = None if all_f and f is None else _dimvecs(PavingEngine(d, strict), m, len(eq.vertices), f, all_f)
        report = paving_report(m, d, strict, fs, _primes(q), module=label)
        check_report(report)
        if any(r["unresolved"] is not None for r in report["results"]):
            report["status"] = "unresolved"
        elif not report["ok"]:
            report["status"] = "mismatch"
        else:
            report["status"] = "verified"
        return dumps(report)

    def format_text(self, payload: dict) -> str:
        lines = [f"{payload['input']['module']} over {payload['input']['type']}, d={payload['input']['d']}"
                 f"{' strict' if payload['input']['strict'] else ''}: {payload['status']}"]
        for r in payload["results"]:
            f = ",".join(map(str, r["f"]))
            if r["cells"] is None:
                lines.append(f"  f={f}: unresolved at {r['unresolved']['piece']} ({r['unresolved']['reason']})")
                continue
            cells = " + ".join(f"{m}q^{d}" for d, m in sorted(r["cells"].items(), key=lambda kv: int(kv[0])))
            lines.append(f"  f={f}: {cells}   brute {r['verification']['brute']}")
        return "\n".join(lines)


class VerifyInput(QuiverInput, DepthInput):
    root: Optional[str] = Field(None, description="Restrict the count comparison to one module")
    q: Optional[list[int]] = Field(None, description="Primes for the count comparison")
    sample: int = Field(0, description="Check at most this many pairs and dimension vectors per module (0 = all)")
    seed: Optional[int] = Field(None, description="Seed for sampling")


class VerifyTool(FlagPaveTool):
    name: str = "verify"
    description: str = ("Property suite on one quiver: Euler form against Ext over R, the AR formula, the Hom/Ext "
                        "table of every selected sectional mono, and recursive against brute-force counts.")
    args_schema: type[BaseModel] = VerifyInput

    def _run(self, quiver: str, d: int = 1, strict: bool = False, root: Optional[str] = None,
             q: Optional[list[int]] = None, sample: int = 0, seed: Optional[int] = None) -> str:
        quiv = load_quiver(quiver)
        rng = random.Random(seed if seed is not None else get_settings().seed)
        ar = knit(quiv)
        eq = build_extended(quiv, d, strict)
        nodes = ar.ordered()
        checks = {name: {"passed": 0, "failed": []} for name in ("roots", "euler_ext", "ar_formula", "mono_table", "counts")}

        def record(name: str, ok: bool, detail) -> None:
            if ok:
                checks[name]["passed"] += 1
            else:
                checks[name]["failed"].append(detail)

        def pick(items: list) -> list:
            return items if not sample or len(items) <= sample else rng.sample(items, sample)

        record("roots", sorted(nodes) == sorted(quiver_roots(quiv)), "AR nodes differ from the positive roots")
        pairs = pick([(a, b) for a in nodes for b in nodes])
        for a, b in pairs:
            t, u = phi(ar.nodes[a], eq), phi(ar.nodes[b], eq)
            e0, e1, e2 = ext_all(t, u, eq)
            record("euler_ext", e2 == 0 and euler_R(eq, t.dims, u.dims) == e0 - e1 + e2,
                   {"T": ar.label(a), "T'": ar.label(b), "ext": [e0, e1, e2]})
            if a in ar.translation:
                lhs = ext1_dim(ar.nodes[a], ar.nodes[b])
                rhs = hom_dim(ar.nodes[b], ar.nodes[ar.translation[a]])
                record("ar_formula", lhs == rhs, {"X": ar.label(a), "Y": ar.label(b), "ext1": lhs, "hom": rhs})
        for y in nodes:
            monos = minimal_sectional_monos(ar, y)
            if not monos:
                continue
            x_sub = monos[0].morphism.image_subrep()
            s, _ = ar.nodes[y].quotient(x_sub)
            table = mono_hom_table(ar.nodes[monos[0].source], ar.nodes[y], s)
            record("mono_table", table == EXPECTED_MONO_TABLE, {"Y": ar.label(y), "X": ar.label(monos[0].source)})
        primes = _primes(q)
        engine = PavingEngine(d, strict)
        modules = [build_indecomposable(quiv, parse_dimvec(root, len(quiv.vertices)))] if root else [
            ar.nodes[r] for r in nodes]
        for m in modules:
            for vec in pick(engine.admissible_dimvecs(m)):
                for p in primes:
                    brute = count_submodules(phi(reduce_mod(m, p), eq), vec)
                    recursive = count_recursive(m, d, strict, vec, p)
                    record("counts", brute == recursive,
                           {"module": ar.label(m.dims), "f": list(vec), "p": p, "brute": brute, "recursive": recursive})
            logger.debug("counts checked for %s", ar.label(m.dims))
        ok = all(not c["failed"] for c in checks.values())
        return dumps({"quiver": quiv.name, "d": d, "strict": strict, "checks": checks,
                      "status": "verified" if ok else "mismatch"})

    def format_text(self, payload: dict) -> str:
        lines = [f"{payload['quiver']} d={payload['d']}{' strict' if payload['strict'] else ''}: {payload['status']}"]
        for name, c in payload["checks"].items():
            lines.append(f"  {name}: {c['passed']} passed, {len(c['failed'])} failed")
        return "\n".join(lines)

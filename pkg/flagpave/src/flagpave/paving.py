"""
Affine pavings of quiver Grassmannians Gr_f(Phi(M)), reported as cell-dimension multisets.

The engine works on two kinds of pieces:

    GR(A, f)     Gr_f(Phi(A))
    U(A, B, f)   Gr_f(Phi(A)) minus Gr_f(Phi(B)), for an explicit subrepresentation B of A

and stratifies them along short exact sequences 0 -> X -> A -> S -> 0 that are
either split with [S,X]^1 = 0 or nonsplit with [S,X]^1 = 1 and S^X = S. Each
stratum (f1, g) is an affine bundle of rank <g, dim Phi(X) - f1>_R over its
image in Gr_f1(Phi(X)) x Gr_g(Phi(S)); for the nonsplit kind the image misses
Gr_f1(Phi(X_S)) x {Phi(S)}. Indecomposables of order at most two are products
of projective lines, found by constraint propagation.

Unresolved pieces are reported as values; inside the engine they travel as
``UnresolvedPiece`` up to the nearest choice point, which tries the next
candidate sequence.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Iterable, Mapping, Optional, Sequence, Union

from .artheory import (
    EXPECTED_MONO_TABLE,
    compute_S_X,
    compute_X_S,
    knit,
    minimal_sectional_monos,
    realize_mono,
    mono_hom_table,
)
from .config import get_settings
from .errors import (
    ExtensionCountError,
    FlagPaveError,
    InjectiveSummandError,
    NotDynkinError,
    OutOfScopeError,
    ProjectiveSummandError,
    QuiverMismatchError,
    UnresolvedPavingError,
)
from .exactlinalg import (
    QQ,
    Matrix,
    column_space,
    contains,
    image_of,
    inverse,
    kernel_basis,
    pivots_of,
    rank,
    span,
)
from .extended import ExtendedQuiver, build_extended, dim_phi, euler_R, phi
from .grassmann import all_dimvecs, count_submodules
from .quiver import DimVector, check_dimvec, classify, dim_leq, dim_sub, euler_form, format_root
from .rep import (
    Morphism,
    Representation,
    ShortExactSequence,
    Subrep,
    decompose,
    ext1_dim,
    reduce_mod,
    split_embedding,
)

logger = logging.getLogger(__name__)


# cell multisets


@dataclass(frozen=True)
class CellMultiset:
    """Multiplicity of each cell dimension, stored as sorted (dimension, multiplicity) pairs."""

    cells: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        merged: dict[int, int] = {}
        for dim, mult in self.cells:
            if dim < 0 or mult < 0:
                raise ValueError(f"invalid cell entry ({dim}, {mult})")
            if mult:
                merged[int(dim)] = merged.get(int(dim), 0) + int(mult)
        object.__setattr__(self, "cells", tuple(sorted(merged.items())))

    @classmethod
    def empty(cls) -> "CellMultiset":
        return cls()

    @classmethod
    def point(cls) -> "CellMultiset":
        return cls(((0, 1),))

    @classmethod
    def projective_lines(cls, k: int) -> "CellMultiset":
        """(P^1)^k: C(k, j) cells of dimension j."""
        return cls(tuple((j, comb(k, j)) for j in range(k + 1)))

    @classmethod
    def from_mapping(cls, data: Mapping[int, int]) -> "CellMultiset":
        return cls(tuple((int(k), int(v)) for k, v in data.items()))

    @classmethod
    def from_dict(cls, data: Mapping[str, int]) -> "CellMultiset":
        return cls.from_mapping({int(k): v for k, v in data.items()})

    def is_empty(self) -> bool:
        return not self.cells

    def as_mapping(self) -> dict[int, int]:
        return dict(self.cells)

    def to_dict(self) -> dict[str, int]:
        return {str(dim): mult for dim, mult in self.cells}

    def product(self, other: "CellMultiset") -> "CellMultiset":
        out: dict[int, int] = {}
        for a, m in self.cells:
            for b, n in other.cells:
                out[a + b] = out.get(a + b, 0) + m * n
        return CellMultiset.from_mapping(out)

    def shift(self, k: int) -> "CellMultiset":
        if self.is_empty():
            return self
        if k < 0 and self.cells[0][0] + k < 0:
            raise ValueError(f"shift by {k} makes a cell dimension negative")
        return CellMultiset(tuple((dim + k, mult) for dim, mult in self.cells))

    def __add__(self, other: "CellMultiset") -> "CellMultiset":
        return CellMultiset(self.cells + other.cells)

    def evaluate(self, q: int) -> int:
        return sum(mult * q ** dim for dim, mult in self.cells)

    def total(self) -> int:
        """Number of cells, i.e. the value at q = 1."""
        return sum(mult for _, mult in self.cells)

    def dimension(self) -> int:
        return self.cells[-1][0] if self.cells else -1

    def as_polynomial(self) -> list[int]:
        """Coefficients of the counting polynomial, lowest degree first."""
        if not self.cells:
            return []
        out = [0] * (self.dimension() + 1)
        for dim, mult in self.cells:
            out[dim] = mult
        return out

    def __repr__(self) -> str:
        body = " + ".join(f"{m}q^{d}" for d, m in self.cells) or "0"
        return f"CellMultiset({body})"


# pieces, trail, unresolved


@dataclass(frozen=True)
class Piece:
    kind: str
    ambient: Representation
    f: DimVector
    sub: Optional[Subrep] = None
    provenance: str = "input"

    def __post_init__(self):
        if self.kind not in ("GR", "U"):
            raise ValueError(f"unknown piece kind {self.kind!r}")
        if self.kind == "U" and self.sub is None:
            raise ValueError("a U piece needs its closed subrepresentation")

    def describe(self) -> str:
        f = ",".join(str(x) for x in self.f)
        if self.kind == "GR":
            return f"GR({_label(self.ambient)}; f={f})"
        return f"U({_label(self.ambient)}, {list(self.sub.dimvec)}; f={f})"


def _label(m: Representation) -> str:
    shape = classify(m.quiver)
    if not shape.is_dynkin:
        return str(list(m.dims))
    return format_root(shape, shape.from_quiver_order(m.quiver, m.dims))


@dataclass(frozen=True)
class TrailEntry:
    piece: str
    rule: str
    detail: str = ""

    def to_dict(self) -> dict:
        return {"piece": self.piece, "rule": self.rule, "detail": self.detail}


@dataclass(frozen=True)
class Unresolved:
    piece: str
    reason: str
    trail: tuple[TrailEntry, ...] = ()

    def to_dict(self) -> dict:
        return {"piece": self.piece, "reason": self.reason, "trail": [t.to_dict() for t in self.trail]}


PavingResult = Union[CellMultiset, Unresolved]


class UnresolvedPiece(Exception):
    def __init__(self, piece: str, reason: str):
        super().__init__(f"{piece}: {reason}")
        self.piece = piece
        self.reason = reason


class BaseCaseUnsupported(Exception):
    """The line-variable propagation met a constraint it does not model."""


# rule names used in the trail
SUM_SPLIT = "sum split"
SMALL_ORDER = "small order"
SECTIONAL_STRATA = "sectional strata"
CHAIN_SPLIT = "chain split"
QUOTIENT_RESTRICT = "quotient restrict"
BACKTRACK = "backtrack"


# base case: indecomposables of order <= 2


def small_order_cells(t: Representation, f: Sequence[int]) -> CellMultiset:
    """Cells of Gr_f(T) when every vertex of T has dimension at most two.

    Vertices with dim 2 and f = 1 carry a line variable; all other vertices
    are fixed at 0 or the whole space. Arrows between two variables that are
    isomorphisms tie the lines together (a union-find with transport
    matrices); arrows from or to fixed spaces force a line or empty the
    Grassmannian. The free components give (P^1)^k.
    """
    q, field = t.quiver, t.field
    fixed: dict[int, Matrix] = {}
    variables: list[int] = []
    for k, (n, fk) in enumerate(zip(t.dims, f)):
        if fk < 0 or fk > n:
            return CellMultiset.empty()
        if n > 2:
            raise BaseCaseUnsupported(f"dimension {n} at {q.vertices[k]}")
        if n == 2 and fk == 1:
            variables.append(k)
        else:
            fixed[k] = Matrix.identity(field, n) if fk == n else Matrix.zeros(field, n, 0)

    parent = {v: v for v in variables}
    relative = {v: Matrix.identity(field, 2) for v in variables}

    def find(v: int) -> tuple[int, Matrix]:
        # line_v = g line_root
        g = Matrix.identity(field, 2)
        while parent[v] != v:
            g = g @ relative[v]
            v = parent[v]
        return v, g

    forcings: list[tuple[int, tuple]] = []
    links: list[tuple[int, int, Matrix]] = []
    for a, m in zip(q.arrows, t.maps):
        s, r = q.index(a.source), q.index(a.target)
        if s in fixed and r in fixed:
            if not contains(fixed[r], m @ fixed[s]):
                return CellMultiset.empty()
        elif s in fixed:
            image = image_of(m, fixed[s])
            if image.cols == 2:
                return CellMultiset.empty()
            if image.cols == 1:
                forcings.append((r, image.column(0)))
        elif r in fixed:
            if fixed[r].cols == t.dims[r]:
                continue
            kernel = kernel_basis(m)
            if not kernel:
                return CellMultiset.empty()
            if len(kernel) == 1:
                forcings.append((s, kernel[0]))
        else:
            r_m = rank(m)
            if r_m == 2:
                links.append((s, r, m))
            elif r_m == 1:
                raise BaseCaseUnsupported(f"rank one map between line variables on {a.id}")

    cycles: list[tuple[int, Matrix]] = []
    for v, w, m in links:
        rv, gv = find(v)
        rw, gw = find(w)
        step = inverse(gw) @ m @ gv
        if rv != rw:
            parent[rw] = rv
            relative[rw] = step
        elif not _is_scalar(step):
            cycles.append((rv, step))

    forced: dict[int, Matrix] = {}
    for v, vector in forcings:
        root, g = find(v)
        line = span(field, 2, [inverse(g).apply(vector)])
        if root in forced:
            if forced[root] != line:
                return CellMultiset.empty()
        else:
            forced[root] = line
    for root, step in cycles:
        if root not in forced:
            raise BaseCaseUnsupported("a cycle of isomorphisms restricts a free line")
        if not contains(forced[root], step @ forced[root]):
            return CellMultiset.empty()

    free = sum(1 for v in variables if parent[v] == v and v not in forced)
    return CellMultiset.projective_lines(free)


def _is_scalar(m: Matrix) -> bool:
    return m[0, 1] == 0 and m[1, 0] == 0 and m[0, 0] == m[1, 1]


# the engine


def _parts_key(parts: Mapping[DimVector, int]) -> tuple:
    return tuple(sorted((tuple(r), k) for r, k in parts.items() if k))


def _sum_dims(parts: Mapping[DimVector, int], n: int) -> DimVector:
    total = [0] * n
    for r, k in parts.items():
        total = [t + k * x for t, x in zip(total, r)]
    return tuple(total)


def _stratum_order(row: dict) -> tuple:
    f1 = row["f"]
    return (sum(f1), tuple(reversed(f1)))


@dataclass
class _Sequence:
    """0 -> X -> A -> S -> 0 together with the data the strata need."""

    x: Representation
    s: Representation
    projection: Morphism
    split: bool
    x_s: Optional[Subrep] = None


class PavingEngine:
    """Recursive paver for one depth and flag kind; memo tables persist across calls."""

    def __init__(self, d: int, strict: bool = False):
        self.d = d
        self.strict = strict
        self._extended: dict = {}
        self._memo: dict = {}
        self._rows: dict = {}
        self._lock = threading.Lock()
        self._stack: list[tuple[int, int]] = []
        self.trail: list[TrailEntry] = []
        self.stats = {"pieces": 0, "memo_hits": 0, "backtracks": 0}

    # public API

    def extended_quiver(self, m: Representation) -> ExtendedQuiver:
        eq = self._extended.get(m.quiver)
        if eq is None:
            eq = build_extended(m.quiver, self.d, self.strict)
            self._extended[m.quiver] = eq
        return eq

    def pave(self, m: Representation, f: Sequence[int]) -> PavingResult:
        """Cells of Gr_f(Phi(M)), or an Unresolved diagnostic."""
        return self.pave_piece(Piece("GR", m, tuple(f)))

    def pave_piece(self, piece: Piece) -> PavingResult:
        m = piece.ambient
        self._check_input(m)
        eq = self.extended_quiver(m)
        f = check_dimvec(eq.quiver, piece.f)
        self.trail = []
        self._stack = []
        try:
            if piece.kind == "GR":
                result = self._gr(m, f)
            else:
                result = self._u(m, piece.sub, f)
            if not self.trail:
                self._note(piece.describe(), "memo", "answered from earlier pieces")
            return result
        except UnresolvedPiece as exc:
            logger.info("unresolved: %s", exc)
            return Unresolved(exc.piece, exc.reason, tuple(self.trail))

    def pave_all(self, m: Representation) -> dict[DimVector, PavingResult]:
        """Every f whose Grassmannian is nonempty (or unresolved), in lexicographic order."""
        out: dict[DimVector, PavingResult] = {}
        for f in self.admissible_dimvecs(m):
            result = self.pave(m, f)
            if isinstance(result, Unresolved) or not result.is_empty():
                out[f] = result
        return out

    def admissible_dimvecs(self, m: Representation) -> list[DimVector]:
        """f <= dim Phi(M) whose level slices increase, as every chain requires."""
        n = len(m.dims)
        out = []
        for f in all_dimvecs(dim_phi(m.dims, self.d)):
            levels = [f[r * n:(r + 1) * n] for r in range(self.d)]
            if all(dim_leq(a, b) for a, b in zip(levels, levels[1:])):
                out.append(f)
        return out

    def strata(self, m: Representation, f: Sequence[int]) -> list[dict]:
        """The strata recorded for the top stratification of GR(M, f), in admissible order."""
        key = ("GR", m.quiver, _parts_key(decompose(m)), tuple(f))
        if key not in self._rows:
            self.pave(m, f)
        return sorted(self._rows.get(key, []), key=_stratum_order)

    # checks

    def _check_input(self, m: Representation) -> None:
        if m.field != QQ:
            raise QuiverMismatchError("paving works with representations over the rationals")
        shape = classify(m.quiver)
        if shape.is_affine:
            raise OutOfScopeError(f"affine type {shape.label} is not paved here")
        if not shape.is_dynkin:
            raise NotDynkinError(f"{shape.label} is not of Dynkin type")

    def _descend(self, kind: str, m: Representation):
        measure = (m.total_dim(), 0 if kind == "GR" else 1)
        if self._stack and not measure < self._stack[-1]:
            raise AssertionError(f"recursion does not descend: {measure} after {self._stack[-1]}")
        return _Frame(self._stack, measure)

    def _note(self, piece: str, rule: str, detail: str = "") -> None:
        self.trail.append(TrailEntry(piece, rule, detail))
        logger.debug("%s: %s %s", piece, rule, detail)

    def _remember(self, key, value) -> None:
        with self._lock:
            self._memo.setdefault(key, value)

    def _recall(self, key):
        value = self._memo.get(key)
        if value is not None:
            self.stats["memo_hits"] += 1
        if isinstance(value, UnresolvedPiece):
            raise UnresolvedPiece(value.piece, value.reason)
        return value

    # GR pieces

    def _gr(self, m: Representation, f: DimVector) -> CellMultiset:
        eq = self.extended_quiver(m)
        dims = dim_phi(m.dims, self.d)
        if not (all(x >= 0 for x in f) and dim_leq(f, dims)):
            return CellMultiset.empty()
        parts = decompose(m)
        with self._descend("GR", m):
            return self._gr_parts(m.quiver, parts, f, eq)

    def _gr_parts(self, q, parts: Mapping[DimVector, int], f: DimVector, eq: ExtendedQuiver) -> CellMultiset:
        n = len(q.vertices)
        dims = dim_phi(_sum_dims(parts, n), self.d)
        if not (all(x >= 0 for x in f) and dim_leq(f, dims)):
            return CellMultiset.empty()
        if not parts:
            return CellMultiset.point() if not any(f) else CellMultiset.empty()
        key = ("GR", q, _parts_key(parts), f)
        cached = self._recall(key)
        if cached is not None:
            return cached
        self.stats["pieces"] += 1
        try:
            if sum(parts.values()) > 1:
                result = self._sum_split(q, parts, f, eq)
            else:
                result = self._indecomposable(q, next(iter(parts)), f, eq)
        except UnresolvedPiece as exc:
            self._remember(key, exc)
            raise
        self._remember(key, result)
        return result

    def _sum_split(self, q, parts: Mapping[DimVector, int], f: DimVector, eq: ExtendedQuiver) -> CellMultiset:
        ar = knit(q)
        n = len(q.vertices)
        order = ar.topological_index
        last = max(parts, key=lambda r: order[r])
        rest = dict(parts)
        rest[last] -= 1
        rest = {r: k for r, k in rest.items() if k}
        for r in rest:
            if len(ar.hom_basis(r, last)) - euler_form(q, (), r, last):
                raise UnresolvedPiece(str(last), f"[{r}, {last}]^1 != 0 for the chosen summand")
        top = dim_phi(last, self.d)
        other = dim_phi(_sum_dims(rest, n), self.d)
        summands = " + ".join(ar.label(r) if k == 1 else f"{k}{ar.label(r)}" for r, k in sorted(parts.items()))
        label = f"GR({summands}; f={','.join(map(str, f))})"
        self._note(label, SUM_SPLIT, f"X={list(last)}")
        total = CellMultiset.empty()
        rows = []
        for f1 in all_dimvecs(top):
            f2 = dim_sub(f, f1)
            if any(x < 0 for x in f2) or not dim_leq(f2, other):
                continue
            c1 = self._gr_parts(q, {last: 1}, f1, eq)
            if c1.is_empty():
                continue
            c2 = self._gr_parts(q, rest, f2, eq)
            if c2.is_empty():
                continue
            r = euler_R(eq, f2, dim_sub(top, f1))
            if r < 0:
                raise UnresolvedPiece(label, f"negative bundle rank {r} at f={f1}, g={f2}")
            cells = c1.product(c2).shift(r)
            rows.append({"f": f1, "g": f2, "rank": r, "cells": cells.to_dict(), "image": "product"})
            total = total + cells
        self._rows[("GR", q, _parts_key(parts), f)] = rows
        return total

    def _indecomposable(self, q, root: DimVector, f: DimVector, eq: ExtendedQuiver) -> CellMultiset:
        ar = knit(q)
        y = ar.nodes[root]
        label = f"GR({ar.label(root)}; f={','.join(map(str, f))})"
        if max(root) <= 2:
            try:
                cells = small_order_cells(phi(y, eq), f)
            except BaseCaseUnsupported as exc:
                self._note(label, SMALL_ORDER, f"falling back to sectional strata: {exc}")
            else:
                self._note(label, SMALL_ORDER)
                return cells
        monos = minimal_sectional_monos(ar, root)
        if not monos:
            raise UnresolvedPiece(label, "no minimal sectional mono into this node")
        for index, mono in enumerate(monos):
            x_sub = mono.morphism.image_subrep()
            try:
                seq = self._sequence(y, x_sub)
                if seq is None:
                    raise UnresolvedPiece(label, f"sequence through {list(mono.source)} violates the hypotheses")
                table = mono_hom_table(seq.x, y, seq.s)
                if table != EXPECTED_MONO_TABLE:
                    bad = sorted(k for k in table if table[k] != EXPECTED_MONO_TABLE[k])
                    raise UnresolvedPiece(label, f"Hom/Ext pattern differs at {', '.join(bad)}")
                self._note(label, SECTIONAL_STRATA, f"X={ar.label(mono.source)}")
                cells, rows = self._strata(y, x_sub, seq, f, eq, label)
            except UnresolvedPiece as exc:
                self.stats["backtracks"] += 1
                self._note(label, BACKTRACK, f"mono {index} from {ar.label(mono.source)}: {exc.reason}")
                logger.info("backtracking at %s after mono %d: %s", label, index, exc.reason)
                continue
            self._rows[("GR", q, ((root, 1),), f)] = rows
            return cells
        raise UnresolvedPiece(label, "every minimal sectional mono failed")

    # sequences and strata

    def _sequence(self, a: Representation, x_sub: Subrep) -> Optional[_Sequence]:
        """The sequence X -> A -> A/X when it is one of the two admissible kinds."""
        x, iota = a.subrepresentation(x_sub)
        s, pi = a.quotient(x_sub)
        e = ext1_dim(s, x)
        if ShortExactSequence(iota, pi).splits():
            return _Sequence(x, s, pi, True) if e == 0 else None
        if e != 1:
            return None
        try:
            if not compute_S_X(x, s).is_whole():
                return None
            x_s = compute_X_S(x, s)
        except (ExtensionCountError, InjectiveSummandError, ProjectiveSummandError) as exc:
            logger.debug("rejecting sequence: %s", exc)
            return None
        return _Sequence(x, s, pi, False, x_s)

    def _strata(self, a: Representation, x_sub: Subrep, seq: _Sequence, f: DimVector, eq: ExtendedQuiver,
                label: str, skip_zero_g: bool = False,
                restrict_to: Optional[Subrep] = None) -> tuple[CellMultiset, list[dict]]:
        """Sum over the strata (f1, g) of Gr_f(Phi(A)) along 0 -> X -> A -> S -> 0.

        skip_zero_g drops the strata inside Phi(X); restrict_to (a subrepresentation
        of S) keeps only points whose image in Phi(S) lies outside it.
        """
        top = dim_phi(seq.x.dims, self.d)
        full = dim_phi(seq.s.dims, self.d)
        total = CellMultiset.empty()
        rows = []
        for f1 in all_dimvecs(top):
            g = dim_sub(f, f1)
            if any(x < 0 for x in g) or not dim_leq(g, full):
                continue
            if skip_zero_g and not any(g):
                continue
            over_x = self._gr(seq.x, f1)
            if over_x.is_empty():
                continue
            if not seq.split and g == full:
                if restrict_to is not None and restrict_to.is_whole():
                    continue
                base = self._u(seq.x, seq.x_s, f1)
                image = "U(X, X_S)"
            elif restrict_to is not None:
                base = over_x.product(self._u(seq.s, restrict_to, g))
                image = "Gr(X) x U(S, B/X)"
            else:
                base = over_x.product(self._gr(seq.s, g))
                image = "product"
            if base.is_empty():
                continue
            r = euler_R(eq, g, dim_sub(top, f1))
            if r < 0:
                raise UnresolvedPiece(label, f"negative bundle rank {r} at f={f1}, g={g}")
            cells = base.shift(r)
            rows.append({"f": f1, "g": g, "rank": r, "cells": cells.to_dict(), "image": image})
            total = total + cells
        return total, rows

    # U pieces

    def _u(self, a: Representation, b: Subrep, f: DimVector) -> CellMultiset:
        eq = self.extended_quiver(a)
        dims = dim_phi(a.dims, self.d)
        if not (all(x >= 0 for x in f) and dim_leq(f, dims)):
            return CellMultiset.empty()
        if b.is_whole():
            return CellMultiset.empty()
        if b.is_zero():
            return self._gr(a, f) if any(f) else CellMultiset.empty()
        if not dim_leq(f, dim_phi(b.dimvec, self.d)):
            return self._gr(a, f)
        key = ("U", a.quiver, a.dims, a.maps, b.spaces, f)
        cached = self._recall(key)
        if cached is not None:
            return cached
        self.stats["pieces"] += 1
        with self._descend("U", a):
            try:
                result = self._u_candidates(a, b, f, eq)
            except UnresolvedPiece as exc:
                self._remember(key, exc)
                raise
        self._remember(key, result)
        return result

    def _u_candidates(self, a: Representation, b: Subrep, f: DimVector, eq: ExtendedQuiver) -> CellMultiset:
        label = Piece("U", a, f, b).describe()
        reasons = []
        for x_sub, origin, refusal in self._candidates(a, b):
            try:
                if refusal is not None:
                    raise UnresolvedPiece(label, refusal)
                if x_sub.contains(b):
                    result = self._chain_split(a, b, x_sub, f, eq, label, origin)
                elif b.contains(x_sub):
                    result = self._quotient_restrict(a, b, x_sub, f, eq, label, origin)
                else:
                    continue
            except UnresolvedPiece as exc:
                self.stats["backtracks"] += 1
                self._note(label, BACKTRACK, f"{origin}: {exc.reason}")
                logger.info("backtracking at %s after %s: %s", label, origin, exc.reason)
                reasons.append(exc.reason)
                continue
            if result is not None:
                return result
        raise UnresolvedPiece(label, "no stratification applies" + (f" ({reasons[-1]})" if reasons else ""))

    def _candidates(self, a: Representation, b: Subrep) -> Iterable[tuple[Subrep, str, Optional[str]]]:
        """Subrepresentations X of A to stratify along, in the order they are tried.

        The third entry is a reason to refuse the candidate outright, or None.
        """
        q = a.quiver
        ar = knit(q)
        seen = set()

        def fresh(x: Subrep) -> bool:
            if x.is_zero() or x.is_whole() or x.spaces in seen:
                return False
            seen.add(x.spaces)
            return True

        a_parts = decompose(a)
        b_rep, b_iota = a.subrepresentation(b)
        b_parts = decompose(b_rep)
        if sum(a_parts.values()) == 1 and len(b_parts) == 2 and set(b_parts.values()) == {1}:
            yield from self._peels(ar, a, b_rep, b_iota, sorted(b_parts), seen)
        if fresh(b):
            yield b, "B itself", None
        if sum(b_parts.values()) > 1:
            for r in sorted(b_parts):
                x = b_iota.compose(split_embedding(ar.nodes[r], b_rep)).image_subrep()
                if fresh(x):
                    yield x, f"summand {list(r)} of B", None
        if sum(a_parts.values()) == 1:
            for mono in minimal_sectional_monos(ar, a.dims):
                _, embedding = realize_mono(ar, mono, a)
                x = embedding.image_subrep()
                if fresh(x):
                    yield x, f"sectional mono from {list(mono.source)}", None
        else:
            for r in sorted(a_parts):
                x = split_embedding(ar.nodes[r], a).image_subrep()
                if fresh(x):
                    yield x, f"summand {list(r)} of A", None

    def _peels(self, ar, a: Representation, b_rep: Representation, b_iota: Morphism,
               summands: list[DimVector], seen: set) -> Iterable[tuple[Subrep, str, Optional[str]]]:
        """B = F + T inside an indecomposable A: peel off F when F -> A is irreducible.

        The peel is good when A/F is indecomposable and T -> A/F is irreducible
        too; a bad peel is refused so the caller records the dead end.
        """
        for peeled, kept in (summands, summands[::-1]):
            if not ar.arrows.get((peeled, a.dims)):
                continue
            x = b_iota.compose(split_embedding(ar.nodes[peeled], b_rep)).image_subrep()
            if x.spaces in seen:
                continue
            origin = f"irreducible summand {ar.label(peeled)} of B"
            quotient, _ = a.quotient(x)
            parts = decompose(quotient)
            if sum(parts.values()) == 1 and ar.arrows.get((kept, quotient.dims)):
                seen.add(x.spaces)
                yield x, origin, None
                continue
            shown = " + ".join(ar.label(r) for r in sorted(parts) for _ in range(parts[r]))
            yield x, origin, (f"{ar.label(kept)} -> {ar.label(a.dims)}/{ar.label(peeled)} = {shown} "
                              "is not a good mono")

    def _chain_split(self, a, b, x_sub, f, eq, label, origin) -> Optional[CellMultiset]:
        """B <= X <= A: the strata outside Phi(X), plus U(X, B)."""
        seq = self._sequence(a, x_sub)
        if seq is None:
            return None
        self._note(label, CHAIN_SPLIT, origin)
        outside, _ = self._strata(a, x_sub, seq, f, eq, label, skip_zero_g=True)
        inside = self._u(seq.x, _restrict(b, x_sub, seq.x), f)
        return outside + inside

    def _quotient_restrict(self, a, b, x_sub, f, eq, label, origin) -> Optional[CellMultiset]:
        """X <= B <= A: the strata whose image in Phi(A/X) avoids Phi(B/X)."""
        seq = self._sequence(a, x_sub)
        if seq is None:
            return None
        self._note(label, QUOTIENT_RESTRICT, origin)
        b_mod_x = b.image_under(seq.projection)
        cells, _ = self._strata(a, x_sub, seq, f, eq, label, restrict_to=b_mod_x)
        return cells


class _Frame:
    def __init__(self, stack: list, measure: tuple[int, int]):
        self.stack = stack
        self.measure = measure

    def __enter__(self):
        self.stack.append(self.measure)
        return self

    def __exit__(self, *exc):
        self.stack.pop()
        return False


def _restrict(b: Subrep, x_sub: Subrep, x: Representation) -> Subrep:
    """B <= X <= A, rewritten in the basis of X taken from x_sub's canonical columns."""
    spaces = []
    for space, ambient in zip(b.spaces, x_sub.spaces):
        coords = space.submatrix(pivots_of(ambient), range(space.cols))
        spaces.append(column_space(coords) if space.cols else Matrix.zeros(space.field, ambient.cols, 0))
    return Subrep(x, tuple(spaces))


def pave(m: Representation, d: int, strict: bool, f: Sequence[int]) -> PavingResult:
    return PavingEngine(d, strict).pave(m, f)


# counting by the same recursion


class _RecursiveCounter:
    """The paving recursion evaluated at q = p; U pieces fall back to count(A) - count(B).

    Never enumerates: a node the recursion cannot split raises UnresolvedPavingError.
    """

    def __init__(self, q, d: int, strict: bool, p: int):
        self.eq = build_extended(q, d, strict)
        self.d = d
        self.p = p
        self.ar = knit(q)
        self._memo: dict = {}

    def rep(self, m: Representation, f: DimVector) -> int:
        return self.parts(decompose(m), f)

    def parts(self, parts: Mapping[DimVector, int], f: DimVector) -> int:
        q = self.eq.base
        dims = dim_phi(_sum_dims(parts, len(q.vertices)), self.d)
        if any(x < 0 for x in f) or not dim_leq(f, dims):
            return 0
        if not parts:
            return 0 if any(f) else 1
        key = (_parts_key(parts), f)
        if key not in self._memo:
            if sum(parts.values()) > 1:
                self._memo[key] = self._split(parts, f)
            else:
                self._memo[key] = self._single(next(iter(parts)), f)
        return self._memo[key]

    def _split(self, parts, f) -> int:
        order = self.ar.topological_index
        last = max(parts, key=lambda r: order[r])
        rest = dict(parts)
        rest[last] -= 1
        rest = {r: k for r, k in rest.items() if k}
        top = dim_phi(last, self.d)
        total = 0
        for f1 in all_dimvecs(top):
            f2 = dim_sub(f, f1)
            if any(x < 0 for x in f2):
                continue
            c1 = self.parts({last: 1}, f1)
            c2 = self.parts(rest, f2) if c1 else 0
            if c1 and c2:
                total += self.p ** euler_R(self.eq, f2, dim_sub(top, f1)) * c1 * c2
        return total

    def _single(self, root: DimVector, f: DimVector) -> int:
        y = self.ar.nodes[root]
        if max(root) <= 2:
            try:
                return small_order_cells(phi(y, self.eq), f).evaluate(self.p)
            except BaseCaseUnsupported:
                pass
        monos = minimal_sectional_monos(self.ar, root)
        try:
            if not monos:
                raise ExtensionCountError("no minimal sectional mono")
            x_sub = monos[0].morphism.image_subrep()
            x, _ = y.subrepresentation(x_sub)
            s, _ = y.quotient(x_sub)
            x_s = compute_X_S(x, s).as_representation()
        except FlagPaveError as exc:
            raise UnresolvedPavingError(f"recursive count stuck at {_label(y)}: {exc}") from exc
        top = dim_phi(x.dims, self.d)
        full = dim_phi(s.dims, self.d)
        total = 0
        for f1 in all_dimvecs(top):
            g = dim_sub(f, f1)
            if any(v < 0 for v in g) or not dim_leq(g, full):
                continue
            if g == full:
                c = self.rep(x, f1) - self.rep(x_s, f1)
            else:
                c = self.rep(x, f1) * self.rep(s, g)
            if c:
                total += self.p ** euler_R(self.eq, g, dim_sub(top, f1)) * c
        return total


def count_recursive(m: Representation, d: int, strict: bool, f: Sequence[int], p: int) -> int:
    """|Gr_f(Phi(M))| over F_p by the stratification recursion."""
    if m.field != QQ:
        raise QuiverMismatchError("count_recursive takes a representation over the rationals")
    shape = classify(m.quiver)
    if not shape.is_dynkin:
        raise NotDynkinError(f"{shape.label} is not of Dynkin type")
    counter = _RecursiveCounter(m.quiver, d, strict, p)
    f = check_dimvec(counter.eq.quiver, f)
    return counter.rep(m, f)


# verification and reports


@dataclass
class PavingCheck:
    f: DimVector
    result: PavingResult
    primes: list[int] = dc_field(default_factory=list)
    brute: list[int] = dc_field(default_factory=list)
    evaluated: list[Optional[int]] = dc_field(default_factory=list)
    recursive: list[int] = dc_field(default_factory=list)

    @property
    def resolved(self) -> bool:
        return isinstance(self.result, CellMultiset)

    @property
    def matches(self) -> list[bool]:
        return [e == b and r == b for e, b, r in zip(self.evaluated, self.brute, self.recursive)]

    @property
    def ok(self) -> bool:
        return self.resolved and all(self.matches)

    def to_dict(self) -> dict:
        out = {"f": list(self.f)}
        if self.resolved:
            out["cells"] = self.result.to_dict()
            out["polynomial"] = self.result.as_polynomial()
            out["unresolved"] = None
        else:
            out["cells"] = None
            out["polynomial"] = None
            out["unresolved"] = self.result.to_dict()
        out["verification"] = {
            "primes": self.primes,
            "brute": self.brute,
            "evaluated": self.evaluated,
            "recursive": self.recursive,
            "match": self.matches,
        }
        return out


def verify_paving(m: Representation, d: int, strict: bool, f: Sequence[int], primes: Optional[Sequence[int]] = None,
                  budget=None, engine: Optional[PavingEngine] = None) -> PavingCheck:
    """Pave Gr_f(Phi(M)) and compare the cells with brute-force counts over each prime."""
    engine = engine or PavingEngine(d, strict)
    eq = engine.extended_quiver(m)
    f = check_dimvec(eq.quiver, f)
    primes = list(primes or get_settings().primes)
    result = engine.pave(m, f)
    check = PavingCheck(f, result, primes)
    for p in primes:
        brute = count_submodules(phi(reduce_mod(m, p), eq), f, budget=budget)
        check.brute.append(brute)
        check.evaluated.append(result.evaluate(p) if isinstance(result, CellMultiset) else None)
        try:
            check.recursive.append(count_recursive(m, d, strict, f, p))
        except UnresolvedPavingError as exc:
            logger.info("no recursive count for f=%s over F_%d: %s", f, p, exc)
            check.recursive.append(None)
        logger.debug("f=%s p=%d: brute %d, cells %s", f, p, brute, check.evaluated[-1])
    return check


def paving_report(m: Representation, d: int, strict: bool, fs: Optional[Sequence[Sequence[int]]] = None,
                  primes: Optional[Sequence[int]] = None, budget=None, module: str = "") -> dict:
    """Input descriptor, per-f cells with verification, strata and the recursion trail."""
    engine = PavingEngine(d, strict)
    if fs is None:
        fs = list(engine.pave_all(m))
    results, trail = [], []
    for f in fs:
        check = verify_paving(m, d, strict, f, primes, budget, engine)
        trail.extend(t.to_dict() for t in engine.trail)
        entry = check.to_dict()
        entry["strata"] = [
            {"f": list(row["f"]), "g": list(row["g"]), "rank": row["rank"], "cells": row["cells"],
             "image": row["image"]}
            for row in engine.strata(m, f)
        ]
        results.append(entry)
    shape = classify(m.quiver)
    return {
        "input": {
            "quiver": m.quiver.name,
            "type": shape.label,
            "module": module or _label(m),
            "dims": list(m.dims),
            "d": d,
            "strict": strict,
        },
        "results": results,
        "trail": trail,
        "ok": all(r["unresolved"] is None and all(r["verification"]["match"]) for r in results),
    }

"""
Extended quivers Q_d and Q_{d,str}, modules over their bounded algebra R,
the functor Phi and Ext^i over R.

Vertex ``(i, r)`` of the extended quiver has id ``"i:r"``; vertices are listed
level by level, so ``dim Phi(M)`` is ``d`` copies of ``dim M``. Vertical arrows
``"i:r^"`` go ``(i,r) -> (i,r+1)``. A base arrow ``a: i -> j`` gives level
arrows ``"a:r"``: ``(i,r) -> (j,r)`` in the non-strict case and
``(i,r) -> (j,r-1)`` in the strict case. Every square formed by a vertical and
a level arrow commutes in R; its virtual arrow ``"a:r*"`` records the two paths.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import (
    InvalidDepthError,
    MalformedRepresentationError,
    QuiverMismatchError,
    RelationViolationError,
)
from .exactlinalg import QQ, Field, Matrix, contains, rank
from .quiver import Arrow, DimVector, Quiver, check_dimvec, euler_form
from .rep import Morphism, Representation, Subrep, _check_same, hom_dim, hom_space

logger = logging.getLogger(__name__)


def vertex_id(vertex: str, level: int) -> str:
    return f"{vertex}:{level}"


def vertical_id(vertex: str, level: int) -> str:
    return f"{vertex}:{level}^"


def level_id(arrow_id: str, level: int) -> str:
    return f"{arrow_id}:{level}"


def virtual_id(arrow_id: str, level: int) -> str:
    return f"{arrow_id}:{level}*"


@dataclass(frozen=True)
class VirtualArrow:
    """A commutativity relation: both paths (first arrow, second arrow) run source -> target."""

    id: str
    source: str
    target: str
    paths: tuple[tuple[str, str], tuple[str, str]]

    def as_arrow(self) -> Arrow:
        return Arrow(self.id, self.source, self.target)


@dataclass(frozen=True)
class ExtendedQuiver:
    base: Quiver
    depth: int
    strict: bool
    quiver: Quiver
    virtual: tuple[VirtualArrow, ...]

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    @property
    def arrows(self) -> tuple[Arrow, ...]:
        return self.quiver.arrows

    @property
    def relations(self) -> list[tuple[tuple[str, str], tuple[str, str]]]:
        return [c.paths for c in self.virtual]

    def virtual_arrows(self) -> list[Arrow]:
        return [c.as_arrow() for c in self.virtual]

    def level_slice(self, vec: Sequence[int], level: int) -> DimVector:
        """The entries of an extended dimension vector at one level."""
        n = len(self.base.vertices)
        return tuple(vec[(level - 1) * n:level * n])

    def describe(self) -> dict:
        return {
            "base": self.base.name,
            "d": self.depth,
            "strict": self.strict,
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "from": a.source, "to": a.target} for a in self.arrows],
            "virtual_arrows": [
                {"id": c.id, "from": c.source, "to": c.target, "paths": [list(p) for p in c.paths]}
                for c in self.virtual
            ],
        }


def build_extended(q: Quiver, d: int, strict: bool = False) -> ExtendedQuiver:
    """The extended quiver Q_d (or Q_{d,str}) with its virtual arrows."""
    if d < 1:
        raise InvalidDepthError(f"depth must be at least 1, got {d}")
    if strict and d < 2:
        raise InvalidDepthError(f"the strict extended quiver needs d >= 2, got {d}")

    vertices = tuple(vertex_id(v, r) for r in range(1, d + 1) for v in q.vertices)
    arrows: list[Arrow] = []
    levels = range(2, d + 1) if strict else range(1, d + 1)
    for r in levels:
        for a in q.arrows:
            target_level = r - 1 if strict else r
            arrows.append(Arrow(level_id(a.id, r), vertex_id(a.source, r), vertex_id(a.target, target_level)))
    for r in range(1, d):
        for v in q.vertices:
            arrows.append(Arrow(vertical_id(v, r), vertex_id(v, r), vertex_id(v, r + 1)))

    virtual: list[VirtualArrow] = []
    for a in q.arrows:
        if strict:
            for r in range(2, d):
                virtual.append(VirtualArrow(
                    virtual_id(a.id, r), vertex_id(a.source, r), vertex_id(a.target, r),
                    ((vertical_id(a.source, r), level_id(a.id, r + 1)),
                     (level_id(a.id, r), vertical_id(a.target, r - 1)))))
        else:
            for r in range(1, d):
                virtual.append(VirtualArrow(
                    virtual_id(a.id, r), vertex_id(a.source, r), vertex_id(a.target, r + 1),
                    ((vertical_id(a.source, r), level_id(a.id, r + 1)),
                     (level_id(a.id, r), vertical_id(a.target, r)))))

    suffix = "str" if strict else ""
    name = f"{q.name or 'Q'}_{d}{',' + suffix if suffix else ''}"
    extended = Quiver(vertices, tuple(arrows), name=name)
    logger.debug("built %s: %d vertices, %d arrows, %d virtual arrows",
                 name, len(vertices), len(arrows), len(virtual))
    return ExtendedQuiver(q, d, strict, extended, tuple(virtual))


def dim_phi(vec: Sequence[int], d: int) -> DimVector:
    return tuple(vec) * d


@dataclass(frozen=True)
class BoundModule(Representation):
    """A representation of the extended quiver that satisfies the relations of R."""

    extended: ExtendedQuiver

    @classmethod
    def build(cls, eq: ExtendedQuiver, field: Field, dims: Sequence[int],
              matrices: Mapping[str, Sequence[Sequence]]) -> "BoundModule":
        plain = Representation.from_matrices(eq.quiver, field, dims, matrices)
        return cls(eq.quiver, field, plain.dims, plain.maps, eq)

    @classmethod
    def zero_module(cls, eq: ExtendedQuiver, field: Field = QQ) -> "BoundModule":
        return cls.build(eq, field, (0,) * len(eq.vertices), {})

    def _like(self, dims, maps, field: Optional[Field] = None) -> "BoundModule":
        return BoundModule(self.quiver, field or self.field, tuple(dims), tuple(maps), self.extended)

    def validate(self) -> list[str]:
        return validate(self)

    def checked(self) -> "BoundModule":
        violated = validate(self)
        if violated:
            raise RelationViolationError(f"relations violated at {', '.join(violated)}", violated)
        return self

    def __repr__(self) -> str:
        return f"BoundModule({self.quiver.name}, dims={self.dims}, {self.field!r})"


def validate(t: Representation, eq: Optional[ExtendedQuiver] = None) -> list[str]:
    """Ids of the virtual arrows whose two paths act differently on t."""
    eq = eq or getattr(t, "extended", None)
    if eq is None:
        raise QuiverMismatchError("validation needs the extended quiver")
    if t.quiver != eq.quiver:
        raise QuiverMismatchError("module does not live over this extended quiver")
    violated = []
    for c in eq.virtual:
        (a1, b1), (a2, b2) = c.paths
        if t.map(b1) @ t.map(a1) != t.map(b2) @ t.map(a2):
            violated.append(c.id)
    return violated


def as_bound(t: Representation, eq: ExtendedQuiver) -> BoundModule:
    """View a representation of eq's quiver as an R-module, checking the relations."""
    if isinstance(t, BoundModule):
        return t.checked()
    return BoundModule(eq.quiver, t.field, t.dims, t.maps, eq).checked()


# the functor Phi


def phi(m: Representation, eq: ExtendedQuiver) -> BoundModule:
    if m.quiver != eq.base:
        raise QuiverMismatchError("module is not over the base quiver of the extended quiver")
    q = eq.base
    maps = []
    for a in eq.arrows:
        if a.id.endswith("^"):
            vertex = a.source.rsplit(":", 1)[0]
            maps.append(Matrix.identity(m.field, m.dim_at(vertex)))
        else:
            maps.append(m.map(a.id.rsplit(":", 1)[0]))
    dims = dim_phi(m.dims, eq.depth)
    if len(q.vertices) * eq.depth != len(dims):
        raise MalformedRepresentationError("dimension vector does not fit the extended quiver")
    return BoundModule(eq.quiver, m.field, dims, tuple(maps), eq)


def phi_morphism(f: Morphism, eq: ExtendedQuiver) -> Morphism:
    return Morphism(phi(f.source, eq), phi(f.target, eq), tuple(f.maps) * eq.depth)


def phi_subrep(sub: Subrep, eq: ExtendedQuiver) -> Subrep:
    return Subrep(phi(sub.ambient, eq), tuple(sub.spaces) * eq.depth)


def flag_to_submodule(m: Representation, flag: Sequence[Subrep], eq: ExtendedQuiver) -> Subrep:
    """The submodule of Phi(M) whose level r is the r-th member of the flag."""
    if len(flag) != eq.depth:
        raise MalformedRepresentationError(f"a flag of length {len(flag)} for depth {eq.depth}")
    spaces = tuple(s for member in flag for s in member.spaces)
    sub = Subrep(phi(m, eq), spaces)
    if not sub.is_stable():
        kind = "strict flag" if eq.strict else "flag of subrepresentations"
        raise MalformedRepresentationError(f"the chain is not a {kind}")
    return sub


def submodule_to_flag(sub: Subrep, eq: ExtendedQuiver) -> list[Subrep]:
    """Inverse of flag_to_submodule: the level slices of a submodule of Phi(M)."""
    t = sub.ambient
    n = len(eq.base.vertices)
    base_module = Representation(eq.base, t.field, t.dims[:n],
                                 tuple(t.map(level_id(a.id, 2 if eq.strict else 1)) for a in eq.base.arrows))
    return [Subrep(base_module, tuple(sub.spaces[(r - 1) * n:r * n])) for r in range(1, eq.depth + 1)]


def is_flag(m: Representation, flag: Sequence[Subrep], strict: bool) -> bool:
    """A chain M_1 <= ... <= M_d of subspaces; subrepresentations, or M_a(M_r) <= M_{r-1} when strict."""
    for lower, upper in zip(flag, flag[1:]):
        if not upper.contains(lower):
            return False
    if not strict:
        return all(member.is_stable() for member in flag)
    q = m.quiver
    for r in range(1, len(flag)):
        for a, ma in zip(q.arrows, m.maps):
            s, t = q.index(a.source), q.index(a.target)
            if not contains(flag[r - 1].spaces[t], ma @ flag[r].spaces[s]):
                return False
    return True


# Hom and Ext over R


def hom_R(t: Representation, u: Representation) -> list[Morphism]:
    """Basis of Hom_R(T, T'); relations impose nothing beyond the arrows."""
    return hom_space(t, u)


def _sandwich(left: Matrix, right: Matrix) -> list[list]:
    """Matrix of phi -> left * phi * right on row-major vectorised phi."""
    field = left.field
    rows = []
    for i in range(left.rows):
        for j in range(right.cols):
            row = []
            for l in range(left.cols):
                a = left[i, l]
                for m in range(right.rows):
                    row.append(field.coerce(a * right[m, j]) if a else field.zero)
            rows.append(row)
    return rows


class _Blocks:
    """A block matrix assembled from per-block row lists."""

    def __init__(self, field: Field, row_sizes: Sequence[int], col_sizes: Sequence[int]):
        self.field = field
        self.row_off = [sum(row_sizes[:k]) for k in range(len(row_sizes))]
        self.col_off = [sum(col_sizes[:k]) for k in range(len(col_sizes))]
        self.rows = sum(row_sizes)
        self.cols = sum(col_sizes)
        self.data = [[field.zero] * self.cols for _ in range(self.rows)]

    def add(self, bi: int, bj: int, block: list[list], sign: int = 1) -> None:
        r0, c0 = self.row_off[bi], self.col_off[bj]
        for i, row in enumerate(block):
            target = self.data[r0 + i]
            for j, x in enumerate(row):
                if x:
                    target[c0 + j] = self.field.coerce(target[c0 + j] + sign * x)

    def matrix(self) -> Matrix:
        if self.rows == 0:
            return Matrix.zeros(self.field, 0, self.cols)
        return Matrix.from_rows(self.field, self.data, self.cols)


@dataclass(frozen=True)
class ExtComplex:
    """Hom(-, T') applied to the standard resolution of T: C0 -d0-> C1 -d1-> C2."""

    c0: int
    c1: int
    c2: int
    d0: Matrix
    d1: Matrix

    def cohomology(self) -> tuple[int, int, int]:
        r0, r1 = rank(self.d0), rank(self.d1)
        return self.c0 - r0, self.c1 - r1 - r0, self.c2 - r1


def ext_complex(t: Representation, u: Representation, eq: ExtendedQuiver) -> ExtComplex:
    _check_same(t, u)
    if t.quiver != eq.quiver:
        raise QuiverMismatchError("modules do not live over this extended quiver")
    q, field = eq.quiver, t.field
    ident = {v: Matrix.identity(field, t.dim_at(v)) for v in q.vertices}
    ident_u = {v: Matrix.identity(field, u.dim_at(v)) for v in q.vertices}

    c0_sizes = [u.dim_at(v) * t.dim_at(v) for v in q.vertices]
    c1_sizes = [u.dim_at(a.target) * t.dim_at(a.source) for a in q.arrows]
    c2_sizes = [u.dim_at(c.target) * t.dim_at(c.source) for c in eq.virtual]

    # d0(phi)_b = T'_b phi_s - phi_t T_b
    d0 = _Blocks(field, c1_sizes, c0_sizes)
    for k, a in enumerate(q.arrows):
        s, tt = q.index(a.source), q.index(a.target)
        d0.add(k, s, _sandwich(u.map(a.id), ident[a.source]))
        d0.add(k, tt, _sandwich(ident_u[a.target], t.map(a.id)), sign=-1)

    # d1(psi)_c = sum over the two paths (alpha, beta), with signs +, -,
    # of T'_beta psi_alpha + psi_beta T_alpha
    d1 = _Blocks(field, c2_sizes, c1_sizes)
    for k, c in enumerate(eq.virtual):
        for (alpha, beta), sign in zip(c.paths, (1, -1)):
            a_arrow, b_arrow = q.arrow(alpha), q.arrow(beta)
            d1.add(k, q.arrow_position(alpha), _sandwich(u.map(beta), ident[a_arrow.source]), sign)
            d1.add(k, q.arrow_position(beta), _sandwich(ident_u[b_arrow.target], t.map(alpha)), sign)
    return ExtComplex(sum(c0_sizes), sum(c1_sizes), sum(c2_sizes), d0.matrix(), d1.matrix())


def ext_R(t: Representation, u: Representation, i: int, eq: Optional[ExtendedQuiver] = None) -> int:
    """dim Ext^i_R(T, T') for i in 0, 1, 2."""
    if i not in (0, 1, 2):
        raise ValueError(f"Ext^{i} over R is always zero (global dimension <= 2); asked for i={i}")
    eq = eq or getattr(t, "extended", None) or getattr(u, "extended", None)
    if eq is None:
        raise QuiverMismatchError("ext_R needs the extended quiver")
    if i == 0:
        return hom_dim(t, u)
    return ext_complex(t, u, eq).cohomology()[i]


def ext_all(t: Representation, u: Representation, eq: Optional[ExtendedQuiver] = None) -> tuple[int, int, int]:
    eq = eq or getattr(t, "extended", None) or getattr(u, "extended", None)
    if eq is None:
        raise QuiverMismatchError("ext_all needs the extended quiver")
    return ext_complex(t, u, eq).cohomology()


def euler_R(eq: ExtendedQuiver, f: Sequence[int], g: Sequence[int]) -> int:
    """<f, g>_R = sum f_v g_v - sum over arrows + sum over virtual arrows."""
    check_dimvec(eq.quiver, f)
    check_dimvec(eq.quiver, g)
    return euler_form(eq.quiver, eq.virtual_arrows(), f, g)

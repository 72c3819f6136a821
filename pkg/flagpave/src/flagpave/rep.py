"""
Representations of quivers over exact fields, morphisms, Hom and Ext^1,
Krull-Schmidt decomposition by Hom-counts, and order statistics.

A representation stores one matrix per arrow (rows = dimension at the target,
columns = dimension at the source). Everything here also works over the
extended quivers of ``flagpave.extended``, whose modules subclass
``Representation``.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Optional, Sequence

from sympy import nextprime

from .errors import (
    DimensionMismatchError,
    InvalidRootError,
    MalformedRepresentationError,
    NotDynkinError,
    OutOfScopeError,
    PrimeUnsafeError,
    QuiverMismatchError,
)
from .exactlinalg import (
    GF,
    QQ,
    Field,
    Matrix,
    column_space,
    complement_basis,
    contains,
    intersect,
    inverse,
    kernel_basis,
    pivots_of,
    rank,
    solve,
    span,
    subspace_sum,
    whole_space,
)
from .quiver import DimVector, Quiver, check_dimvec, classify, euler_form

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Representation:
    quiver: Quiver
    field: Field
    dims: DimVector
    maps: tuple[Matrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(x) for x in self.dims))
        if len(self.dims) != len(self.quiver.vertices):
            raise DimensionMismatchError("one dimension per vertex is required")
        if any(x < 0 for x in self.dims):
            raise DimensionMismatchError("dimensions must be nonnegative")
        if len(self.maps) != len(self.quiver.arrows):
            raise DimensionMismatchError("one matrix per arrow is required")
        for a, m in zip(self.quiver.arrows, self.maps):
            expected = (self.dims[self.quiver.index(a.target)], self.dims[self.quiver.index(a.source)])
            if m.shape != expected:
                raise DimensionMismatchError(f"arrow {a.id}: matrix {m.shape}, expected {expected}")
            if m.field != self.field:
                raise QuiverMismatchError(f"arrow {a.id}: matrix over {m.field}, representation over {self.field}")

    # construction

    @classmethod
    def from_matrices(cls, quiver: Quiver, field: Field, dims: Sequence[int],
                      matrices: Mapping[str, Sequence[Sequence]]) -> "Representation":
        dims = check_dimvec(quiver, dims)
        maps = []
        for a in quiver.arrows:
            rows, cols = dims[quiver.index(a.target)], dims[quiver.index(a.source)]
            data = matrices.get(a.id)
            if data is None or rows == 0 or cols == 0:
                maps.append(Matrix.zeros(field, rows, cols))
            else:
                maps.append(Matrix.from_rows(field, data, cols))
        return cls(quiver, field, dims, tuple(maps))

    @classmethod
    def zero(cls, quiver: Quiver, field: Field = QQ) -> "Representation":
        return cls.from_matrices(quiver, field, (0,) * len(quiver.vertices), {})

    @classmethod
    def simple(cls, quiver: Quiver, vertex: str, field: Field = QQ) -> "Representation":
        dims = tuple(1 if v == vertex else 0 for v in quiver.vertices)
        return cls.from_matrices(quiver, field, dims, {})

    @classmethod
    def projective(cls, quiver: Quiver, vertex: str, field: Field = QQ) -> "Representation":
        """P(vertex): basis at x is the set of paths vertex -> x."""
        bases = {x: quiver.paths(vertex, x) for x in quiver.vertices}
        maps = []
        for a in quiver.arrows:
            src, tgt = bases[a.source], bases[a.target]
            rows = [[1 if t == s + (a.id,) else 0 for s in src] for t in tgt]
            maps.append(Matrix.from_rows(field, rows, len(src)) if tgt else Matrix.zeros(field, 0, len(src)))
        return cls(quiver, field, tuple(len(bases[x]) for x in quiver.vertices), tuple(maps))

    @classmethod
    def injective(cls, quiver: Quiver, vertex: str, field: Field = QQ) -> "Representation":
        """I(vertex): basis at x is dual to the paths x -> vertex."""
        bases = {x: quiver.paths(x, vertex) for x in quiver.vertices}
        maps = []
        for a in quiver.arrows:
            src, tgt = bases[a.source], bases[a.target]
            rows = [[1 if s == (a.id,) + t else 0 for s in src] for t in tgt]
            maps.append(Matrix.from_rows(field, rows, len(src)) if tgt else Matrix.zeros(field, 0, len(src)))
        return cls(quiver, field, tuple(len(bases[x]) for x in quiver.vertices), tuple(maps))

    # access

    @property
    def dimvec(self) -> DimVector:
        return self.dims

    def total_dim(self) -> int:
        return sum(self.dims)

    def dim_at(self, vertex: str) -> int:
        return self.dims[self.quiver.index(vertex)]

    def map(self, arrow_id: str) -> Matrix:
        return self.maps[self.quiver.arrow_position(arrow_id)]

    def is_zero(self) -> bool:
        return not any(self.dims)

    def path_map(self, path: Sequence[str], source: str) -> Matrix:
        """Matrix of the path (arrow ids in order of travel) starting at source."""
        result = Matrix.identity(self.field, self.dim_at(source))
        for arrow_id in path:
            result = self.map(arrow_id) @ result
        return result

    # constructions

    def _like(self, dims: Sequence[int], maps: Sequence[Matrix], field: Optional[Field] = None) -> "Representation":
        """Same kind of object over the same quiver with new data."""
        return Representation(self.quiver, field or self.field, tuple(dims), tuple(maps))

    def with_maps(self, maps: Sequence[Matrix]) -> "Representation":
        return self._like(self.dims, maps)

    def direct_sum(self, other: "Representation") -> "Representation":
        _check_same(self, other)
        dims = tuple(a + b for a, b in zip(self.dims, other.dims))
        maps = tuple(Matrix.block_diag(self.field, [m, n]) for m, n in zip(self.maps, other.maps))
        return self._like(dims, maps)

    def change_field(self, field: Field) -> "Representation":
        return self._like(self.dims, [m.change_field(field) for m in self.maps], field)

    def change_basis(self, transforms: Sequence[Matrix]) -> "Representation":
        """Isomorphic copy g_t M_a g_s^{-1}, one invertible matrix per vertex."""
        inverses = [inverse(g) for g in transforms]
        maps = []
        for a, m in zip(self.quiver.arrows, self.maps):
            s, t = self.quiver.index(a.source), self.quiver.index(a.target)
            maps.append(transforms[t] @ m @ inverses[s])
        return self.with_maps(maps)

    def dual(self) -> "Representation":
        """D M as a representation of the opposite quiver."""
        return Representation(self.quiver.opposite(), self.field, self.dims,
                              tuple(m.transpose() for m in self.maps))

    def identity(self) -> "Morphism":
        return Morphism(self, self, tuple(Matrix.identity(self.field, n) for n in self.dims))

    def subrepresentation(self, sub: "Subrep") -> tuple["Representation", "Morphism"]:
        """The subrepresentation spanned by sub, with its inclusion."""
        q = self.quiver
        piv = [pivots_of(space) for space in sub.spaces]
        maps = []
        for a, m in zip(q.arrows, self.maps):
            s, t = q.index(a.source), q.index(a.target)
            image = m @ sub.spaces[s]
            maps.append(image.submatrix(piv[t], range(image.cols)))
        x = self._like(sub.dimvec, maps)
        return x, Morphism(x, self, sub.spaces)

    def quotient(self, sub: "Subrep") -> tuple["Representation", "Morphism"]:
        """M / sub with basis the standard vectors at non-pivot coordinates, and the projection."""
        q, field = self.quiver, self.field
        projections, complements = [], []
        for k, space in enumerate(sub.spaces):
            n = self.dims[k]
            comp = complement_basis(space)
            piv = pivots_of(space)
            nonpiv = [i for i in range(n) if i not in set(piv)]
            select = Matrix.identity(field, n).submatrix(nonpiv, range(n))
            pick = Matrix.identity(field, n).submatrix(piv, range(n))
            along = space.submatrix(nonpiv, range(space.cols))
            projections.append(select - along @ pick if space.cols else select)
            complements.append(comp)
        maps = []
        for a, m in zip(q.arrows, self.maps):
            s, t = q.index(a.source), q.index(a.target)
            maps.append(projections[t] @ m @ complements[s])
        dims = tuple(c.cols for c in complements)
        s_rep = self._like(dims, maps)
        return s_rep, Morphism(self, s_rep, tuple(projections))

    def __repr__(self) -> str:
        return f"Representation({self.quiver.name or 'Q'}, dims={self.dims}, {self.field!r})"


def _check_same(m: Representation, n: Representation) -> None:
    if m.quiver != n.quiver:
        raise QuiverMismatchError("representations live over different quivers")
    if m.field != n.field:
        raise QuiverMismatchError(f"representations live over {m.field} and {n.field}")


@dataclass(frozen=True)
class Subrep:
    """Per-vertex canonical subspaces of a representation, stable under every arrow."""

    ambient: Representation
    spaces: tuple[Matrix, ...]

    @classmethod
    def zero(cls, ambient: Representation) -> "Subrep":
        return cls(ambient, tuple(Matrix.zeros(ambient.field, n, 0) for n in ambient.dims))

    @classmethod
    def whole(cls, ambient: Representation) -> "Subrep":
        return cls(ambient, tuple(whole_space(ambient.field, n) for n in ambient.dims))

    @classmethod
    def from_vectors(cls, ambient: Representation, vectors: Sequence[Sequence[Sequence]]) -> "Subrep":
        return cls(ambient, tuple(span(ambient.field, n, vecs) for n, vecs in zip(ambient.dims, vectors)))

    @property
    def dimvec(self) -> DimVector:
        return tuple(s.cols for s in self.spaces)

    def is_zero(self) -> bool:
        return not any(self.dimvec)

    def is_whole(self) -> bool:
        return self.dimvec == self.ambient.dims

    def is_stable(self) -> bool:
        q = self.ambient.quiver
        for a, m in zip(q.arrows, self.ambient.maps):
            s, t = q.index(a.source), q.index(a.target)
            if not contains(self.spaces[t], m @ self.spaces[s]):
                return False
        return True

    def contains(self, other: "Subrep") -> bool:
        return all(contains(a, b) for a, b in zip(self.spaces, other.spaces))

    def sum(self, other: "Subrep") -> "Subrep":
        return Subrep(self.ambient, tuple(subspace_sum(a, b) for a, b in zip(self.spaces, other.spaces)))

    def intersection(self, other: "Subrep") -> "Subrep":
        return Subrep(self.ambient, tuple(intersect(a, b) for a, b in zip(self.spaces, other.spaces)))

    def as_representation(self) -> Representation:
        return self.ambient.subrepresentation(self)[0]

    def image_under(self, morphism: "Morphism") -> "Subrep":
        if morphism.source != self.ambient:
            raise QuiverMismatchError("morphism does not start at the ambient representation")
        return morphism.image_of(self)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subrep) and self.spaces == other.spaces and self.ambient == other.ambient

    def __hash__(self) -> int:
        return hash(self.spaces)


@dataclass(frozen=True)
class Morphism:
    source: Representation
    target: Representation
    maps: tuple[Matrix, ...]

    def check(self) -> bool:
        """Commuting squares f_t X_b = Y_b f_s for every arrow b."""
        q = self.source.quiver
        for a, xm, ym in zip(q.arrows, self.source.maps, self.target.maps):
            s, t = q.index(a.source), q.index(a.target)
            if self.maps[t] @ xm != ym @ self.maps[s]:
                return False
        return True

    def compose(self, first: "Morphism") -> "Morphism":
        """self after first."""
        return Morphism(first.source, self.target, tuple(g @ f for g, f in zip(self.maps, first.maps)))

    def __add__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target, tuple(f + g for f, g in zip(self.maps, other.maps)))

    def scale(self, c) -> "Morphism":
        return Morphism(self.source, self.target, tuple(f.scale(c) for f in self.maps))

    def rank_vector(self) -> DimVector:
        return tuple(rank(f) for f in self.maps)

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.maps)

    def is_injective(self) -> bool:
        return self.rank_vector() == self.source.dims

    def is_surjective(self) -> bool:
        return self.rank_vector() == self.target.dims

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def kernel_subrep(self) -> Subrep:
        return Subrep(self.source, tuple(
            span(self.source.field, f.cols, kernel_basis(f)) for f in self.maps))

    def image_subrep(self) -> Subrep:
        return Subrep(self.target, tuple(column_space(f) for f in self.maps))

    def kernel(self) -> tuple[Representation, "Morphism"]:
        return self.source.subrepresentation(self.kernel_subrep())

    def image(self) -> tuple[Representation, "Morphism"]:
        return self.target.subrepresentation(self.image_subrep())

    def cokernel(self) -> tuple[Representation, "Morphism"]:
        return self.target.quotient(self.image_subrep())

    def image_of(self, sub: Subrep) -> Subrep:
        return Subrep(self.target, tuple(column_space(f @ s) if s.cols else Matrix.zeros(f.field, f.rows, 0)
                                         for f, s in zip(self.maps, sub.spaces)))

    def scalar(self) -> Fraction | int:
        """The scalar c of an endomorphism c*id (bricks); read off the first nonzero vertex."""
        for f in self.maps:
            if f.rows:
                return f[0, 0]
        return self.source.field.zero


# Hom and Ext^1


def _hom_system(m: Representation, n: Representation) -> tuple[Matrix, list[int]]:
    _check_same(m, n)
    q, field = m.quiver, m.field
    offsets, total = [], 0
    for k in range(len(q.vertices)):
        offsets.append(total)
        total += n.dims[k] * m.dims[k]
    rows = []
    zero = field.zero
    for a, ma, na in zip(q.arrows, m.maps, n.maps):
        s, t = q.index(a.source), q.index(a.target)
        ms, mt, ns, nt = m.dims[s], m.dims[t], n.dims[s], n.dims[t]
        # (F_t M_a - N_a F_s)[i, j] = 0
        for i in range(nt):
            for j in range(ms):
                row = [zero] * total
                for l in range(mt):
                    coeff = ma[l, j]
                    if coeff:
                        idx = offsets[t] + i * mt + l
                        row[idx] = field.coerce(row[idx] + coeff)
                for l in range(ns):
                    coeff = na[i, l]
                    if coeff:
                        idx = offsets[s] + l * ms + j
                        row[idx] = field.coerce(row[idx] - coeff)
                rows.append(row)
    return Matrix.from_rows(field, rows, total) if rows else Matrix.zeros(field, 0, total), offsets


def hom_space(m: Representation, n: Representation) -> list[Morphism]:
    """Basis of Hom(M, N), ordered by the kernel pivot order."""
    system, offsets = _hom_system(m, n)
    basis = []
    for v in kernel_basis(system):
        maps = []
        for k in range(len(m.dims)):
            rows, cols = n.dims[k], m.dims[k]
            chunk = v[offsets[k]:offsets[k] + rows * cols]
            maps.append(Matrix(m.field, rows, cols, tuple(chunk)))
        basis.append(Morphism(m, n, tuple(maps)))
    return basis


def hom_dim(m: Representation, n: Representation) -> int:
    system, _ = _hom_system(m, n)
    return system.cols - rank(system)


def ext1_dim(m: Representation, n: Representation) -> int:
    """dim Ext^1 over the path algebra, from [M,N] - <dim M, dim N>."""
    if not m.quiver.is_acyclic():
        raise OutOfScopeError("Ext^1 by the Euler identity needs an acyclic quiver")
    return hom_dim(m, n) - euler_form(m.quiver, (), m.dims, n.dims)


def isomorphism(m: Representation, n: Representation) -> Morphism:
    """An isomorphism M -> N between isomorphic bricks."""
    if m.dims != n.dims:
        raise MalformedRepresentationError("dimension vectors differ")
    basis = hom_space(m, n)
    candidates = list(basis)
    if len(basis) > 1:
        total = basis[0]
        for f in basis[1:]:
            total = total + f
        candidates.append(total)
    for f in candidates:
        if f.is_isomorphism():
            return f
    raise MalformedRepresentationError("representations are not isomorphic")


def split_embedding(n: Representation, m: Representation) -> Morphism:
    """A split mono N -> M for an indecomposable brick N that is a summand of M."""
    into = hom_space(n, m)
    back = hom_space(m, n)
    for iota in into:
        for r in back:
            if r.compose(iota).scalar() != 0:
                return iota
    raise MalformedRepresentationError("not a direct summand")


# short exact sequences


@dataclass(frozen=True)
class ShortExactSequence:
    """0 -> X -iota-> Y -pi-> S -> 0."""

    iota: Morphism
    pi: Morphism

    @property
    def sub(self) -> Representation:
        return self.iota.source

    @property
    def middle(self) -> Representation:
        return self.iota.target

    @property
    def quot(self) -> Representation:
        return self.pi.target

    @classmethod
    def from_submodule(cls, ambient: Representation, sub: Subrep) -> "ShortExactSequence":
        _, iota = ambient.subrepresentation(sub)
        _, pi = ambient.quotient(sub)
        return cls(iota, pi)

    def is_exact(self) -> bool:
        if not (self.iota.check() and self.pi.check()):
            return False
        if not (self.iota.is_injective() and self.pi.is_surjective()):
            return False
        return self.pi.compose(self.iota).is_zero() and all(
            x + s == y for x, y, s in zip(self.sub.dims, self.middle.dims, self.quot.dims))

    def splits(self) -> bool:
        """Split test by Krull-Schmidt: Y is isomorphic to X + S."""
        whole = decompose(self.middle)
        parts = decompose(self.sub)
        for root, k in decompose(self.quot).items():
            parts[root] = parts.get(root, 0) + k
        return whole == parts


# indecomposables, decomposition, orders


def build_indecomposable(q: Quiver, root: Sequence[int]) -> Representation:
    """The indecomposable with dimension vector root (a node of the knitted AR quiver)."""
    from .artheory import knit

    root = check_dimvec(q, root)
    ar = knit(q)
    if root not in ar.nodes:
        raise InvalidRootError(f"{root} is not a positive root of {q.name or 'the quiver'}")
    return ar.nodes[root]


_HOM_TABLES: dict = {}
_HOM_LOCK = threading.Lock()


def indecomposables_over(q: Quiver, field: Field) -> dict[DimVector, Representation]:
    from .artheory import knit

    key = (q, field, "nodes")
    with _HOM_LOCK:
        cached = _HOM_TABLES.get(key)
    if cached is not None:
        return cached
    nodes = {root: (rep if field == QQ else reduce_mod(rep, field.characteristic))
             for root, rep in knit(q).nodes.items()}
    with _HOM_LOCK:
        _HOM_TABLES.setdefault(key, nodes)
    return nodes


def _hom_table(q: Quiver, field: Field, roots: Sequence[DimVector]) -> list[list[int]]:
    nodes = indecomposables_over(q, field)
    table = []
    for a in roots:
        row = []
        for b in roots:
            key = (q, field, a, b)
            with _HOM_LOCK:
                value = _HOM_TABLES.get(key)
            if value is None:
                value = hom_dim(nodes[a], nodes[b])
                with _HOM_LOCK:
                    _HOM_TABLES[key] = value
            row.append(value)
        table.append(row)
    return table


def decompose(m: Representation) -> dict[DimVector, int]:
    """Multiplicity of each indecomposable summand, keyed by dimension vector."""
    q = m.quiver
    if not classify(q).is_dynkin:
        raise NotDynkinError("decomposition needs a Dynkin quiver")
    if m.is_zero():
        return {}
    nodes = indecomposables_over(q, m.field)
    candidates = [r for r in nodes if all(a <= b for a, b in zip(r, m.dims))]
    table = _hom_table(q, m.field, candidates)
    counts = [hom_dim(nodes[r], m) for r in candidates]
    result = solve(Matrix.from_rows(QQ, table, len(candidates)), counts)
    if result.solution is None:
        raise MalformedRepresentationError("Hom-count system is inconsistent")
    out: dict[DimVector, int] = {}
    for r, x in zip(candidates, result.solution):
        if x.denominator != 1 or x < 0:
            raise MalformedRepresentationError(f"non-integral multiplicity {x} for {r}")
        if x:
            out[r] = int(x)
    total = [0] * len(m.dims)
    for r, k in out.items():
        total = [t + k * x for t, x in zip(total, r)]
    if tuple(total) != m.dims:
        raise MalformedRepresentationError("summands do not add up to the dimension vector")
    return out


def is_indecomposable(m: Representation) -> bool:
    parts = decompose(m)
    return len(parts) == 1 and next(iter(parts.values())) == 1


def ord_(m: Representation) -> int:
    """max over vertices of dim M_i."""
    return max(m.dims, default=0)


def branch_vertex(q: Quiver) -> str:
    shape = classify(q)
    if shape.family != "E":
        raise NotDynkinError(f"ord_e needs a quiver of type E, got {shape.label}")
    g = q.graph()
    return next(v for v in q.vertices if g.degree(v) == 3)


def ord_e(m: Representation) -> int:
    """dim M_e at the unique branch vertex e of a type E quiver."""
    return m.dim_at(branch_vertex(m.quiver))


# prime safety


def reduce_mod(m: Representation, p: int) -> Representation:
    """M over GF(p); rejects p when a denominator vanishes or [M,M] changes."""
    reduced = m.change_field(GF(p))
    if m.field == QQ and hom_dim(reduced, reduced) != hom_dim(m, m):
        raise PrimeUnsafeError(f"[M,M] changes modulo {p}")
    return reduced


def safe_primes(m: Representation, count: int, start: int = 2) -> Iterator[int]:
    """The first count primes >= start passing the reduction guard for m."""
    found = 0
    p = start if start == 2 else nextprime(start - 1)
    while found < count:
        try:
            reduce_mod(m, p)
        except PrimeUnsafeError as exc:
            logger.info("rejecting prime %s: %s", p, exc)
        else:
            found += 1
            yield p
        p = nextprime(p)


def direct_sum_of(q: Quiver, roots: Mapping[Sequence[int], int], field: Field = QQ) -> Representation:
    """Direct sum of indecomposables, each repeated with its multiplicity."""
    total = Representation.zero(q, field)
    for root, k in roots.items():
        piece = build_indecomposable(q, root)
        if field != QQ:
            piece = reduce_mod(piece, field.characteristic)
        for _ in range(k):
            total = total.direct_sum(piece)
    return total

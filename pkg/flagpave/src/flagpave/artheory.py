"""
Auslander-Reiten theory for Dynkin quivers.

tau is computed from a minimal projective presentation P1 -> P0 -> M -> 0 as
the kernel of nu(P1) -> nu(P0), where the Nakayama functor sends P(i) to I(i).
``knit`` builds the preprojective component (the whole AR quiver in the
Dynkin case) from the projectives with tau^{-1}, keeping explicit matrices at
every node.
"""

from __future__ import annotations

import logging
import threading
from functools import cached_property
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import networkx as nx

from .errors import (
    ExtensionCountError,
    InjectiveInputError,
    InjectiveSummandError,
    InvalidRootError,
    MalformedRepresentationError,
    NotDynkinError,
    ProjectiveInputError,
    ProjectiveSummandError,
    QuiverMismatchError,
)
from .exactlinalg import QQ, Field, Matrix, complement_basis, contains, span
from .quiver import (
    DimVector,
    Quiver,
    QuiverShape,
    classify,
    coxeter_transform,
    coxeter_transform_inverse,
    dim_add,
    injective_dims,
    quiver_roots,
    stacked_label,
)
from .rep import (
    Morphism,
    Representation,
    Subrep,
    decompose,
    ext1_dim,
    hom_dim,
    hom_space,
    indecomposables_over,
    isomorphism,
)

logger = logging.getLogger(__name__)


# tau and tau^{-1}


def _path_module(q: Quiver, field: Field, tops: Sequence[str], injective: bool) -> tuple[Representation, dict]:
    """Direct sum of P(v) (or I(v)) over tops, with its basis labels (summand, path) per vertex."""
    bases = {}
    for x in q.vertices:
        if injective:
            bases[x] = [(k, p) for k, v in enumerate(tops) for p in q.paths(x, v)]
        else:
            bases[x] = [(k, p) for k, v in enumerate(tops) for p in q.paths(v, x)]
    maps = []
    for a in q.arrows:
        src, tgt = bases[a.source], bases[a.target]
        position = {label: i for i, label in enumerate(tgt)}
        rows = [[field.zero] * len(src) for _ in tgt]
        for j, (k, p) in enumerate(src):
            moved = None
            if injective:
                # delta_p with p = a + rest goes to delta_rest
                if p and p[0] == a.id:
                    moved = (k, p[1:])
            else:
                moved = (k, p + (a.id,))
            if moved is not None and moved in position:
                rows[position[moved]][j] = field.one
        maps.append(Matrix.from_rows(field, rows, len(src)) if tgt else Matrix.zeros(field, 0, len(src)))
    dims = tuple(len(bases[x]) for x in q.vertices)
    return Representation(q, field, dims, tuple(maps)), bases


def _radical_generators(q: Quiver, field: Field, module: Representation, spaces: Sequence[Matrix]) -> list[tuple[str, tuple]]:
    """Vectors of the given per-vertex subspaces that span them modulo the images of incoming arrows."""
    gens = []
    for v in q.vertices:
        k = q.index(v)
        space = spaces[k]
        if space.cols == 0:
            continue
        incoming = []
        for a in q.arrows_to(v):
            s = q.index(a.source)
            if spaces[s].cols:
                incoming.extend((module.map(a.id) @ spaces[s]).columns())
        current = span(field, module.dims[k], incoming)
        for col in space.columns():
            vector = Matrix.from_columns(field, [col], module.dims[k])
            if not contains(current, vector):
                gens.append((v, col))
                current = span(field, module.dims[k], current.columns() + [col])
    return gens


def _tau(m: Representation) -> Representation:
    q, field = m.quiver, m.field
    if not q.is_acyclic():
        raise NotDynkinError("tau needs an acyclic quiver")

    # projective cover P0 -> M
    tops = []
    for v in q.vertices:
        n = m.dim_at(v)
        if n == 0:
            continue
        incoming = [col for a in q.arrows_to(v) for col in m.map(a.id).columns()]
        rad = span(field, n, incoming)
        tops.extend((v, col) for col in complement_basis(rad).columns())
    p0, basis0 = _path_module(q, field, [v for v, _ in tops], injective=False)
    cover = []
    for x in q.vertices:
        columns = [m.path_map(p, tops[k][0]).apply(tops[k][1]) for k, p in basis0[x]]
        cover.append(Matrix.from_columns(field, columns, m.dim_at(x)) if columns
                     else Matrix.zeros(field, m.dim_at(x), 0))
    pi = Morphism(p0, m, tuple(cover))
    if not pi.is_surjective():
        raise MalformedRepresentationError("projective cover is not surjective")

    # P1 -> P0 from the top of the kernel
    kernel = pi.kernel_subrep()
    second = _radical_generators(q, field, p0, kernel.spaces)
    if not second:
        raise ProjectiveInputError(f"{m.dims} is projective")

    nu_p1, nbasis1 = _path_module(q, field, [y for y, _ in second], injective=True)
    nu_p0, nbasis0 = _path_module(q, field, [v for v, _ in tops], injective=True)
    maps = []
    for z in q.vertices:
        rows = [[field.zero] * len(nbasis1[z]) for _ in nbasis0[z]]
        position = {label: i for i, label in enumerate(nbasis0[z])}
        for j, (h, walk) in enumerate(nbasis1[z]):
            y, coeffs = second[h]
            for (g, p), c in zip(basis0[y], coeffs):
                if not c:
                    continue
                cut = len(walk) - len(p)
                if cut < 0 or tuple(walk[cut:]) != tuple(p):
                    continue
                i = position.get((g, tuple(walk[:cut])))
                if i is not None:
                    rows[i][j] = field.coerce(rows[i][j] + c)
        maps.append(Matrix.from_rows(field, rows, len(nbasis1[z])) if rows
                    else Matrix.zeros(field, 0, len(nbasis1[z])))
    nu = Morphism(nu_p1, nu_p0, tuple(maps))
    if not nu.check():
        raise MalformedRepresentationError("Nakayama image of the presentation does not commute")
    result, _ = nu.kernel()
    if result.is_zero():
        raise ProjectiveInputError(f"{m.dims} is projective")
    return result


def tau(m: Representation) -> Representation:
    """tau M at matrix level."""
    return _tau(m)


def tau_inv(m: Representation) -> Representation:
    """tau^{-1} M = D tau_{Q^op} D M."""
    try:
        result = _tau(m.dual()).dual()
    except ProjectiveInputError:
        raise InjectiveInputError(f"{m.dims} is injective")
    return Representation(m.quiver, m.field, result.dims, result.maps)


# knitting


@dataclass(frozen=True)
class ARSequence:
    """0 -> tau X -f-> E -g-> X -> 0 with E the sum of the AR predecessors of X."""

    f: Morphism
    g: Morphism
    middle_roots: tuple[DimVector, ...]

    @property
    def left(self) -> Representation:
        return self.f.source

    @property
    def middle(self) -> Representation:
        return self.f.target

    @property
    def right(self) -> Representation:
        return self.g.target

    def is_exact(self) -> bool:
        return (self.f.check() and self.g.check() and self.f.is_injective() and self.g.is_surjective()
                and self.g.compose(self.f).is_zero()
                and dim_add(self.left.dims, self.right.dims) == self.middle.dims)


@dataclass(frozen=True)
class SectionalPath:
    nodes: tuple[DimVector, ...]
    morphism: Morphism

    @property
    def source(self) -> DimVector:
        return self.nodes[0]

    @property
    def target(self) -> DimVector:
        return self.nodes[-1]

    def __len__(self) -> int:
        return len(self.nodes) - 1


@dataclass(frozen=True)
class SectionalMono:
    """A minimal sectional mono X -> Y between AR-quiver nodes."""

    path: SectionalPath

    @property
    def source(self) -> DimVector:
        return self.path.source

    @property
    def target(self) -> DimVector:
        return self.path.target

    @property
    def morphism(self) -> Morphism:
        return self.path.morphism

    @property
    def quotient_dims(self) -> DimVector:
        return tuple(y - x for x, y in zip(self.source, self.target))


@dataclass
class ARQuiver:
    quiver: Quiver
    shape: QuiverShape
    nodes: dict[DimVector, Representation]
    positions: dict[DimVector, tuple[str, int]]
    arrows: dict[tuple[DimVector, DimVector], int]
    translation: dict[DimVector, DimVector]
    _homs: dict = dc_field(default_factory=dict, repr=False)
    _irreducible: dict = dc_field(default_factory=dict, repr=False)
    _lock: threading.RLock = dc_field(default_factory=threading.RLock, repr=False)

    def node_of(self, root: Sequence[int]) -> Representation:
        root = tuple(root)
        if root not in self.nodes:
            raise InvalidRootError(f"{root} is not a node of the AR quiver")
        return self.nodes[root]

    def predecessors(self, root: Sequence[int]) -> list[DimVector]:
        root = tuple(root)
        return [a for (a, b), k in self.arrows.items() if b == root for _ in range(k)]

    def successors(self, root: Sequence[int]) -> list[DimVector]:
        root = tuple(root)
        return [b for (a, b), k in self.arrows.items() if a == root for _ in range(k)]

    def is_projective(self, root: Sequence[int]) -> bool:
        return self.positions[tuple(root)][1] == 0

    def is_injective(self, root: Sequence[int]) -> bool:
        return tuple(root) not in self.inverse_translation

    @cached_property
    def inverse_translation(self) -> dict[DimVector, DimVector]:
        return {b: a for a, b in self.translation.items()}

    def label(self, root: Sequence[int]) -> str:
        return stacked_label(self.shape, self.shape.from_quiver_order(self.quiver, root))

    def ord_e(self, root: Sequence[int]) -> Optional[int]:
        if self.shape.family != "E":
            return None
        g = self.quiver.graph()
        branch = next(v for v in self.quiver.vertices if g.degree(v) == 3)
        return tuple(root)[self.quiver.index(branch)]

    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        for root in self.nodes:
            g.add_node(root, label=self.label(root), position=self.positions[root])
        for (a, b), k in self.arrows.items():
            g.add_edge(a, b, multiplicity=k)
        return g

    def to_dot(self) -> str:
        names = {root: f'"{self.label(root)}"' for root in self.nodes}
        lines = ["digraph AR {", "  rankdir=LR;"]
        for root in self.ordered():
            i, k = self.positions[root]
            lines.append(f"  {names[root]} [label={names[root]}, tooltip=\"tau^-{k} P({i})\"];")
        for (a, b), k in self.arrows.items():
            for _ in range(k):
                lines.append(f"  {names[a]} -> {names[b]};")
        for x, tx in self.translation.items():
            lines.append(f"  {names[x]} -> {names[tx]} [style=dashed, constraint=false];")
        lines.append("}")
        return "\n".join(lines)

    @cached_property
    def topological_index(self) -> dict[DimVector, int]:
        """Position of each node in a linear order compatible with every AR arrow."""
        order = nx.lexicographical_topological_sort(self.graph(), key=lambda r: (self.positions[r][1], r))
        return {root: k for k, root in enumerate(order)}

    def ordered(self) -> list[DimVector]:
        """Nodes left to right: by tau-orbit step, then vertex order."""
        return sorted(self.nodes, key=lambda r: (self.positions[r][1], self.quiver.index(self.positions[r][0])))

    def to_dict(self) -> dict:
        return {
            "quiver": self.quiver.name,
            "type": self.shape.label,
            "nodes": [
                {
                    "root": list(root),
                    "label": self.label(root),
                    "position": [self.positions[root][0], self.positions[root][1]],
                    "projective": self.is_projective(root),
                    "injective": self.is_injective(root),
                    "ord_e": self.ord_e(root),
                }
                for root in self.ordered()
            ],
            "arrows": [{"from": list(a), "to": list(b), "multiplicity": k} for (a, b), k in self.arrows.items()],
            "translation": [{"from": list(x), "to": list(tx)} for x, tx in self.translation.items()],
        }

    # Hom spaces and irreducible maps between nodes

    def hom_basis(self, a: DimVector, b: DimVector) -> list[Morphism]:
        key = (a, b)
        with self._lock:
            cached = self._homs.get(key)
        if cached is None:
            cached = hom_space(self.nodes[a], self.nodes[b])
            with self._lock:
                self._homs[key] = cached
        return cached

    def _radical_square(self, a: DimVector, b: DimVector) -> Matrix:
        """Span of the composites a -> Z -> b through nodes Z other than a and b, as flat vectors."""
        field = self.nodes[a].field
        vectors = []
        for z in self.nodes:
            if z in (a, b):
                continue
            first = self.hom_basis(a, z)
            if not first:
                continue
            second = self.hom_basis(z, b)
            for g in second:
                for f in first:
                    vectors.append(_flatten(g.compose(f)))
        length = sum(r * c for r, c in zip(self.nodes[b].dims, self.nodes[a].dims))
        return span(field, length, vectors)

    def irreducible_dim(self, a: Sequence[int], b: Sequence[int]) -> int:
        a, b = tuple(a), tuple(b)
        if a == b:
            return 0
        total = len(self.hom_basis(a, b))
        if total == 0:
            return 0
        return total - self._radical_square(a, b).cols

    def irreducible_map(self, a: Sequence[int], b: Sequence[int]) -> Morphism:
        """A map between nodes lying in rad but not in rad^2."""
        a, b = tuple(a), tuple(b)
        key = (a, b)
        with self._lock:
            cached = self._irreducible.get(key)
        if cached is not None:
            return cached
        square = self._radical_square(a, b)
        for f in self.hom_basis(a, b):
            flat = Matrix.from_columns(square.field, [_flatten(f)], square.rows)
            if not contains(square, flat):
                with self._lock:
                    self._irreducible[key] = f
                return f
        raise MalformedRepresentationError(f"no irreducible map {a} -> {b}")


def _flatten(f: Morphism) -> tuple:
    return tuple(x for m in f.maps for x in m.entries)


_KNIT_CACHE: dict[Quiver, ARQuiver] = {}
_KNIT_LOCK = threading.RLock()


def knit(q: Quiver) -> ARQuiver:
    """The AR quiver of a Dynkin quiver, built once per quiver."""
    with _KNIT_LOCK:
        cached = _KNIT_CACHE.get(q)
        if cached is None:
            cached = _knit(q)
            _KNIT_CACHE[q] = cached
        return cached


def _knit(q: Quiver) -> ARQuiver:
    shape = classify(q)
    if not shape.is_dynkin:
        raise NotDynkinError(f"knitting needs a Dynkin quiver, got {shape.label}")
    injectives = set(injective_dims(q).values())

    orbits: dict[str, list[Representation]] = {}
    for v in q.vertices:
        current = Representation.projective(q, v, QQ)
        orbit = [current]
        while current.dims not in injectives:
            expected = coxeter_transform_inverse(q, current.dims)
            current = tau_inv(current)
            if current.dims != expected:
                raise MalformedRepresentationError(
                    f"tau^-1 gave {current.dims}, the Coxeter transformation predicts {expected}")
            orbit.append(current)
        orbits[v] = orbit
        logger.debug("orbit of P(%s): %d nodes", v, len(orbit))

    nodes: dict[DimVector, Representation] = {}
    positions: dict[DimVector, tuple[str, int]] = {}
    for v, orbit in orbits.items():
        for k, rep in enumerate(orbit):
            if rep.dims in nodes:
                raise MalformedRepresentationError(f"{rep.dims} appears twice while knitting")
            nodes[rep.dims] = rep
            positions[rep.dims] = (v, k)

    def at(v: str, k: int) -> Optional[DimVector]:
        orbit = orbits[v]
        return orbit[k].dims if 0 <= k < len(orbit) else None

    arrows: dict[tuple[DimVector, DimVector], int] = {}
    for a in q.arrows:
        i, j = a.source, a.target
        for k in range(max(len(orbits[i]), len(orbits[j])) + 1):
            # P(j) -> P(i) and its tau^{-k} shifts; then tau^{-k} P(i) -> tau^{-k-1} P(j)
            for src, tgt in ((at(j, k), at(i, k)), (at(i, k), at(j, k + 1))):
                if src is not None and tgt is not None:
                    arrows[(src, tgt)] = arrows.get((src, tgt), 0) + 1

    translation = {}
    for v, orbit in orbits.items():
        for k in range(1, len(orbit)):
            translation[orbit[k].dims] = orbit[k - 1].dims

    roots = set(quiver_roots(q))
    if set(nodes) != roots:
        raise MalformedRepresentationError(
            f"knitting found {len(nodes)} nodes for {len(roots)} positive roots")

    ar = ARQuiver(q, shape, nodes, positions, arrows, translation)
    for x, tx in translation.items():
        total = tuple(0 for _ in q.vertices)
        for e in ar.predecessors(x):
            total = dim_add(total, e)
        if total != dim_add(x, tx):
            raise MalformedRepresentationError(f"mesh ending at {x} is not additive")
    logger.info("knitted %s: %d nodes, %d arrows", shape.label, len(nodes), sum(arrows.values()))
    return ar


# sequences and irreducible maps for arbitrary bases


def _node_transport(ar: ARQuiver, m: Representation) -> Morphism:
    """An isomorphism from the AR node with m's dimension vector onto m."""
    node = ar.node_of(m.dims)
    if m.field != node.field:
        node = indecomposables_over(ar.quiver, m.field)[m.dims]
    if hom_dim(m, m) != 1:
        raise MalformedRepresentationError(f"representation with dims {m.dims} is not indecomposable")
    return isomorphism(node, m)


def irreducible_dim(m: Representation, n: Representation) -> int:
    """Multiplicity of the AR arrow M -> N."""
    ar = knit(m.quiver)
    for x in (m, n):
        if x.dims not in ar.nodes or hom_dim(x, x) != 1:
            raise InvalidRootError(f"{x.dims} is not an indecomposable")
    return ar.irreducible_dim(m.dims, n.dims)


def ar_sequence(x: Representation) -> ARSequence:
    """The almost split sequence ending at an indecomposable non-projective X."""
    q = x.quiver
    ar = knit(q)
    root = x.dims
    if root not in ar.nodes:
        raise InvalidRootError(f"{root} is not a positive root")
    if ar.is_projective(root):
        raise ProjectiveInputError(f"{root} is projective")
    to_x = _node_transport(ar, x)
    field = x.field
    preds = ar.predecessors(root)
    if field == QQ:
        nodes = ar.nodes
        pieces = [to_x.compose(ar.irreducible_map(e, root)) for e in preds]
    else:
        nodes = indecomposables_over(q, field)
        pieces = []
        for e in preds:
            f = ar.irreducible_map(e, root)
            reduced = Morphism(nodes[e], nodes[root], tuple(mm.change_field(field) for mm in f.maps))
            pieces.append(to_x.compose(reduced))
    middle = Representation.zero(q, field)
    for e in preds:
        middle = middle.direct_sum(nodes[e])
    g_maps = []
    for k in range(len(q.vertices)):
        blocks = [piece.maps[k] for piece in pieces]
        g_maps.append(blocks[0].hstack(*blocks[1:]) if blocks else Matrix.zeros(field, x.dims[k], 0))
    g = Morphism(middle, x, tuple(g_maps))
    left, f = g.kernel()
    seq = ARSequence(f, g, tuple(preds))
    if not seq.is_exact():
        raise MalformedRepresentationError(f"AR sequence ending at {root} is not exact")
    if left.dims != ar.translation[root]:
        raise MalformedRepresentationError(f"kernel {left.dims} is not tau of {root}")
    return seq


# sectional paths and minimal sectional monos


def sectional_paths_into(ar: ARQuiver, target: Sequence[int]) -> list[SectionalPath]:
    """Every sectional path X_0 -> ... -> X_t = target with t >= 1, with its composite."""
    target = tuple(target)
    if target not in ar.nodes:
        raise InvalidRootError(f"{target} is not a node of the AR quiver")
    found: list[SectionalPath] = []

    def extend(walk: list[DimVector], composite: Morphism) -> None:
        head = walk[0]
        for pred in dict.fromkeys(ar.predecessors(head)):
            if len(walk) >= 2 and ar.translation.get(walk[1]) == pred:
                continue
            step = composite.compose(ar.irreducible_map(pred, head))
            new_walk = [pred] + walk
            found.append(SectionalPath(tuple(new_walk), step))
            extend(new_walk, step)

    extend([target], ar.nodes[target].identity())
    return found


def _is_minimal(ar: ARQuiver, path: SectionalPath) -> bool:
    if not path.morphism.is_injective():
        return False
    # each tail X_i -> Y with i >= 1 must be onto
    nodes = path.nodes
    tail = ar.nodes[nodes[-1]].identity()
    for i in range(len(nodes) - 2, 0, -1):
        tail = tail.compose(ar.irreducible_map(nodes[i], nodes[i + 1]))
        if not tail.is_surjective():
            return False
    return True


def minimal_sectional_monos(ar: ARQuiver, target: Sequence[int]) -> list[SectionalMono]:
    """Minimal sectional monos into target, in the order the engine tries them.

    Sources with larger total dimension come first. Ties go to the dimension
    vector that is lexicographically largest in the quiver's vertex order.
    """
    best: dict[DimVector, SectionalMono] = {}
    for path in sectional_paths_into(ar, target):
        if path.source not in best and _is_minimal(ar, path):
            best[path.source] = SectionalMono(path)
    return sorted(best.values(), key=lambda s: (-sum(s.source), tuple(-x for x in s.source)))


def find_minimal_sectional_mono(y: Representation) -> Optional[tuple[Representation, Morphism]]:
    """The selected minimal sectional mono X -> Y, realized inside Y's own basis."""
    ar = knit(y.quiver)
    if y.dims not in ar.nodes:
        raise InvalidRootError(f"{y.dims} is not a positive root")
    candidates = minimal_sectional_monos(ar, y.dims)
    if not candidates:
        return None
    return realize_mono(ar, candidates[0], y)


def realize_mono(ar: ARQuiver, mono: SectionalMono, y: Representation) -> tuple[Representation, Morphism]:
    """Transport a node-level sectional mono into the given copy of its target."""
    to_y = _node_transport(ar, y)
    f = mono.morphism
    if y.field != QQ:
        nodes = indecomposables_over(ar.quiver, y.field)
        f = Morphism(nodes[mono.source], nodes[mono.target], tuple(m.change_field(y.field) for m in f.maps))
    embedding = to_y.compose(f)
    return embedding.source, embedding


# X_S and S^X


def _nodes_for(q: Quiver, field: Field) -> dict[DimVector, Representation]:
    return knit(q).nodes if field == QQ else indecomposables_over(q, field)


def _check_pair(x: Representation, s: Representation) -> None:
    if x.quiver != s.quiver or x.field != s.field:
        raise QuiverMismatchError("X and S must live over the same quiver and field")
    e = ext1_dim(s, x)
    if e != 1:
        raise ExtensionCountError(f"[S,X]^1 = {e}, expected 1")


def compute_X_S(x: Representation, s: Representation) -> Subrep:
    """X_S, the largest M <= X with [S, X/M]^1 = 1: the kernel of the nonzero map X -> tau S."""
    _check_pair(x, s)
    q = x.quiver
    ar = knit(q)
    nodes = _nodes_for(q, x.field)
    linked = [r for r in decompose(s) if ext1_dim(nodes[r], x)]
    if len(linked) != 1:
        raise ExtensionCountError(f"{len(linked)} summands of S extend X")
    tau_root = ar.translation[linked[0]]
    maps = hom_space(x, nodes[tau_root])
    if len(maps) != 1:
        raise InjectiveSummandError(f"[X, tau S] = {len(maps)}, so X -> tau S is not unique up to scalar")
    return maps[0].kernel_subrep()


def compute_S_X(x: Representation, s: Representation) -> Subrep:
    """S^X, the largest M <= S with [M, X]^1 = 1: the image of the nonzero map tau^{-1} X -> S."""
    _check_pair(x, s)
    q = x.quiver
    ar = knit(q)
    nodes = _nodes_for(q, x.field)
    linked = [r for r in decompose(x) if ext1_dim(s, nodes[r])]
    if len(linked) != 1:
        raise ExtensionCountError(f"{len(linked)} summands of X are extended by S")
    inv_root = ar.inverse_translation[linked[0]]
    maps = hom_space(nodes[inv_root], s)
    if len(maps) != 1:
        raise ProjectiveSummandError(f"[tau^-1 X, S] = {len(maps)}, so tau^-1 X -> S is not unique up to scalar")
    return maps[0].image_subrep()


def compute_S_X_bruteforce(x: Representation, s: Representation, p: int,
                           budget: Optional[int] = None) -> Subrep:
    """S^X over GF(p) by maximizing over every submodule of S."""
    from .exactlinalg import GF
    from .grassmann import Budget, all_dimvecs, enumerate_submodules
    from .rep import reduce_mod

    field = GF(p)
    if x.field != field:
        x = reduce_mod(x, p)
    if s.field != field:
        s = reduce_mod(s, p)
    _check_pair(x, s)
    counter = Budget(budget)
    hits: list[Subrep] = []
    for f in all_dimvecs(s.dims):
        for sub in enumerate_submodules(s, f, budget=counter):
            if ext1_dim(sub.as_representation(), x) == 1:
                hits.append(sub)
    if not hits:
        raise ExtensionCountError("no submodule of S extends X")
    top = max(hits, key=lambda sub: sum(sub.dimvec))
    if not all(top.contains(sub) for sub in hits):
        raise MalformedRepresentationError("submodules extending X have no largest element")
    return top


def x_s_from_almost_split(ar: ARQuiver, path: SectionalPath) -> Optional[dict[DimVector, int]]:
    """Iso class of X_S from the right almost split map E -> X.

    For a sectional mono X = X_0 -> X_1 -> ... -> Y with E = E' + tau X_1:
    X_S is E' + ker(tau X_1 -> tau Y), or E when Y is projective. Returns
    None when X_1 is projective, where the description does not apply.
    """
    x, x1, y = path.nodes[0], path.nodes[1], path.nodes[-1]
    preds = ar.predecessors(x)
    out: dict[DimVector, int] = {}
    if ar.is_projective(y):
        for e in preds:
            out[e] = out.get(e, 0) + 1
        return out
    if ar.is_projective(x1):
        return None
    t1, ty = ar.translation[x1], ar.translation[y]
    rest = list(preds)
    if t1 not in rest:
        return None
    rest.remove(t1)
    for e in rest:
        out[e] = out.get(e, 0) + 1
    if t1 == ty:
        return out
    shifted = [ar.translation.get(node) for node in path.nodes[1:]]
    if all(node is not None for node in shifted):
        g = ar.nodes[shifted[0]].identity()
        for a, b in zip(shifted, shifted[1:]):
            g = ar.irreducible_map(a, b).compose(g)
    else:
        basis = ar.hom_basis(t1, ty)
        if len(basis) != 1:
            return None
        g = basis[0]
    kernel, _ = g.kernel()
    for r, k in decompose(kernel).items():
        out[r] = out.get(r, 0) + k
    return out


# Hom/Ext pattern of a minimal sectional mono


EXPECTED_MONO_TABLE = {
    "[X,X]": 1, "[X,Y]": 1, "[X,S]": 0,
    "[Y,X]": 0, "[Y,Y]": 1, "[Y,S]": 1,
    "[S,X]": 0, "[S,Y]": 0, "[S,S]": 1,
    "[X,X]^1": 0, "[X,Y]^1": 0, "[X,S]^1": 0,
    "[Y,X]^1": 0, "[Y,Y]^1": 0, "[Y,S]^1": 0,
    "[S,X]^1": 1, "[S,Y]^1": 0, "[S,S]^1": 0,
}


def mono_hom_table(x: Representation, y: Representation, s: Representation) -> dict[str, int]:
    """The nine Hom and nine Ext^1 dimensions among X, Y and S = Y/X."""
    named = {"X": x, "Y": y, "S": s}
    out = {}
    for a, ma in named.items():
        for b, mb in named.items():
            out[f"[{a},{b}]"] = hom_dim(ma, mb)
    for a, ma in named.items():
        for b, mb in named.items():
            out[f"[{a},{b}]^1"] = ext1_dim(ma, mb)
    return out


def tau_dims(q: Quiver, root: Sequence[int]) -> DimVector:
    """dim tau of an indecomposable, read from the knitted translation."""
    ar = knit(q)
    root = tuple(root)
    if root not in ar.translation:
        raise ProjectiveInputError(f"{root} is projective")
    value = ar.translation[root]
    if value != coxeter_transform(q, root):
        raise MalformedRepresentationError("translation disagrees with the Coxeter transformation")
    return value

"""
Quivers, dimension vectors, Dynkin/affine classification, root systems,
Euler forms and the Coxeter transformation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import Iterable, NamedTuple, Optional, Sequence

import networkx as nx

from .errors import (
    DimensionMismatchError,
    DisconnectedQuiverError,
    InjectiveInputError,
    NotDynkinError,
    ProjectiveInputError,
)
from .exactlinalg import QQ, Matrix, kernel_basis, solve

logger = logging.getLogger(__name__)


DimVector = tuple[int, ...]

DYNKIN_FAMILIES = ("A", "D", "E")
AFFINE_FAMILIES = ("affineA", "affineD", "affineE")


class Arrow(NamedTuple):
    id: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "arrows", tuple(Arrow(*a) for a in self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex ids must be unique")
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise ValueError("arrow ids must be unique")
        known = set(self.vertices)
        for a in self.arrows:
            if a.source not in known or a.target not in known:
                raise ValueError(f"arrow {a.id} has an endpoint outside the vertex set")

    @cached_property
    def _index(self) -> dict[str, int]:
        return {v: k for k, v in enumerate(self.vertices)}

    @cached_property
    def _arrow_index(self) -> dict[str, Arrow]:
        return {a.id: a for a in self.arrows}

    @cached_property
    def _arrow_position(self) -> dict[str, int]:
        return {a.id: k for k, a in enumerate(self.arrows)}

    def index(self, vertex: str) -> int:
        return self._index[vertex]

    def arrow_position(self, arrow_id: str) -> int:
        return self._arrow_position[arrow_id]

    def arrow(self, arrow_id: str) -> Arrow:
        return self._arrow_index[arrow_id]

    def arrows_from(self, vertex: str) -> list[Arrow]:
        return [a for a in self.arrows if a.source == vertex]

    def arrows_to(self, vertex: str) -> list[Arrow]:
        return [a for a in self.arrows if a.target == vertex]

    @cached_property
    def _opposite(self) -> "Quiver":
        return Quiver(self.vertices, tuple(Arrow(a.id, a.target, a.source) for a in self.arrows),
                      name=f"{self.name}^op" if self.name else "")

    def opposite(self) -> "Quiver":
        return self._opposite

    def graph(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        for a in self.arrows:
            g.add_edge(a.source, a.target, key=a.id)
        return g

    def digraph(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.vertices)
        for a in self.arrows:
            g.add_edge(a.source, a.target, key=a.id)
        return g

    def is_acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.digraph())

    @cached_property
    def _paths(self) -> dict[tuple[str, str], list[tuple[str, ...]]]:
        if not self.is_acyclic():
            raise ValueError("paths are only enumerated for acyclic quivers")
        paths: dict[tuple[str, str], list[tuple[str, ...]]] = {}
        for v in self.vertices:
            paths.setdefault((v, v), []).append(())
        # extend paths arrow by arrow in topological order of their last vertex
        for v in nx.topological_sort(self.digraph()):
            for a in self.arrows_from(v):
                for (s, t), plist in list(paths.items()):
                    if t == v:
                        paths.setdefault((s, a.target), []).extend(p + (a.id,) for p in plist)
        return paths

    def paths(self, source: str, target: str) -> list[tuple[str, ...]]:
        """Arrow-id sequences of all paths source -> target, trivial path included."""
        return list(self._paths.get((source, target), []))

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "from": a.source, "to": a.target} for a in self.arrows],
        }

    @classmethod
    def from_dict(cls, data: dict, name: str = "") -> "Quiver":
        return cls(
            tuple(data["vertices"]),
            tuple(Arrow(a["id"], a["from"], a["to"]) for a in data["arrows"]),
            name=name,
        )


# dimension vectors


def dim_zero(n: int) -> DimVector:
    return (0,) * n


def dim_add(f: Sequence[int], g: Sequence[int]) -> DimVector:
    return tuple(a + b for a, b in zip(f, g))


def dim_sub(f: Sequence[int], g: Sequence[int]) -> DimVector:
    return tuple(a - b for a, b in zip(f, g))


def dim_leq(f: Sequence[int], g: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(f, g))


def dim_total(f: Sequence[int]) -> int:
    return sum(f)


def check_dimvec(q: Quiver, f: Sequence[int]) -> DimVector:
    if len(f) != len(q.vertices):
        raise DimensionMismatchError(f"dimension vector of length {len(f)} for {len(q.vertices)} vertices")
    return tuple(int(x) for x in f)


# classification


@dataclass(frozen=True)
class QuiverShape:
    """Type of the underlying graph, plus the canonical vertex order.

    ``order[k]`` is the quiver vertex at canonical position ``k``; ``edges`` are
    canonical position pairs; ``layout[k]`` is ``(row, column)`` in the two-row
    table layout (row 0 bottom, row 1 top).
    """

    family: str
    rank: int
    order: tuple[str, ...] = ()
    edges: tuple[tuple[int, int], ...] = ()
    layout: tuple[tuple[int, int], ...] = ()

    @property
    def is_dynkin(self) -> bool:
        return self.family in DYNKIN_FAMILIES

    @property
    def is_affine(self) -> bool:
        return self.family in AFFINE_FAMILIES

    @property
    def label(self) -> str:
        if self.family == "other":
            return "other"
        if self.is_affine:
            return f"affine {self.family[-1]}{self.rank}"
        return f"{self.family}{self.rank}"

    def to_quiver_order(self, q: Quiver, vec: Sequence[int]) -> DimVector:
        out = [0] * len(q.vertices)
        for k, v in enumerate(self.order):
            out[q.index(v)] = vec[k]
        return tuple(out)

    def from_quiver_order(self, q: Quiver, vec: Sequence[int]) -> DimVector:
        return tuple(vec[q.index(v)] for v in self.order)


def _walk_arm(g: nx.MultiGraph, branch: str, start: str) -> list[str]:
    arm = [start]
    prev, cur = branch, start
    while True:
        nxt = [w for w in g.neighbors(cur) if w != prev]
        if len(nxt) != 1 or g.degree(cur) != 2:
            return arm
        prev, cur = cur, nxt[0]
        arm.append(cur)


def _shape(family: str, rank: int, bottom: list[str], top: list[tuple[str, int]],
           g: nx.MultiGraph) -> QuiverShape:
    order = tuple(bottom) + tuple(v for v, _ in top)
    pos = {v: k for k, v in enumerate(order)}
    layout = tuple((0, c) for c in range(len(bottom))) + tuple((1, c) for _, c in top)
    edges = tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in g.edges()))
    return QuiverShape(family, rank, order, edges, layout)


def classify(q: Quiver) -> QuiverShape:
    """Dynkin/affine type of the underlying graph with its canonical vertex order."""
    g = q.graph()
    n = len(q.vertices)
    if n == 0 or not nx.is_connected(g):
        raise DisconnectedQuiverError("classification needs a nonempty connected quiver")
    idx = q.index
    m = g.number_of_edges()
    loops = nx.number_of_selfloops(g)
    simple = nx.Graph(g)

    if loops:
        if n == 1 and m == 1:
            return _shape("affineA", 0, [q.vertices[0]], [], g)
        return QuiverShape("other", n)
    if simple.number_of_edges() != m:
        if n == 2 and m == 2:
            return _shape("affineA", 1, [q.vertices[0]], [(q.vertices[1], 0)], g)
        return QuiverShape("other", n)

    degrees = dict(g.degree())
    if m == n and all(d == 2 for d in degrees.values()):
        start = q.vertices[0]
        walk = [start]
        prev, cur = None, min(g.neighbors(start), key=idx)
        prev = start
        while cur != start:
            walk.append(cur)
            prev, cur = cur, next(w for w in g.neighbors(cur) if w != prev)
        shape = _shape("affineA", n - 1, walk[:-1], [(walk[-1], (n - 2) // 2)], g)
        return _confirmed(shape, g)
    if m != n - 1:
        return QuiverShape("other", n)

    branches = sorted((v for v, d in degrees.items() if d >= 3), key=idx)
    if not branches:
        if n == 1:
            return _shape("A", 1, [q.vertices[0]], [], g)
        start = min((v for v, d in degrees.items() if d == 1), key=idx)
        return _confirmed(_shape("A", n, [start] + _walk_arm(g, start, next(iter(g.neighbors(start)))), [], g), g)

    if len(branches) == 1:
        b = branches[0]
        arms = [_walk_arm(g, b, w) for w in g.neighbors(b)]
        arms.sort(key=lambda arm: (-len(arm), idx(arm[-1])))
        lengths = sorted(len(arm) for arm in arms)
        if degrees[b] == 4 and lengths == [1, 1, 1, 1]:
            leaves = sorted((arm[0] for arm in arms), key=idx)
            return _confirmed(_shape("affineD", 4, [leaves[0], b, leaves[1]],
                                     [(leaves[2], 1), (leaves[3], 2)], g), g)
        if degrees[b] != 3:
            return QuiverShape("other", n)
        long_arm, mid_arm, short_arm = arms
        bottom = list(reversed(long_arm)) + [b] + mid_arm
        col = len(long_arm)
        top = [(v, col - k) for k, v in enumerate(short_arm)]
        family = {
            (1, 2, 2): ("E", 6), (1, 2, 3): ("E", 7), (1, 2, 4): ("E", 8),
            (2, 2, 2): ("affineE", 6), (1, 3, 3): ("affineE", 7), (1, 2, 5): ("affineE", 8),
        }.get(tuple(lengths))
        if lengths[0] == 1 and lengths[1] == 1:
            family = ("D", n)
        if family is None:
            return QuiverShape("other", n)
        return _confirmed(_shape(family[0], family[1], bottom, top, g), g)

    if len(branches) == 2 and all(degrees[b] == 3 for b in branches):
        leaves_of = {b: sorted((w for w in g.neighbors(b) if degrees[w] == 1), key=idx) for b in branches}
        if all(len(v) == 2 for v in leaves_of.values()):
            b1, b2 = sorted(branches, key=lambda b: idx(leaves_of[b][0]))
            middle = nx.shortest_path(simple, b1, b2)
            (a1, a2), (c1, c2) = leaves_of[b1], leaves_of[b2]
            bottom = [a1] + middle + [c1]
            top = [(a2, 1), (c2, len(middle))]
            return _confirmed(_shape("affineD", n - 1, bottom, top, g), g)
    return QuiverShape("other", n)


def dynkin_diagram(family: str, rank: int) -> tuple[int, list[tuple[int, int]]]:
    """Vertex count and canonical position edges of a Dynkin or affine diagram."""
    if family == "A":
        return rank, [(k, k + 1) for k in range(rank - 1)]
    if family == "D":
        if rank < 4:
            raise ValueError("D needs rank at least 4")
        k = rank - 3
        edges = [(i, i + 1) for i in range(k)] + [(k, k + 1), (k, k + 2)]
        return rank, edges
    if family == "E":
        if rank not in (6, 7, 8):
            raise ValueError("E needs rank 6, 7 or 8")
        long_len = {6: 2, 7: 3, 8: 4}[rank]
        b = long_len
        edges = [(i, i + 1) for i in range(b)] + [(b, b + 1), (b + 1, b + 2), (b, rank - 1)]
        return rank, edges
    if family == "affineA":
        n = rank + 1
        if rank == 0:
            return 1, [(0, 0)]
        if rank == 1:
            return 2, [(0, 1), (0, 1)]
        return n, [(k, k + 1) for k in range(n - 1)] + [(0, n - 1)]
    if family == "affineD":
        if rank < 4:
            raise ValueError("affine D needs rank at least 4")
        n = rank + 1
        if rank == 4:
            return 5, [(0, 1), (1, 2), (1, 3), (1, 4)]
        path = rank - 3
        bottom = path + 2
        edges = [(i, i + 1) for i in range(bottom - 1)] + [(1, bottom), (bottom - 2, bottom + 1)]
        return n, edges
    if family == "affineE":
        arms = {6: (2, 2, 2), 7: (3, 3, 1), 8: (5, 2, 1)}.get(rank)
        if arms is None:
            raise ValueError("affine E needs rank 6, 7 or 8")
        long_len, mid_len, short_len = arms
        b = long_len
        edges = [(i, i + 1) for i in range(b + mid_len)]
        first_top = b + mid_len + 1
        edges.append((b, first_top))
        edges += [(first_top + k, first_top + k + 1) for k in range(short_len - 1)]
        return rank + 1, edges
    raise ValueError(f"unknown family {family!r}")


def standard_quiver(family: str, rank: int) -> Quiver:
    """Diagram with vertices "1".."n" in canonical order, arrows from lower to higher position."""
    n, edges = dynkin_diagram(family, rank)
    vertices = tuple(str(k + 1) for k in range(n))
    arrows = tuple(Arrow(f"a{k + 1}", str(i + 1), str(j + 1)) for k, (i, j) in enumerate(edges))
    return Quiver(vertices, arrows, name=f"{family}{rank}")


def _confirmed(shape: QuiverShape, g: nx.MultiGraph) -> QuiverShape:
    n, edges = dynkin_diagram(shape.family, shape.rank)
    reference = nx.MultiGraph()
    reference.add_nodes_from(range(n))
    reference.add_edges_from(edges)
    if not nx.is_isomorphic(nx.MultiGraph(g), reference):
        logger.warning("degree analysis gave %s but the isomorphism test disagrees", shape.label)
        return QuiverShape("other", len(g))
    return shape


def shape_for(family: str, rank: int) -> QuiverShape:
    """Shape of the standard diagram of a family and rank."""
    return classify(standard_quiver(family, rank))


# root systems


def symmetric_form(shape: QuiverShape, f: Sequence[int], g: Sequence[int]) -> int:
    """Symmetrised Euler form (f,g) = 2 sum f_i g_i - sum over edges (f_s g_t + f_t g_s)."""
    value = 2 * sum(a * b for a, b in zip(f, g))
    for i, j in shape.edges:
        value -= f[i] * g[j] + f[j] * g[i]
    return value


def positive_roots(shape: QuiverShape) -> list[DimVector]:
    """All positive roots, in canonical position order, sorted by height."""
    if not shape.is_dynkin:
        raise NotDynkinError(f"{shape.label} is not Dynkin")
    n = len(shape.order)
    simples = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    seen = set(simples)
    frontier = list(simples)
    while frontier:
        nxt = []
        for alpha in frontier:
            for i in range(n):
                c = symmetric_form(shape, alpha, simples[i])
                if c == 0:
                    continue
                beta = tuple(a - (c if k == i else 0) for k, a in enumerate(alpha))
                if all(b >= 0 for b in beta) and any(beta) and beta not in seen:
                    seen.add(beta)
                    nxt.append(beta)
        frontier = nxt
    return sorted(seen, key=lambda r: (sum(r), r))


def maximal_root(shape: QuiverShape) -> DimVector:
    return positive_roots(shape)[-1]


def minimal_imaginary_root(shape: QuiverShape) -> DimVector:
    if not shape.is_affine:
        raise NotDynkinError(f"{shape.label} is not affine")
    n = len(shape.order)
    rows = []
    for i in range(n):
        e_i = tuple(1 if k == i else 0 for k in range(n))
        rows.append([symmetric_form(shape, e_i, tuple(1 if k == j else 0 for k in range(n))) for j in range(n)])
    kernel = kernel_basis(Matrix.from_rows(QQ, rows))
    if len(kernel) != 1:
        raise NotDynkinError(f"{shape.label} has a {len(kernel)}-dimensional radical")
    v = [Fraction(x) for x in kernel[0]]
    denom = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in v), 1)
    ints = [int(x * denom) for x in v]
    common = reduce(gcd, (abs(x) for x in ints))
    if ints[next(i for i, x in enumerate(ints) if x)] < 0:
        common = -common
    return tuple(x // common for x in ints)


def quiver_roots(q: Quiver) -> list[DimVector]:
    """Positive roots of a Dynkin quiver in the quiver's own vertex order."""
    shape = classify(q)
    return [shape.to_quiver_order(q, r) for r in positive_roots(shape)]


# printing


def format_root(shape: QuiverShape, vec: Sequence[int]) -> str:
    """(bottom row;top row) in canonical order, e.g. (1,2,3,2,1;2)."""
    bottom = [str(vec[k]) for k, (row, _) in enumerate(shape.layout) if row == 0]
    top = [str(vec[k]) for k, (row, _) in enumerate(shape.layout) if row == 1]
    body = ",".join(bottom)
    return f"({body};{','.join(top)})" if top else f"({body})"


def stacked_label(shape: QuiverShape, vec: Sequence[int]) -> str:
    """Compact (top;bottom) label used for AR-quiver nodes, e.g. (1;12221)."""
    bottom = "".join(str(vec[k]) for k, (row, _) in enumerate(shape.layout) if row == 0)
    top = "".join(str(vec[k]) for k, (row, _) in enumerate(shape.layout) if row == 1)
    return f"({top};{bottom})" if top else f"({bottom})"


def two_row(shape: QuiverShape, vec: Sequence[int]) -> str:
    """Two-line table layout: top entries raised over the column they attach to."""
    width = 2 * max((c for _, c in shape.layout), default=0) + 1
    lines = []
    for row in (1, 0):
        chars = [" "] * width
        placed = False
        for k, (r, c) in enumerate(shape.layout):
            if r == row:
                chars[2 * c] = str(vec[k])
                placed = True
        if placed:
            lines.append("".join(chars).rstrip())
    return "\n".join(lines)


def parse_stacked(shape: QuiverShape, label: str) -> DimVector:
    """Inverse of stacked_label, for single-digit entries."""
    text = label.strip().strip("()")
    top, _, bottom = text.partition(";") if ";" in text else ("", "", text)
    digits = [int(ch) for ch in bottom] + [int(ch) for ch in top]
    if len(digits) != len(shape.order):
        raise DimensionMismatchError(f"label {label!r} does not fit {shape.label}")
    bottom_pos = [k for k, (row, _) in enumerate(shape.layout) if row == 0]
    top_pos = [k for k, (row, _) in enumerate(shape.layout) if row == 1]
    out = [0] * len(shape.order)
    for k, val in zip(bottom_pos + top_pos, digits):
        out[k] = val
    return tuple(out)


# Euler form and Coxeter transformation


def euler_form(q: Quiver, va: Iterable[Arrow], f: Sequence[int], g: Sequence[int]) -> int:
    """sum f_i g_i - sum over arrows f_s g_t + sum over virtual arrows f_s g_t."""
    f = check_dimvec(q, f)
    g = check_dimvec(q, g)
    value = sum(a * b for a, b in zip(f, g))
    for a in q.arrows:
        value -= f[q.index(a.source)] * g[q.index(a.target)]
    for c in va:
        value += f[q.index(c.source)] * g[q.index(c.target)]
    return value


def path_count_matrix(q: Quiver) -> list[list[int]]:
    """N[i][j] = number of paths from vertex i to vertex j."""
    return [[len(q.paths(s, t)) for t in q.vertices] for s in q.vertices]


def _projective_injective_dims(q: Quiver) -> tuple[Matrix, Matrix]:
    counts = path_count_matrix(q)
    n = len(q.vertices)
    # column i of P is dim P(i) (paths out of i); column i of I is dim I(i) (paths into i)
    pmat = Matrix.from_rows(QQ, [[counts[i][j] for i in range(n)] for j in range(n)])
    imat = Matrix.from_rows(QQ, [[counts[j][i] for i in range(n)] for j in range(n)])
    return pmat, imat


def _require_dynkin(q: Quiver) -> QuiverShape:
    shape = classify(q)
    if not shape.is_dynkin:
        raise NotDynkinError(f"{shape.label} is not Dynkin")
    return shape


def coxeter_transform(q: Quiver, f: Sequence[int]) -> DimVector:
    """dim tau M from dim M, via -I P^{-1}."""
    _require_dynkin(q)
    f = check_dimvec(q, f)
    pmat, imat = _projective_injective_dims(q)
    x = solve(pmat, f).solution
    out = tuple(-int(v) for v in imat.apply(x))
    if any(v < 0 for v in out) or not any(out):
        raise ProjectiveInputError(f"{f} is the dimension vector of a projective")
    return out


def coxeter_transform_inverse(q: Quiver, f: Sequence[int]) -> DimVector:
    """dim tau^{-1} M from dim M, via -P I^{-1}."""
    _require_dynkin(q)
    f = check_dimvec(q, f)
    pmat, imat = _projective_injective_dims(q)
    x = solve(imat, f).solution
    out = tuple(-int(v) for v in pmat.apply(x))
    if any(v < 0 for v in out) or not any(out):
        raise InjectiveInputError(f"{f} is the dimension vector of an injective")
    return out


def projective_dims(q: Quiver) -> dict[str, DimVector]:
    counts = path_count_matrix(q)
    return {v: tuple(counts[i]) for i, v in enumerate(q.vertices)}


def injective_dims(q: Quiver) -> dict[str, DimVector]:
    counts = path_count_matrix(q)
    n = len(q.vertices)
    return {v: tuple(counts[j][i] for j in range(n)) for i, v in enumerate(q.vertices)}

"""
Brute-force quiver Grassmannians over F_p.

Subspaces are produced in reduced echelon form, so every subspace appears
exactly once. Submodules are built vertex by vertex in a topological order of
the quiver: once the sources of an arrow are fixed, their images become a
lower bound at its target, which is where the pruning comes from.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from itertools import combinations, product
from typing import Iterator, Optional, Sequence

import networkx as nx
from sympy import Poly, Symbol, interpolate

from .config import get_settings
from .errors import (
    BudgetExceededError,
    DimensionMismatchError,
    InsufficientSamplesError,
    InvalidDepthError,
    QuiverMismatchError,
)
from .exactlinalg import (
    Field,
    Matrix,
    contains,
    image_of,
    intersect,
    pivots_of,
    preimage_of,
    span,
    whole_space,
)
from .extended import ExtendedQuiver, euler_R, phi, phi_morphism, phi_subrep
from .quiver import DimVector, dim_sub
from .rep import Morphism, Representation, ShortExactSequence, Subrep

logger = logging.getLogger(__name__)

q_symbol = Symbol("q")


class Budget:
    """Node-visit counter shared by one enumeration (or one work unit)."""

    def __init__(self, limit: Optional[int] = None):
        self.limit = limit if limit is not None else get_settings().max_nodes
        self.visited = 0

    def tick(self) -> None:
        self.visited += 1
        if self.visited > self.limit:
            logger.info("enumeration stopped after %d nodes", self.limit)
            raise BudgetExceededError(self.limit)


def _as_budget(budget) -> Budget:
    if isinstance(budget, Budget):
        return budget
    return Budget(budget)


# subspaces


def _echelon_rows(field: Field, m: int, k: int) -> Iterator[list[list[int]]]:
    elements = list(field.elements())
    for pivots in combinations(range(m), k):
        taken = set(pivots)
        free = [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, m) if j not in taken]
        for values in product(elements, repeat=len(free)):
            rows = [[0] * m for _ in range(k)]
            for i, c in enumerate(pivots):
                rows[i][c] = 1
            for (i, j), x in zip(free, values):
                rows[i][j] = x
            yield rows


def subspaces(field: Field, n: int, k: int, lower: Optional[Matrix] = None,
              upper: Optional[Matrix] = None) -> Iterator[Matrix]:
    """Every k-dimensional L <= W <= U in F_p^n, each once, as a canonical basis."""
    if not field.is_prime_field():
        raise ValueError("subspaces are only enumerated over prime fields")
    upper = upper if upper is not None else whole_space(field, n)
    lower = lower if lower is not None else Matrix.zeros(field, n, 0)
    l, u = lower.cols, upper.cols
    if not l <= k <= u or not contains(upper, lower):
        return
    # work in coordinates of U; the pivot rows of a canonical basis form an identity block
    upper_piv = pivots_of(upper)
    inside = span(field, u, lower.submatrix(upper_piv, range(l)).columns()) if l else Matrix.zeros(field, u, 0)
    taken = set(pivots_of(inside))
    free_coords = [j for j in range(u) if j not in taken]
    base = lower.columns()
    for rows in _echelon_rows(field, u - l, k - l):
        extra = []
        for row in rows:
            coords = [0] * u
            for j, x in zip(free_coords, row):
                coords[j] = x
            extra.append(upper.apply(coords))
        yield span(field, n, base + extra)


def count_subspaces(p: int, n: int, k: int) -> int:
    """Gaussian binomial [n choose k]_p."""
    if not 0 <= k <= n:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


# submodules


def _vertex_order(t: Representation) -> list[int]:
    q = t.quiver
    order = nx.lexicographical_topological_sort(q.digraph(), key=q.index)
    return [q.index(v) for v in order]


def _check_target(t: Representation, f: Sequence[int]) -> DimVector:
    if len(f) != len(t.dims):
        raise DimensionMismatchError(f"dimension vector of length {len(f)} for {len(t.dims)} vertices")
    f = tuple(int(x) for x in f)
    if any(x < 0 or x > n for x, n in zip(f, t.dims)):
        raise DimensionMismatchError(f"{f} is not between 0 and {t.dims}")
    return f


def enumerate_submodules(t: Representation, f: Sequence[int],
                         lower: Optional[Sequence[Optional[Matrix]]] = None,
                         upper: Optional[Sequence[Optional[Matrix]]] = None,
                         budget=None) -> Iterator[Subrep]:
    """Every subrepresentation of t with dimension vector f, each once.

    lower/upper bound the subspace at each vertex (None for no bound).
    """
    f = _check_target(t, f)
    q, field = t.quiver, t.field
    counter = _as_budget(budget)
    n = len(q.vertices)
    lower = list(lower) if lower is not None else [None] * n
    upper = list(upper) if upper is not None else [None] * n
    order = _vertex_order(t)
    incoming = {k: [(q.index(a.source), t.maps[pos]) for pos, a in enumerate(q.arrows)
                    if q.index(a.target) == k] for k in range(n)}
    chosen: list[Optional[Matrix]] = [None] * n

    def options(step: int) -> Iterator[Matrix]:
        k = order[step]
        generators = lower[k].columns() if lower[k] is not None else []
        for s, m in incoming[k]:
            if chosen[s].cols:
                generators.extend((m @ chosen[s]).columns())
        floor = span(field, t.dims[k], generators)
        if floor.cols > f[k]:
            return iter(())
        return subspaces(field, t.dims[k], f[k], floor, upper[k])

    stack = [options(0)] if n else []
    while stack:
        step = len(stack) - 1
        choice = next(stack[-1], None)
        if choice is None:
            stack.pop()
            continue
        counter.tick()
        chosen[order[step]] = choice
        if step + 1 == n:
            yield Subrep(t, tuple(chosen))
        else:
            stack.append(options(step + 1))
    if n == 0:
        yield Subrep(t, ())


def _count_unit(args) -> tuple[int, int]:
    """(count, nodes visited) for one work unit; visits past the limit come back as limit + 1."""
    t, f, lower, upper, limit = args
    unit = Budget(limit)
    try:
        return sum(1 for _ in enumerate_submodules(t, f, lower, upper, unit)), unit.visited
    except BudgetExceededError:
        return 0, limit + 1


def count_submodules(t: Representation, f: Sequence[int], budget=None, workers: Optional[int] = None) -> int:
    """|Gr_f(t)(F_p)|, optionally split over a process pool by the first vertex's choices.

    The work units draw on one budget: their visits add up exactly as in a serial run.
    """
    f = _check_target(t, f)
    workers = workers if workers is not None else get_settings().workers
    if workers <= 1 or not t.dims:
        return sum(1 for _ in enumerate_submodules(t, f, budget=budget))
    counter = _as_budget(budget)
    first = _vertex_order(t)[0]
    n = len(t.dims)
    remaining = max(counter.limit - counter.visited, 0)
    units = []
    for choice in subspaces(t.field, t.dims[first], f[first]):
        bounds = [None] * n
        bounds[first] = choice
        units.append((t, f, bounds, bounds, remaining))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_count_unit, units))
    counter.visited += sum(visited for _, visited in results)
    if counter.visited > counter.limit:
        logger.info("parallel enumeration stopped after %d nodes", counter.limit)
        raise BudgetExceededError(counter.limit)
    logger.debug("counted %s over %d work units", f, len(units))
    return sum(count for count, _ in results)


def all_dimvecs(dims: Sequence[int]) -> list[DimVector]:
    """Every f with 0 <= f <= dims, in lexicographic order."""
    out: list[DimVector] = [()]
    for n in dims:
        out = [v + (k,) for v in out for k in range(n + 1)]
    return out


# flags


def enumerate_flags(m: Representation, d: int, strict: bool, f: Sequence[int], budget=None) -> Iterator[list[Subrep]]:
    """Chains M_1 <= ... <= M_d of subrepresentations with level dimensions from f.

    f lists the d level dimension vectors one after the other. When strict,
    every arrow also maps M_{k+1} into M_k.
    """
    if d < 1 or (strict and d < 2):
        raise InvalidDepthError(f"depth {d} is not allowed{' for strict flags' if strict else ''}")
    n = len(m.dims)
    if len(f) != n * d:
        raise DimensionMismatchError(f"dimension vector of length {len(f)} for depth {d}")
    counter = _as_budget(budget)
    levels = [tuple(f[r * n:(r + 1) * n]) for r in range(d)]
    for level in levels:
        _check_target(m, level)
    q = m.quiver

    def images(member: Subrep) -> list[Matrix]:
        out = []
        for k, v in enumerate(q.vertices):
            cols = []
            for a in q.arrows_to(v):
                s = q.index(a.source)
                if member.spaces[s].cols:
                    cols.extend((m.map(a.id) @ member.spaces[s]).columns())
            out.append(span(m.field, m.dims[k], cols))
        return out

    def below(r: int, above: list[Subrep]) -> Iterator[list[Subrep]]:
        if r < 0:
            yield above
            return
        if above:
            top = above[0]
            lower = images(top) if strict else None
            options = enumerate_submodules(m, levels[r], lower, top.spaces, counter)
        else:
            options = enumerate_submodules(m, levels[r], budget=counter)
        for member in options:
            yield from below(r - 1, [member] + above)

    yield from below(d - 1, [])


def count_flags_directly(m: Representation, d: int, strict: bool, f: Sequence[int], budget=None) -> int:
    return sum(1 for _ in enumerate_flags(m, d, strict, f, budget))


# strata of a short exact sequence


@dataclass(frozen=True)
class PhiSequence:
    """Phi applied to 0 -> X -> Y -> S -> 0."""

    iota: Morphism
    pi: Morphism
    extended: ExtendedQuiver

    @classmethod
    def of(cls, ses: ShortExactSequence, eq: ExtendedQuiver) -> "PhiSequence":
        return cls(phi_morphism(ses.iota, eq), phi_morphism(ses.pi, eq), eq)

    @property
    def middle(self) -> Representation:
        return self.iota.target

    def split_point(self, u: Subrep) -> tuple[Subrep, Subrep]:
        """(V, W) = (U cap Phi(X) pulled back to Phi(X), image of U in Phi(S))."""
        v = tuple(preimage_of(i, s) for i, s in zip(self.iota.maps, u.spaces))
        w = tuple(image_of(p, s) for p, s in zip(self.pi.maps, u.spaces))
        return Subrep(self.iota.source, v), Subrep(self.pi.target, w)


def _stratum_of(seq: PhiSequence, u: Subrep) -> tuple[DimVector, DimVector]:
    image = seq.iota.image_subrep()
    f = tuple(intersect(a, b).cols for a, b in zip(u.spaces, image.spaces))
    return f, dim_sub(u.dimvec, f)


def stratum_table(ses: ShortExactSequence, eq: ExtendedQuiver, h: Sequence[int], budget=None) -> dict[tuple[DimVector, DimVector], int]:
    """Counts of Gr_h(Phi(Y)) split by (dim U cap Phi(X), dim pi(U))."""
    seq = PhiSequence.of(ses, eq)
    table: dict[tuple[DimVector, DimVector], int] = {}
    for u in enumerate_submodules(seq.middle, h, budget=budget):
        key = _stratum_of(seq, u)
        table[key] = table.get(key, 0) + 1
    return table


def count_strata(ses: ShortExactSequence, eq: ExtendedQuiver, f: Sequence[int], g: Sequence[int],
                 h: Optional[Sequence[int]] = None, budget=None) -> int:
    f, g = tuple(f), tuple(g)
    total = tuple(a + b for a, b in zip(f, g))
    if h is not None and tuple(h) != total:
        raise DimensionMismatchError(f"f + g = {total} differs from the requested {tuple(h)}")
    return stratum_table(ses, eq, total, budget).get((f, g), 0)


def psi_fibers(ses: ShortExactSequence, eq: ExtendedQuiver, h: Sequence[int], budget=None) -> dict[tuple[Subrep, Subrep], int]:
    """Number of U in Gr_h(Phi(Y)) over each (V, W) in the image of Psi."""
    seq = PhiSequence.of(ses, eq)
    fibers: dict[tuple[Subrep, Subrep], int] = {}
    for u in enumerate_submodules(seq.middle, h, budget=budget):
        key = seq.split_point(u)
        fibers[key] = fibers.get(key, 0) + 1
    return fibers


@dataclass
class ImageCheck:
    pairs: int = 0
    image_pairs: int = 0
    mismatches: list = dc_field(default_factory=list)
    fiber_mismatches: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.fiber_mismatches


def image_formula_holds(ses: ShortExactSequence, eq: ExtendedQuiver, h: Sequence[int], budget=None) -> ImageCheck:
    """Compare the brute-force image of Psi (and its fibers) with the predicted ones.

    Split sequences with [S,X]^1 = 0 have every pair in the image; nonsplit
    ones with [S,X]^1 = 1 lose exactly the pairs with V <= Phi(X_S) and
    W >= Phi(S^X). Every fiber has q^<g, dim Phi(X) - f>_R points.
    """
    from .artheory import compute_S_X, compute_X_S

    x, s = ses.sub, ses.quot
    p = x.field.characteristic
    fibers = psi_fibers(ses, eq, h, budget)
    split = ses.splits()
    if split:
        xs = sx = None
    else:
        xs = phi_subrep(compute_X_S(x, s), eq)
        sx = phi_subrep(compute_S_X(x, s), eq)
    phi_x, phi_s = phi(x, eq), phi(s, eq)
    report = ImageCheck()
    counter = _as_budget(budget)
    for f in all_dimvecs(phi_x.dims):
        g = dim_sub(h, f)
        if any(c < 0 or c > n for c, n in zip(g, phi_s.dims)):
            continue
        rank = euler_R(eq, g, dim_sub(phi_x.dims, f))
        for v in enumerate_submodules(phi_x, f, budget=counter):
            for w in enumerate_submodules(phi_s, g, budget=counter):
                report.pairs += 1
                predicted = split or not (xs.contains(v) and w.contains(sx))
                actual = fibers.get((v, w), 0)
                if predicted != bool(actual):
                    report.mismatches.append((f, g))
                if actual:
                    report.image_pairs += 1
                    if actual != p ** rank:
                        report.fiber_mismatches.append((f, g, actual, p ** rank))
    return report


# counting polynomials


def degree_bound(t: Representation, f: Sequence[int]) -> int:
    """sum f_v (dim T_v - f_v), the dimension of the ambient product of Grassmannians."""
    return sum(a * (n - a) for a, n in zip(f, t.dims))


@dataclass(frozen=True)
class PolynomialFit:
    coefficients: tuple[int, ...]
    integral: bool
    nonnegative: bool

    def evaluate(self, q: int) -> int:
        return sum(c * q ** k for k, c in enumerate(self.coefficients))


def interpolate_polynomial(points: Sequence[tuple[int, int]], degree: int) -> PolynomialFit:
    """The polynomial of degree <= degree through (p, count) points, coefficients lowest first."""
    points = sorted(set((int(p), int(c)) for p, c in points))
    if len(points) < degree + 1:
        raise InsufficientSamplesError(f"{len(points)} samples cannot fix a polynomial of degree {degree}")
    if all(c == 0 for _, c in points):
        return PolynomialFit((0,), True, True)
    poly = Poly(interpolate(points[:degree + 1], q_symbol), q_symbol)
    coeffs = list(reversed(poly.all_coeffs()))
    integral = all(c.is_integer for c in coeffs)
    values = tuple(int(c) if c.is_integer else c for c in coeffs)
    for p, c in points[degree + 1:]:
        if poly.eval(p) != c:
            raise InsufficientSamplesError(f"extra sample at {p} disagrees with the interpolant")
    return PolynomialFit(values, integral, integral and all(c >= 0 for c in values))


@dataclass(frozen=True)
class CountingRecord:
    quiver: str
    module: str
    d: int
    strict: bool
    f: DimVector
    p: int
    count: int
    polynomial: Optional[tuple[int, ...]] = None

    def to_dict(self) -> dict:
        return {
            "quiver": self.quiver,
            "rep": self.module,
            "d": self.d,
            "strict": self.strict,
            "f": list(self.f),
            "p": self.p,
            "count": self.count,
            "polynomial": list(self.polynomial) if self.polynomial is not None else None,
        }


def counting_records(m: Representation, eq: ExtendedQuiver, fs: Sequence[Sequence[int]], primes: Sequence[int],
                     module: str = "", budget=None) -> list[CountingRecord]:
    """One record per (f, p) for Gr_f(Phi(M)) over F_p, reducing M modulo each prime."""
    from .rep import reduce_mod

    if m.quiver != eq.base:
        raise QuiverMismatchError("module is not over the base quiver")
    records = []
    for p in primes:
        reduced = phi(reduce_mod(m, p), eq)
        for f in fs:
            count = count_submodules(reduced, f, budget=budget)
            records.append(CountingRecord(eq.base.name, module, eq.depth, eq.strict, tuple(f), p, count))
            logger.debug("|Gr_%s| over F_%d = %d", tuple(f), p, count)
    return records

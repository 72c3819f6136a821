"""
Exact linear algebra over the rationals and over prime fields F_p.

Matrices are immutable; every operation is exact Gaussian elimination with the
first nonzero entry as pivot. Subspaces of K^n are stored as n x k matrices
whose columns are the rows of a reduced row echelon form, so two equal
subspaces always have equal matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import DimensionMismatchError, PrimeUnsafeError


FieldElem = Union[int, Fraction]


class Field:
    """A field of exact scalars. Subclasses are QQ and GF(p)."""

    characteristic: int = 0

    def coerce(self, value) -> FieldElem:
        raise NotImplementedError

    @property
    def zero(self) -> FieldElem:
        return self.coerce(0)

    @property
    def one(self) -> FieldElem:
        return self.coerce(1)

    def inv(self, value: FieldElem) -> FieldElem:
        raise NotImplementedError

    def is_prime_field(self) -> bool:
        return self.characteristic > 0


@dataclass(frozen=True)
class RationalField(Field):
    characteristic: int = 0

    def coerce(self, value) -> Fraction:
        if isinstance(value, str):
            return Fraction(value.strip())
        return Fraction(value)

    def inv(self, value: FieldElem) -> Fraction:
        if value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return 1 / Fraction(value)

    def __repr__(self) -> str:
        return "QQ"


@dataclass(frozen=True)
class PrimeField(Field):
    characteristic: int = 2

    def __post_init__(self):
        p = self.characteristic
        if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not a prime")

    def coerce(self, value) -> int:
        p = self.characteristic
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise PrimeUnsafeError(f"denominator {value.denominator} vanishes modulo {p}")
            return value.numerator * pow(value.denominator, -1, p) % p
        return int(value) % p

    def inv(self, value: FieldElem) -> int:
        if value % self.characteristic == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(int(value), -1, self.characteristic)

    def elements(self) -> range:
        return range(self.characteristic)

    def __repr__(self) -> str:
        return f"GF({self.characteristic})"


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


@dataclass(frozen=True)
class Matrix:
    """A rows x cols matrix over one field, stored row-major."""

    field: Field
    rows: int
    cols: int
    entries: tuple = dataclass_field(repr=False)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatchError("negative matrix shape")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                f"{len(self.entries)} entries do not fill a {self.rows}x{self.cols} matrix"
            )

    # construction

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols, (field.zero,) * (rows * cols))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        zero, one = field.zero, field.one
        return cls(field, n, n, tuple(one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionMismatchError("column count needed for an empty row list")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatchError(f"ragged row of length {len(r)}, expected {cols}")
        return cls(field, len(rows), cols, tuple(field.coerce(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int) -> "Matrix":
        columns = [tuple(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise DimensionMismatchError(f"column of length {len(c)}, expected {rows}")
        return cls(
            field,
            rows,
            len(columns),
            tuple(field.coerce(columns[j][i]) for i in range(rows) for j in range(len(columns))),
        )

    # access

    def __getitem__(self, index: tuple[int, int]) -> FieldElem:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    # arithmetic

    def _same_field(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise DimensionMismatchError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        reduce = self.field.coerce
        n, m, k = self.rows, other.cols, self.cols
        a, b = self.entries, other.entries
        out = []
        for i in range(n):
            row = a[i * k:(i + 1) * k]
            for j in range(m):
                out.append(reduce(sum(row[t] * b[t * m + j] for t in range(k) if row[t])))
        return Matrix(self.field, n, m, tuple(out))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        if self.shape != other.shape:
            raise DimensionMismatchError(f"cannot add {self.shape} and {other.shape}")
        reduce = self.field.coerce
        return Matrix(self.field, self.rows, self.cols,
                      tuple(reduce(x + y) for x, y in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        reduce = self.field.coerce
        return Matrix(self.field, self.rows, self.cols, tuple(reduce(-x) for x in self.entries))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        reduce = self.field.coerce
        c = reduce(c)
        return Matrix(self.field, self.rows, self.cols, tuple(reduce(c * x) for x in self.entries))

    def apply(self, vector: Sequence) -> tuple:
        if len(vector) != self.cols:
            raise DimensionMismatchError(f"vector of length {len(vector)} for {self.shape} matrix")
        reduce = self.field.coerce
        return tuple(
            reduce(sum(self.entries[i * self.cols + t] * vector[t] for t in range(self.cols)))
            for i in range(self.rows)
        )

    # structure

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows,
                      tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Matrix":
        return Matrix(self.field, len(row_idx), len(col_idx),
                      tuple(self.entries[i * self.cols + j] for i in row_idx for j in col_idx))

    def hstack(self, *others: "Matrix") -> "Matrix":
        blocks = (self,) + others
        for b in others:
            self._same_field(b)
            if b.rows != self.rows:
                raise DimensionMismatchError("hstack needs equal row counts")
        entries = []
        for i in range(self.rows):
            for b in blocks:
                entries.extend(b.row(i))
        return Matrix(self.field, self.rows, sum(b.cols for b in blocks), tuple(entries))

    def vstack(self, *others: "Matrix") -> "Matrix":
        blocks = (self,) + others
        for b in others:
            self._same_field(b)
            if b.cols != self.cols:
                raise DimensionMismatchError("vstack needs equal column counts")
        return Matrix(self.field, sum(b.rows for b in blocks), self.cols,
                      tuple(x for b in blocks for x in b.entries))

    @staticmethod
    def block_diag(field: Field, blocks: Sequence["Matrix"]) -> "Matrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = [field.zero] * (rows * cols)
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[(r0 + i) * cols + c0 + j] = b.entries[i * b.cols + j]
            r0 += b.rows
            c0 += b.cols
        return Matrix(field, rows, cols, tuple(out))

    def change_field(self, field: Field) -> "Matrix":
        return Matrix(field, self.rows, self.cols, tuple(field.coerce(x) for x in self.entries))

    def __repr__(self) -> str:
        return f"Matrix({self.field!r}, {self.to_rows()})"


@dataclass(frozen=True)
class SolveResult:
    solution: Optional[tuple]
    kernel: list

    @property
    def consistent(self) -> bool:
        return self.solution is not None


def _rref_rows(rows: list[list], ncols: int, field: Field) -> tuple[list[list], list[int]]:
    """In-place reduced row echelon form of a list of rows; returns (nonzero rows, pivots)."""
    reduce = field.coerce
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = field.inv(rows[r][c])
        if inv != 1:
            rows[r] = [reduce(x * inv) for x in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [reduce(x - factor * y) for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    rows, pivots = _rref_rows(m.to_rows(), m.cols, m.field)
    full = rows + [[m.field.zero] * m.cols for _ in range(m.rows - len(rows))]
    return Matrix(m.field, m.rows, m.cols, tuple(x for r in full for x in r)), tuple(pivots)


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(_rref_rows(m.to_rows(), m.cols, m.field)[1])


def kernel_basis(m: Matrix) -> list[tuple]:
    """Basis of {x : m x = 0}, one vector per free column in increasing order."""
    field = m.field
    rows, pivots = _rref_rows(m.to_rows(), m.cols, field)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [field.zero] * m.cols
        v[free] = field.one
        for k, pc in enumerate(pivots):
            v[pc] = field.coerce(-rows[k][free])
        basis.append(tuple(v))
    return basis


def solve(a: Matrix, b: Sequence) -> SolveResult:
    """Solve a x = b. The particular solution sets every free variable to zero."""
    if len(b) != a.rows:
        raise DimensionMismatchError(f"right-hand side of length {len(b)} for {a.shape} matrix")
    field = a.field
    aug = [list(a.row(i)) + [field.coerce(b[i])] for i in range(a.rows)]
    rows, pivots = _rref_rows(aug, a.cols + 1, field)
    kernel = kernel_basis(a)
    if pivots and pivots[-1] == a.cols:
        return SolveResult(None, kernel)
    x = [field.zero] * a.cols
    for k, pc in enumerate(pivots):
        x[pc] = rows[k][a.cols]
    return SolveResult(tuple(x), kernel)


def cokernel(m: Matrix) -> Matrix:
    """A matrix Q with rows spanning the left kernel of m, so ker Q = column space of m."""
    left = kernel_basis(m.transpose())
    if not left:
        return Matrix.zeros(m.field, 0, m.rows)
    return Matrix.from_rows(m.field, left, m.rows)


# subspaces of K^n, stored as canonical column bases


def span(field: Field, n: int, vectors: Iterable[Sequence]) -> Matrix:
    vectors = [list(v) for v in vectors]
    for v in vectors:
        if len(v) != n:
            raise DimensionMismatchError(f"vector of length {len(v)} in K^{n}")
    if not vectors:
        return Matrix.zeros(field, n, 0)
    rows, _ = _rref_rows([[field.coerce(x) for x in v] for v in vectors], n, field)
    return Matrix.from_columns(field, rows, n)


def column_space(m: Matrix) -> Matrix:
    return span(m.field, m.rows, m.columns())


def whole_space(field: Field, n: int) -> Matrix:
    return Matrix.identity(field, n)


def pivots_of(subspace: Matrix) -> tuple[int, ...]:
    """Pivot coordinates of a canonical subspace basis (one per column)."""
    out = []
    for j in range(subspace.cols):
        col = subspace.column(j)
        out.append(next(i for i, x in enumerate(col) if x != 0))
    return tuple(out)


def subspace_sum(a: Matrix, b: Matrix) -> Matrix:
    return span(a.field, a.rows, a.columns() + b.columns())


def intersect(a: Matrix, b: Matrix) -> Matrix:
    if a.rows != b.rows:
        raise DimensionMismatchError("subspaces of different ambient spaces")
    if a.cols == 0 or b.cols == 0:
        return Matrix.zeros(a.field, a.rows, 0)
    kernel = kernel_basis(a.hstack(-b))
    left = [a.apply(v[:a.cols]) for v in kernel]
    return span(a.field, a.rows, left)


def contains(a: Matrix, b: Matrix) -> bool:
    """True when the column space of b lies inside the column space of a."""
    if b.cols == 0:
        return True
    if a.cols == 0:
        return b.is_zero()
    return rank(a.hstack(b)) == rank(a)


def image_of(m: Matrix, subspace: Matrix) -> Matrix:
    if subspace.cols == 0:
        return Matrix.zeros(m.field, m.rows, 0)
    return column_space(m @ subspace)


def preimage_of(m: Matrix, subspace: Matrix) -> Matrix:
    """{v : m v lies in subspace}."""
    annihilator = cokernel(subspace)
    if annihilator.rows == 0:
        return whole_space(m.field, m.cols)
    return span(m.field, m.cols, kernel_basis(annihilator @ m))


def complement_basis(subspace: Matrix) -> Matrix:
    """Standard basis vectors at the non-pivot coordinates; together with subspace they span K^n."""
    field, n = subspace.field, subspace.rows
    taken = set(pivots_of(subspace))
    cols = [tuple(field.one if i == j else field.zero for i in range(n)) for j in range(n) if j not in taken]
    if not cols:
        return Matrix.zeros(field, n, 0)
    return Matrix.from_columns(field, cols, n)


def coordinates(basis: Matrix, vector: Sequence) -> tuple:
    """Coordinates of vector in the given column basis; the vector must lie in its span."""
    result = solve(basis, vector)
    if result.solution is None:
        raise DimensionMismatchError("vector does not lie in the subspace")
    return result.solution


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise DimensionMismatchError(f"cannot invert a {m.shape} matrix")
    n = m.rows
    ident = Matrix.identity(m.field, n)
    rows, pivots = _rref_rows([list(m.row(i)) + list(ident.row(i)) for i in range(n)], 2 * n, m.field)
    if len(pivots) < n or pivots[n - 1] >= n:
        raise DimensionMismatchError("matrix is singular")
    return Matrix(m.field, n, n, tuple(x for r in rows for x in r[n:]))

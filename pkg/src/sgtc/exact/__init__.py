"""Exact linear algebra over arbitrary-precision rationals.

Scalars are ``fractions.Fraction`` (always in lowest terms with positive
denominator).  Matrices are immutable dense grids of scalars; all rank,
kernel, image and quotient computations reduce to integer row elimination
in the selected backend (see ``_backend``).  Every operation is a pure
function of its inputs, so values can be shared freely across threads.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from sgtc.exact._backend import backend_name, echelon_pivots, row_reduce

Scalar = Fraction

__all__ = [
    "Scalar",
    "Matrix",
    "Subspace",
    "DimensionError",
    "scalar",
    "rank",
    "rref",
    "kernel_basis",
    "solve",
    "solve_columns",
    "inverse",
    "subspace_ops",
    "backend_name",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class DimensionError(ValueError):
    """Shapes or ambient dimensions do not match."""


def scalar(x) -> Fraction:
    """Coerce ints, strings like '3/4' and Fractions to a Scalar."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot make an exact scalar from {type(x).__name__}")


class Matrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, entries, rows=None, cols=None):
        data = tuple(tuple(scalar(x) for x in row) for row in entries)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise DimensionError("ragged or mis-sized matrix data")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[_ZERO] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n):
        return cls([[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_cols(cls, cols_list, nrows=None):
        cols_list = [list(c) for c in cols_list]
        if nrows is None:
            if not cols_list:
                raise DimensionError("need nrows for an empty column list")
            nrows = len(cols_list[0])
        if any(len(c) != nrows for c in cols_list):
            raise DimensionError("columns of unequal length")
        return cls(
            [[cols_list[j][i] for j in range(len(cols_list))] for i in range(nrows)],
            nrows,
            len(cols_list),
        )

    @classmethod
    def diag(cls, values):
        values = [scalar(v) for v in values]
        n = len(values)
        return cls(
            [[values[i] if i == j else _ZERO for j in range(n)] for i in range(n)]
        )

    # -- access ------------------------------------------------------------

    def __getitem__(self, key):
        i, j = key
        return self.data[i][j]

    def row(self, i):
        return self.data[i]

    def col(self, j):
        return tuple(self.data[i][j] for i in range(self.rows))

    # -- algebra -----------------------------------------------------------

    def __add__(self, other):
        self._same_shape(other)
        return Matrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
            self.rows,
            self.cols,
        )

    def __sub__(self, other):
        self._same_shape(other)
        return Matrix(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
            self.rows,
            self.cols,
        )

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.data], self.rows, self.cols)

    def scale(self, s):
        s = scalar(s)
        return Matrix([[s * a for a in r] for r in self.data], self.rows, self.cols)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise DimensionError(f"{self.shape} @ {other.shape}")
        ot = other.transpose()
        return Matrix(
            [
                [
                    sum((a * b for a, b in zip(ra, cb) if a and b), _ZERO)
                    for cb in ot.data
                ]
                for ra in self.data
            ],
            self.rows,
            other.cols,
        )

    def matvec(self, v):
        v = [scalar(x) for x in v]
        if len(v) != self.cols:
            raise DimensionError("vector length does not match column count")
        return [
            sum((a * b for a, b in zip(row, v) if a and b), _ZERO)
            for row in self.data
        ]

    def transpose(self):
        return Matrix(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.cols,
            self.rows,
        )

    @property
    def T(self):
        return self.transpose()

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_zero(self):
        return all(not x for row in self.data for x in row)

    def hstack(self, other):
        if self.rows != other.rows:
            raise DimensionError("row counts differ")
        return Matrix(
            [list(ra) + list(rb) for ra, rb in zip(self.data, other.data)],
            self.rows,
            self.cols + other.cols,
        )

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.shape == other.shape
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.data)
        return f"Matrix({self.rows}x{self.cols}: {body})"

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"{self.shape} vs {other.shape}")

    # -- integer scaling for the elimination backend ------------------------

    def int_rows(self):
        """Rows scaled to primitive integer vectors (positive row scale)."""
        out = []
        for row in self.data:
            den = 1
            for x in row:
                if x:
                    den = den * x.denominator // gcd(den, x.denominator)
            out.append([int(x * den) for x in row])
        return out


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product."""
    rows = []
    for i in range(a.rows):
        for k in range(b.rows):
            rows.append(
                [a.data[i][j] * b.data[k][l] for j in range(a.cols) for l in range(b.cols)]
            )
    return Matrix(rows, a.rows * b.rows, a.cols * b.cols)


def block_diag(blocks) -> Matrix:
    blocks = list(blocks)
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    out = [[_ZERO] * m for _ in range(n)]
    r = c = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                out[r + i][c + j] = b.data[i][j]
        r += b.rows
        c += b.cols
    return Matrix(out, n, m)


def rank(m: Matrix) -> int:
    return len(echelon_pivots(m.int_rows(), m.cols))


def column_pivots(m: Matrix):
    """Indices of the leftmost maximal independent column set."""
    return echelon_pivots(m.int_rows(), m.cols)


def rref(m: Matrix):
    """Reduced row echelon form.

    Returns ``(pivots, R)`` with ``R`` rational, each pivot entry 1.
    """
    pivots, rows = row_reduce(m.int_rows(), m.cols)
    out = []
    for i, c in enumerate(pivots):
        p = rows[i][c]
        out.append([Fraction(x, p) for x in rows[i]])
    return pivots, Matrix(out, len(pivots), m.cols)


def kernel_basis(m: Matrix) -> "Subspace":
    """Basis of the right kernel, one column per free variable."""
    pivots, rows = row_reduce(m.int_rows(), m.cols)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    cols = []
    for f in free:
        v = [_ZERO] * m.cols
        v[f] = _ONE
        for i, c in enumerate(pivots):
            num = rows[i][f]
            if num:
                v[c] = Fraction(-num, rows[i][c])
        cols.append(v)
    return Subspace(m.cols, Matrix.from_cols(cols, m.cols), _checked=True)


def solve_columns(a: Matrix, b: Matrix):
    """Solve ``a @ X = b`` column by column.

    Returns a Matrix ``X`` (free variables set to zero), or None if some
    column of ``b`` is not in the column span of ``a``.
    """
    aug = a.hstack(b)
    pivots, rows = row_reduce(aug.int_rows(), aug.cols)
    if any(c >= a.cols for c in pivots):
        return None
    xcols = []
    for t in range(b.cols):
        x = [_ZERO] * a.cols
        for i, c in enumerate(pivots):
            x[c] = Fraction(rows[i][a.cols + t], rows[i][c])
        xcols.append(x)
    return Matrix.from_cols(xcols, a.cols)


def solve(a: Matrix, v):
    """Particular solution of ``a @ x = v`` or None."""
    x = solve_columns(a, Matrix.from_cols([list(v)], a.rows))
    return None if x is None else list(x.col(0))


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise DimensionError("inverse of a non-square matrix")
    x = solve_columns(m, Matrix.identity(m.rows))
    if x is None:
        raise ValueError("matrix is singular")
    return x


class Subspace:
    """Subspace of Q^n given by an independent column basis."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim, basis: Matrix, _checked=False):
        if basis.rows != ambient_dim:
            raise DimensionError("basis rows do not match ambient dimension")
        if not _checked and basis.cols and rank(basis) != basis.cols:
            raise ValueError("basis columns are dependent")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def zero(cls, ambient_dim):
        return cls(ambient_dim, Matrix.zeros(ambient_dim, 0), _checked=True)

    @classmethod
    def from_spanning(cls, ambient_dim, vectors):
        """Span of the vectors, pruned to the leftmost independent subset."""
        vectors = [list(v) for v in vectors]
        if not vectors:
            return cls.zero(ambient_dim)
        m = Matrix.from_cols(vectors, ambient_dim)
        keep = column_pivots(m)
        return cls(
            ambient_dim,
            Matrix.from_cols([m.col(j) for j in keep], ambient_dim),
            _checked=True,
        )

    @property
    def dim(self):
        return self.basis.cols

    def quotient_dim(self):
        return self.ambient_dim - self.dim

    def contains(self, v) -> bool:
        return self.coords(v) is not None

    def coords(self, v):
        """Coordinates of v in the basis, or None when outside."""
        v = [scalar(x) for x in v]
        if len(v) != self.ambient_dim:
            raise DimensionError("vector has wrong ambient dimension")
        if self.dim == 0:
            return [] if all(not x for x in v) else None
        return solve(self.basis, v)

    def contains_subspace(self, other) -> bool:
        self._same_ambient(other)
        return all(
            self.contains(other.basis.col(j)) for j in range(other.dim)
        )

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.dim == other.dim
            and self.contains_subspace(other)
        )

    def __hash__(self):
        raise TypeError("Subspace is not hashable")

    def sum(self, other) -> "Subspace":
        self._same_ambient(other)
        vectors = [self.basis.col(j) for j in range(self.dim)]
        vectors += [other.basis.col(j) for j in range(other.dim)]
        return Subspace.from_spanning(self.ambient_dim, vectors)

    def intersect(self, other) -> "Subspace":
        self._same_ambient(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim)
        stacked = self.basis.hstack(other.basis)
        ker = kernel_basis(stacked)
        vectors = []
        for j in range(ker.dim):
            coeffs = ker.basis.col(j)[: self.dim]
            vectors.append(self.basis.matvec(coeffs))
        return Subspace.from_spanning(self.ambient_dim, vectors)

    def __repr__(self):
        return f"Subspace(dim {self.dim} of Q^{self.ambient_dim})"

    def _same_ambient(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError(
                f"ambient {self.ambient_dim} vs {other.ambient_dim}"
            )


def subspace_ops(a: Subspace, b: Subspace):
    """Sum, intersection and quotient data for a pair of subspaces."""
    return {
        "sum": a.sum(b),
        "intersection": a.intersect(b),
        "quotient_dim": a.quotient_dim(),
        "contains": a.contains,
    }

"""
Exact integer and rational linear algebra.

Everything here works on `fractions.Fraction` entries so that lattice
identities can be checked with equality rather than tolerances.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

from .errors import (
    NotAntisymmetricError,
    NotCompletableError,
    ShapeError,
    SingularMatrixError,
)

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


def as_fraction(value: Scalar | str) -> Fraction:
    """Convert an exact scalar (or a "p/q" literal) to a Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("Booleans are not matrix entries")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"Cannot use {value!r} as an exact rational")


def rational_sqrt(value: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational"""
    value = as_fraction(value)
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    root_num, root_den = math.isqrt(num), math.isqrt(den)
    if root_num * root_num == num and root_den * root_den == den:
        return Fraction(root_num, root_den)
    return None


@dataclass(frozen=True)
class RationalMatrix:
    nrows: int
    ncols: int
    # Row-major
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.nrows * self.ncols:
            raise ShapeError(
                f"Expected {self.nrows}×{self.ncols} entries, got {len(self.entries)}"
            )

    @classmethod
    def of(
        cls, rows: Iterable[Iterable[Scalar | str]], ncols: int | None = None
    ) -> RationalMatrix:
        rows = [[as_fraction(x) for x in row] for row in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(row) != ncols for row in rows):
            raise ShapeError("Matrix rows have differing lengths")
        return cls(len(rows), ncols, tuple(x for row in rows for x in row))

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> RationalMatrix:
        ncols = nrows if ncols is None else ncols
        return cls(nrows, ncols, (Fraction(0),) * (nrows * ncols))

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls.diag([1] * n)

    @classmethod
    def diag(cls, values: Sequence[Scalar]) -> RationalMatrix:
        n = len(values)
        entries = [Fraction(0)] * (n * n)
        for i, value in enumerate(values):
            entries[i * n + i] = as_fraction(value)
        return cls(n, n, tuple(entries))

    @classmethod
    def block(cls, grid: Sequence[Sequence[RationalMatrix]]) -> RationalMatrix:
        """Assemble a matrix from a grid of blocks"""
        return cls.vstack(*[cls.hstack(*row) for row in grid])

    @classmethod
    def hstack(cls, *blocks: RationalMatrix) -> RationalMatrix:
        nrows = blocks[0].nrows
        if any(b.nrows != nrows for b in blocks):
            raise ShapeError("hstack: blocks have differing row counts")
        rows = [[x for b in blocks for x in b.row(i)] for i in range(nrows)]
        return cls.of(rows, ncols=sum(b.ncols for b in blocks))

    @classmethod
    def vstack(cls, *blocks: RationalMatrix) -> RationalMatrix:
        ncols = blocks[0].ncols
        if any(b.ncols != ncols for b in blocks):
            raise ShapeError("vstack: blocks have differing column counts")
        return cls(
            sum(b.nrows for b in blocks),
            ncols,
            tuple(x for b in blocks for x in b.entries),
        )

    @classmethod
    def kron(cls, a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
        rows = [
            [a[i, j] * b[k, m] for j in range(a.ncols) for m in range(b.ncols)]
            for i in range(a.nrows)
            for k in range(b.nrows)
        ]
        return cls.of(rows, ncols=a.ncols * b.ncols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"Index {index} out of range for shape {self.shape}")
        return self.entries[i * self.ncols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.ncols : (i + 1) * self.ncols]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return self.entries[j :: self.ncols] if self.ncols else ()

    def rows(self) -> Iterator[tuple[Fraction, ...]]:
        for i in range(self.nrows):
            yield self.row(i)

    def tolist(self) -> list[list[Fraction]]:
        return [list(row) for row in self.rows()]

    def to_ints(self) -> list[list[int]]:
        if not self.is_integer():
            raise ValueError("Matrix has non-integer entries")
        return [[int(x) for x in row] for row in self.rows()]

    def submatrix(self, rows: range | slice, cols: range | slice) -> RationalMatrix:
        row_idx = range(self.nrows)[rows] if isinstance(rows, slice) else rows
        col_idx = range(self.ncols)[cols] if isinstance(cols, slice) else cols
        return RationalMatrix.of(
            [[self[i, j] for j in col_idx] for i in row_idx], ncols=len(col_idx)
        )

    def select_columns(self, cols: Sequence[int]) -> RationalMatrix:
        return self.submatrix(range(self.nrows), list(cols))

    @property
    def T(self) -> RationalMatrix:
        return RationalMatrix.of(
            [self.column(j) for j in range(self.ncols)], ncols=self.nrows
        )

    def map(self, fn) -> RationalMatrix:
        return RationalMatrix(self.nrows, self.ncols, tuple(fn(x) for x in self.entries))

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ShapeError(f"Cannot multiply {self.shape} by {other.shape}")
        columns = [other.column(j) for j in range(other.ncols)]
        entries = []
        for i in range(self.nrows):
            row = self.row(i)
            for col in columns:
                entries.append(sum((a * b for a, b in zip(row, col) if a and b), Fraction(0)))
        return RationalMatrix(self.nrows, other.ncols, tuple(entries))

    def apply(self, vector: Sequence[Scalar]) -> tuple[Fraction, ...]:
        """Matrix-vector product"""
        if len(vector) != self.ncols:
            raise ShapeError(f"Vector of length {len(vector)} for shape {self.shape}")
        vector = [as_fraction(x) for x in vector]
        return tuple(
            sum((a * b for a, b in zip(row, vector) if a and b), Fraction(0))
            for row in self.rows()
        )

    def _elementwise(self, other: RationalMatrix, op) -> RationalMatrix:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeError(f"Shape mismatch {self.shape} vs {other.shape}")
        return RationalMatrix(
            self.nrows,
            self.ncols,
            tuple(op(a, b) for a, b in zip(self.entries, other.entries)),
        )

    def __add__(self, other: RationalMatrix) -> RationalMatrix:
        return self._elementwise(other, lambda a, b: a + b)

    def __sub__(self, other: RationalMatrix) -> RationalMatrix:
        return self._elementwise(other, lambda a, b: a - b)

    def __neg__(self) -> RationalMatrix:
        return self.map(lambda x: -x)

    def __mul__(self, scalar: Scalar) -> RationalMatrix:
        if isinstance(scalar, RationalMatrix):
            return NotImplemented
        scalar = as_fraction(scalar)
        return self.map(lambda x: x * scalar)

    __rmul__ = __mul__

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_integer(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_antisymmetric(self) -> bool:
        return self.is_square() and self == -self.T

    def det(self) -> Fraction:
        return det(self)

    def inverse(self) -> RationalMatrix:
        return inverse(self)

    def __str__(self) -> str:
        cells = [[str(x) for x in row] for row in self.rows()]
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join("[" + " ".join(f"{c:>{width}}" for c in row) + "]" for row in cells)


def lcm_of_denominators(matrix: RationalMatrix) -> int:
    """The lowest common denominator of all entries"""
    return reduce(math.lcm, (x.denominator for x in matrix.entries), 1)


def _require_square(matrix: RationalMatrix) -> None:
    if not matrix.is_square():
        raise ShapeError(f"Expected a square matrix, got shape {matrix.shape}")


def _require_antisymmetric(matrix: RationalMatrix) -> None:
    _require_square(matrix)
    if not matrix.is_antisymmetric():
        raise NotAntisymmetricError("Matrix is not anti-symmetric")


def det(matrix: RationalMatrix) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination"""
    _require_square(matrix)
    n = matrix.nrows
    if n == 0:
        return Fraction(1)
    a = matrix.tolist()
    sign = 1
    previous = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / previous
        previous = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse(matrix: RationalMatrix) -> RationalMatrix:
    """Exact inverse by Gauss-Jordan elimination"""
    _require_square(matrix)
    n = matrix.nrows
    a = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix.tolist())]
    for col in range(n):
        pivot = next((i for i in range(col, n) if a[i][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError("Matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        scale = a[col][col]
        a[col] = [x / scale for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                factor = a[i][col]
                a[i] = [x - factor * y for x, y in zip(a[i], a[col])]
    return RationalMatrix.of([row[n:] for row in a], ncols=n)


def pfaffian(matrix: RationalMatrix) -> Fraction:
    """
    Pfaffian of an anti-symmetric matrix.

    Skew Gaussian elimination: each step eliminates a (row, column) pair
    against the pivot in position (k, k+1), so Pf(A)² = det(A) exactly.
    """
    _require_antisymmetric(matrix)
    n = matrix.nrows
    if n % 2:
        raise ShapeError("Pfaffian requires an even dimension")
    a = matrix.tolist()
    result = Fraction(1)
    for k in range(0, n - 1, 2):
        pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k + 1:
            a[k + 1], a[pivot] = a[pivot], a[k + 1]
            for row in a:
                row[k + 1], row[pivot] = row[pivot], row[k + 1]
            result = -result
        result *= a[k][k + 1]
        if k + 2 < n:
            tau = [a[k][j] / a[k][k + 1] for j in range(k + 2, n)]
            column = [a[i][k + 1] for i in range(k + 2, n)]
            for i in range(k + 2, n):
                for j in range(k + 2, n):
                    a[i][j] += tau[i - k - 2] * column[j - k - 2] - column[i - k - 2] * tau[j - k - 2]
    return result


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a·x + b·y = g = gcd(a, b) ≥ 0"""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class BezoutPair(NamedTuple):
    a: int
    b: int


def bezout_pair(c: int, d: int) -> BezoutPair:
    """
    Canonical integers (a, b) with b·c - a·d = 1.

    Among all solutions, |b| is minimised first, then |a|, and a positive
    `a` wins any remaining tie.
    """
    if c < 1:
        raise ValueError(f"Qudit dimension must be positive, got {c}")
    g, x, y = extended_gcd(c, d)
    if g != 1:
        raise ValueError(f"gcd({c}, {d}) = {g}, expected coprime pair")
    b0, a0 = x, -y
    # Every solution is (a0 + c·s, b0 + d·s)
    if d:
        centre = round(Fraction(-b0, d))
    else:
        centre = round(Fraction(-a0, c))
    candidates = [(a0 + c * s, b0 + d * s) for s in range(centre - 2, centre + 3)]
    a, b = min(candidates, key=lambda ab: (abs(ab[1]), abs(ab[0]), ab[0] <= 0))
    assert b * c - a * d == 1
    return BezoutPair(a, b)


@dataclass(frozen=True)
class AltSmithDecomposition:
    # Unimodular R with Rᵀ A R in canonical form
    transform: RationalMatrix
    # Invariants h₁ | h₂ | … | h_k, all positive
    invariants: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.invariants)

    def canonical_form(self) -> RationalMatrix:
        """The block matrix [[0, h, 0], [-h, 0, 0], [0, 0, 0]]"""
        return canonical_pairing(self.invariants, self.transform.nrows)


def canonical_pairing(values: Sequence[Scalar], n: int) -> RationalMatrix:
    """[[0, diag(v), 0], [-diag(v), 0, 0], [0, 0, 0]] padded to size n"""
    k = len(values)
    entries = [[Fraction(0)] * n for _ in range(n)]
    for j, value in enumerate(values):
        entries[j][k + j] = as_fraction(value)
        entries[k + j][j] = -as_fraction(value)
    return RationalMatrix.of(entries, ncols=n)


class _Congruence:
    """Integer matrix under simultaneous column and row operations, A → Eᵀ A E"""

    def __init__(self, matrix: list[list[int]]):
        self.a = matrix
        self.n = len(matrix)
        self.r = [[int(i == j) for j in range(self.n)] for i in range(self.n)]

    def add_multiple(self, src: int, dst: int, q: int) -> None:
        # e_dst ← e_dst + q·e_src
        a = self.a
        for row in a:
            row[dst] += q * row[src]
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        for row in self.r:
            row[dst] += q * row[src]

    def swap(self, i: int, j: int) -> None:
        if i == j:
            return
        for row in self.a:
            row[i], row[j] = row[j], row[i]
        self.a[i], self.a[j] = self.a[j], self.a[i]
        for row in self.r:
            row[i], row[j] = row[j], row[i]

    def negate(self, i: int) -> None:
        for row in self.a:
            row[i] = -row[i]
        self.a[i] = [-x for x in self.a[i]]
        for row in self.r:
            row[i] = -row[i]

    def smallest(self, start: int) -> tuple[int, int] | None:
        best = None
        for i in range(start, self.n):
            for j in range(i + 1, self.n):
                value = abs(self.a[i][j])
                if value and (best is None or value < best[0]):
                    best = (value, i, j)
        return best[1:] if best else None

    def nondivisible(self, start: int, h: int) -> int | None:
        for i in range(start, self.n):
            for j in range(i + 1, self.n):
                if self.a[i][j] % h:
                    return i
        return None


def alt_smith(matrix: RationalMatrix) -> AltSmithDecomposition:
    """
    Alternating Smith normal form of an integer anti-symmetric matrix.

    Returns unimodular R such that Rᵀ A R = [[0, h, 0], [-h, 0, 0], [0, 0, 0]]
    with positive h₁ | h₂ | … | h_k.
    """
    _require_antisymmetric(matrix)
    if not matrix.is_integer():
        raise ValueError("Alternating Smith form requires an integer matrix")
    work = _Congruence(matrix.to_ints())
    n = work.n
    invariants: list[int] = []
    s = 0
    while s + 1 < n:
        entry = work.smallest(s)
        if entry is None:
            break
        while True:
            i, j = entry
            work.swap(s, i)
            if j == s:
                j = i
            work.swap(s + 1, j)
            a = work.a
            pivot = a[s][s + 1]
            for t in range(s + 2, n):
                if q := a[s][t] // pivot:
                    work.add_multiple(s + 1, t, -q)
                if q := a[s + 1][t] // a[s + 1][s]:
                    work.add_multiple(s, t, -q)
            if any(a[s][t] or a[s + 1][t] for t in range(s + 2, n)):
                entry = work.smallest(s)
                continue
            if (bad := work.nondivisible(s + 2, pivot)) is not None:
                work.add_multiple(bad, s, 1)
                entry = work.smallest(s)
                continue
            break
        if work.a[s][s + 1] < 0:
            work.negate(s)
        invariants.append(work.a[s][s + 1])
        s += 2

    k = len(invariants)
    order = [2 * j for j in range(k)] + [2 * j + 1 for j in range(k)] + list(range(2 * k, n))
    transform = RationalMatrix.of([[row[c] for c in order] for row in work.r], ncols=n)
    logger.debug(f"Alternating Smith invariants: {invariants}")
    return AltSmithDecomposition(transform, tuple(invariants))


class ColumnEchelon(NamedTuple):
    """M·U = H with H in lower column echelon form and U unimodular"""

    H: RationalMatrix
    U: RationalMatrix
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def column_echelon(matrix: RationalMatrix) -> ColumnEchelon:
    """
    Integer column echelon (Hermite) form.

    Pivots are positive and the entries to the left of each pivot are
    reduced into [0, pivot).
    """
    a = matrix.to_ints()
    nrows, ncols = matrix.shape
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def add(src: int, dst: int, q: int) -> None:
        for row in a:
            row[dst] += q * row[src]
        for row in u:
            row[dst] += q * row[src]

    def swap(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in u:
            row[i], row[j] = row[j], row[i]

    pivots: list[int] = []
    for r in range(nrows):
        rank = len(pivots)
        if rank == ncols:
            break
        while True:
            nonzero = [j for j in range(rank, ncols) if a[r][j]]
            if not nonzero:
                break
            swap(rank, min(nonzero, key=lambda j: abs(a[r][j])))
            for j in range(rank + 1, ncols):
                if a[r][j]:
                    add(rank, j, -(a[r][j] // a[r][rank]))
            if not any(a[r][j] for j in range(rank + 1, ncols)):
                break
        if not a[r][rank]:
            continue
        if a[r][rank] < 0:
            for row in a:
                row[rank] = -row[rank]
            for row in u:
                row[rank] = -row[rank]
        for j in range(rank):
            if q := a[r][j] // a[r][rank]:
                add(rank, j, -q)
        pivots.append(r)
    return ColumnEchelon(
        RationalMatrix.of(a, ncols=ncols), RationalMatrix.of(u, ncols=ncols), tuple(pivots)
    )


class IntegerSystem:
    """
    Integer solutions of M·y = x for a fixed rational M.

    The echelon factorisation is computed once, so repeated solves (for
    example classifying many residual displacements) are cheap.
    """

    def __init__(self, matrix: RationalMatrix):
        self.matrix = matrix
        self.scale = lcm_of_denominators(matrix)
        self.echelon = column_echelon(matrix * self.scale)
        h = self.echelon.H
        self._h = h.to_ints()
        self._u = self.echelon.U.to_ints()

    @property
    def kernel(self) -> RationalMatrix:
        """Columns spanning the integer kernel of M"""
        rank = self.echelon.rank
        return self.echelon.U.submatrix(slice(None), slice(rank, None))

    def solve(self, target: Sequence[Scalar]) -> tuple[int, ...] | None:
        """One integer solution, or None if x is not in the integer span"""
        scaled = [as_fraction(x) * self.scale for x in target]
        if any(x.denominator != 1 for x in scaled):
            return None
        x = [int(v) for v in scaled]
        z: list[int] = []
        for i, r in enumerate(self.echelon.pivots):
            value = x[r] - sum(self._h[r][j] * z[j] for j in range(i))
            if value % self._h[r][i]:
                return None
            z.append(value // self._h[r][i])
        for r, row in enumerate(self._h):
            if sum(row[j] * z[j] for j in range(len(z))) != x[r]:
                return None
        return tuple(sum(row[j] * z[j] for j in range(len(z))) for row in self._u)


def reduce_modulo_lattice(
    vector: Sequence[int], echelon: ColumnEchelon
) -> tuple[int, ...]:
    """Canonical representative of `vector` modulo the column span of echelon.H"""
    v = list(vector)
    h = echelon.H
    for i, r in enumerate(echelon.pivots):
        pivot = int(h[r, i])
        if q := v[r] // pivot:
            v = [x - q * int(h[row, i]) for row, x in enumerate(v)]
    return tuple(v)


def complete_unimodular(rows: Sequence[Sequence[int]]) -> RationalMatrix:
    """
    Extend integer rows to a unimodular matrix that starts with them.

    Possible exactly when the rows' Smith invariants are all one.
    """
    a = RationalMatrix.of(rows)
    if not a.is_integer():
        raise NotCompletableError("Rows must be integer vectors")
    k, n = a.shape
    echelon = column_echelon(a)
    if echelon.rank < k:
        raise NotCompletableError("Rows are linearly dependent")
    pivots = [echelon.H[r, i] for i, r in enumerate(echelon.pivots)]
    if any(p != 1 for p in pivots):
        raise NotCompletableError(
            f"Rows span a sublattice of index {math.prod(pivots)}, cannot complete to a unimodular matrix"
        )
    # A·U = [H | 0] so A = H·(U⁻¹)[:k]; the rest of U⁻¹ completes A
    rest = inverse(echelon.U).submatrix(slice(k, n), slice(None))
    completed = RationalMatrix.vstack(a, rest) if k < n else a
    assert abs(det(completed)) == 1
    return completed

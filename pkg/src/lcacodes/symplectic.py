"""
Symplectic forms, square-root scaled matrices and the Morita action.

Encoders of oscillator lattices carry entries like √(t/m). These are kept
exact by `ScaledMatrix`, which stores a rational base matrix together with
the radicands of its row (and optionally column) prefactors. All quadratic
forms that matter pair those radicands into rationals.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    NotSymplecticError,
    RadicandPairingError,
    ShapeError,
    SingularMatrixError,
    UndefinedActionError,
)
from .exactmath import RationalMatrix, Scalar, as_fraction, det, inverse, rational_sqrt

logger = logging.getLogger(__name__)


def cv_form(p: int) -> RationalMatrix:
    """J_cv = [[0, I_p], [-I_p, 0]]"""
    identity = RationalMatrix.identity(p)
    zero = RationalMatrix.zeros(p)
    return RationalMatrix.block([[zero, identity], [-identity, zero]])


def dv_form(cvec: Sequence[int]) -> RationalMatrix:
    """J_dv = [[0, c⁻¹], [-c⁻¹, 0]]"""
    k = len(cvec)
    inv_c = RationalMatrix.diag([Fraction(1, c) for c in cvec])
    zero = RationalMatrix.zeros(k)
    return RationalMatrix.block([[zero, inv_c], [-inv_c, zero]])


def direct_sum(*blocks: RationalMatrix) -> RationalMatrix:
    rows = []
    total = sum(b.ncols for b in blocks)
    offset = 0
    for b in blocks:
        for row in b.rows():
            rows.append([0] * offset + list(row) + [0] * (total - offset - b.ncols))
        offset += b.ncols
    return RationalMatrix.of(rows, ncols=total)


def weighted_form(weights: Sequence[Scalar], cvec: Sequence[int]) -> RationalMatrix:
    """
    The combined form in stored coordinates.

    A stored CV coordinate is √wᵢ times the physical one, so the oscillator
    block pairs mode i with weight wᵢ.
    """
    W = RationalMatrix.diag(weights)
    zero = RationalMatrix.zeros(len(weights))
    return direct_sum(RationalMatrix.block([[zero, W], [-W, zero]]), dv_form(cvec))


@dataclass(frozen=True)
class SymplecticForm:
    p: int
    cvec: tuple[int, ...] = ()

    @property
    def k(self) -> int:
        return len(self.cvec)

    @property
    def J_cv(self) -> RationalMatrix:
        return cv_form(self.p)

    @property
    def J_dv(self) -> RationalMatrix:
        return dv_form(self.cvec)

    @property
    def full(self) -> RationalMatrix:
        return direct_sum(self.J_cv, self.J_dv)


def _common_root(values: Sequence[Fraction]) -> tuple[Fraction, list[Fraction]]:
    """
    Write each √vᵢ as √s·qᵢ with one shared s and rational qᵢ.

    Raises RadicandPairingError when the values are not all rational-square
    multiples of each other.
    """
    nonzero = [v for v in values if v]
    if not nonzero or all(rational_sqrt(v) is not None for v in nonzero):
        s = Fraction(1)
    else:
        s = nonzero[0]
    factors = []
    for v in values:
        root = rational_sqrt(v / s)
        if root is None:
            raise RadicandPairingError(
                f"√{v} is not a rational multiple of √{s}"
            )
        factors.append(root)
    return s, factors


def _signed_square(value: Fraction, radicand: Fraction) -> Fraction:
    # sign(x)·x² of x = value·√radicand, exact
    return value * abs(value) * radicand


@dataclass(frozen=True, eq=False)
class ScaledMatrix:
    """The matrix diag(√radicands) · base · diag(√col_radicands)"""

    radicands: tuple[Fraction, ...]
    base: RationalMatrix
    col_radicands: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "radicands", tuple(as_fraction(r) for r in self.radicands))
        if self.col_radicands is not None:
            cols = tuple(as_fraction(r) for r in self.col_radicands)
            object.__setattr__(self, "col_radicands", None if all(c == 1 for c in cols) else cols)
            if len(cols) != self.base.ncols:
                raise ShapeError("Column radicands do not match the base matrix")
        if len(self.radicands) != self.base.nrows:
            raise ShapeError("Row radicands do not match the base matrix")
        if any(r <= 0 for r in self.radicands + (self.col_radicands or ())):
            raise ValueError("Radicands must be positive")

    @classmethod
    def from_rational(cls, matrix: RationalMatrix) -> ScaledMatrix:
        return cls((Fraction(1),) * matrix.nrows, matrix)

    @classmethod
    def uniform(cls, radicand: Scalar, base: RationalMatrix) -> ScaledMatrix:
        return cls((as_fraction(radicand),) * base.nrows, base)

    @property
    def shape(self) -> tuple[int, int]:
        return self.base.shape

    @property
    def columns(self) -> tuple[Fraction, ...]:
        return self.col_radicands or (Fraction(1),) * self.base.ncols

    @property
    def T(self) -> ScaledMatrix:
        return ScaledMatrix(self.columns, self.base.T, self.radicands)

    def __neg__(self) -> ScaledMatrix:
        return ScaledMatrix(self.radicands, -self.base, self.col_radicands)

    def inverse(self) -> ScaledMatrix:
        return ScaledMatrix(
            tuple(1 / c for c in self.columns),
            inverse(self.base),
            tuple(1 / r for r in self.radicands),
        )

    def signed_squares(self) -> tuple[Fraction, ...]:
        """sign(x)·x² for every entry x, row-major"""
        cols = self.columns
        return tuple(
            _signed_square(self.base[i, j], r * cols[j])
            for i, r in enumerate(self.radicands)
            for j in range(self.base.ncols)
        )

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RationalMatrix):
            other = ScaledMatrix.from_rational(other)
        if not isinstance(other, ScaledMatrix):
            return NotImplemented
        return self.shape == other.shape and self.signed_squares() == other.signed_squares()

    def __hash__(self) -> int:
        return hash((self.shape, self.signed_squares()))

    def __matmul__(self, other: ScaledMatrix | RationalMatrix) -> ScaledMatrix:
        if isinstance(other, RationalMatrix):
            other = ScaledMatrix.from_rational(other)
        if not isinstance(other, ScaledMatrix):
            return NotImplemented
        if self.base.ncols != other.base.nrows:
            raise ShapeError(f"Cannot multiply {self.shape} by {other.shape}")
        middle = [c * r for c, r in zip(self.columns, other.radicands)]
        shared, factors = _common_root(middle)
        base = self.base @ RationalMatrix.diag(factors) @ other.base
        return ScaledMatrix(
            tuple(r * shared for r in self.radicands), base, other.col_radicands
        )

    def __rmatmul__(self, other: RationalMatrix) -> ScaledMatrix:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return ScaledMatrix.from_rational(other) @ self

    def rebased(self, radicands: Sequence[Scalar]) -> ScaledMatrix:
        """Re-express with the given row radicands and no column prefactors"""
        radicands = tuple(as_fraction(r) for r in radicands)
        cols = self.columns
        rows = []
        for i, (old, new) in enumerate(zip(self.radicands, radicands, strict=True)):
            row = []
            for j, value in enumerate(self.base.row(i)):
                if not value:
                    row.append(0)
                    continue
                ratio = rational_sqrt(old * cols[j] / new)
                if ratio is None:
                    raise RadicandPairingError(
                        f"Entry ({i}, {j}) cannot be expressed over √{new}"
                    )
                row.append(value * ratio)
            rows.append(row)
        return ScaledMatrix(radicands, RationalMatrix.of(rows, ncols=self.base.ncols))

    def to_rational(self) -> RationalMatrix:
        """The exact rational matrix, if every entry is rational"""
        return self.rebased([1] * self.base.nrows).base

    def is_rational(self) -> bool:
        try:
            self.to_rational()
        except RadicandPairingError:
            return False
        return True

    def simplified(self) -> ScaledMatrix | RationalMatrix:
        if self.is_rational():
            return self.to_rational()
        return self

    def to_array(self) -> np.ndarray:
        """Floating-point view, for display only"""
        base = np.array([[float(x) for x in row] for row in self.base.rows()], dtype=float)
        base = base.reshape(self.base.shape)
        rows = np.sqrt(np.array([float(r) for r in self.radicands]))
        cols = np.sqrt(np.array([float(c) for c in self.columns]))
        return rows[:, None] * base * cols[None, :]


Encoder = ScaledMatrix | RationalMatrix


def as_scaled(matrix: Encoder) -> ScaledMatrix:
    if isinstance(matrix, RationalMatrix):
        return ScaledMatrix.from_rational(matrix)
    return matrix


def pair(X: Encoder, Y: Encoder, J: RationalMatrix) -> RationalMatrix:
    """
    Exact Xᵀ J Y.

    Every nonzero entry of J must pair row radicands into a rational, and
    the resulting core must pair the column radicands into rationals.
    """
    X, Y = as_scaled(X), as_scaled(Y)
    if J.shape != (X.base.nrows, Y.base.nrows):
        raise ShapeError(f"Form of shape {J.shape} cannot pair {X.shape} with {Y.shape}")
    inner = []
    for i, ri in enumerate(X.radicands):
        row = []
        for j, rj in enumerate(Y.radicands):
            if not J[i, j]:
                row.append(0)
                continue
            root = rational_sqrt(ri * rj)
            if root is None:
                raise RadicandPairingError(f"√({ri}·{rj}) is irrational at form entry ({i}, {j})")
            row.append(J[i, j] * root)
        inner.append(row)
    core = X.base.T @ RationalMatrix.of(inner, ncols=Y.base.nrows) @ Y.base
    return ScaledMatrix(X.columns, core, Y.columns).to_rational()


def is_integer_symplectic(M: RationalMatrix, p: int) -> bool:
    if M.shape != (2 * p, 2 * p) or not M.is_integer():
        return False
    J = cv_form(p)
    return M.T @ J @ M == J


def is_symplectic(M: Encoder, p: int) -> bool:
    """Mᵀ J_cv M = J_cv, for rational or square-root scaled M"""
    if M.shape != (2 * p, 2 * p):
        return False
    J = cv_form(p)
    try:
        return pair(M, M, J) == J
    except RadicandPairingError:
        return False


def _qudit_dimension(cvec: Sequence[int], index: int) -> int:
    return cvec[index % len(cvec)]


def is_mod_symplectic(M: RationalMatrix, cvec: Sequence[int]) -> bool:
    """
    Whether integer M is a symplectic automorphism of ⊕ Z_c².

    The form is compared modulo integers, since the qudit phases are
    exp(2πi·⟨x, J_dv y⟩), and every entry must define a homomorphism
    from the column's Z_c to the row's Z_c.
    """
    k = len(cvec)
    if M.shape != (2 * k, 2 * k):
        raise ShapeError(f"Expected a {2 * k}×{2 * k} matrix, got {M.shape}")
    if not M.is_integer():
        raise ValueError("Qudit Clifford matrices must be integer")
    if k == 0:
        return True
    J = dv_form(cvec)
    if not (M.T @ J @ M - J).is_integer():
        return False
    for i in range(2 * k):
        for j in range(2 * k):
            if (M[i, j] * _qudit_dimension(cvec, j)) % _qudit_dimension(cvec, i):
                return False
    return True


def mod_reduce(M: RationalMatrix, cvec: Sequence[int]) -> RationalMatrix:
    """Reduce row i modulo the dimension of the qudit it acts on"""
    if not M.is_integer():
        raise ValueError("Can only reduce integer matrices")
    if not cvec:
        return M
    return RationalMatrix.of(
        [[x % _qudit_dimension(cvec, i) for x in row] for i, row in enumerate(M.rows())],
        ncols=M.ncols,
    )


def symplectic_pauli_action(
    M: RationalMatrix, cvec: Sequence[int], generator_index: int
) -> tuple[int, ...]:
    """
    Image of a generalized Pauli under the symplectic M, as exponents mod c.

    Index j < k is X_j and k + j is Z_j; the returned vector lists the X
    exponents of every qudit followed by the Z exponents.
    """
    if not is_mod_symplectic(M, cvec):
        raise NotSymplecticError("Matrix is not symplectic modulo the qudit dimensions")
    if not 0 <= generator_index < M.ncols:
        raise IndexError(f"No Pauli generator with index {generator_index}")
    column = M.column(generator_index)
    return tuple(int(x) % _qudit_dimension(cvec, i) for i, x in enumerate(column))


@dataclass(frozen=True)
class MoritaElement:
    A: RationalMatrix
    B: RationalMatrix
    C: RationalMatrix
    D: RationalMatrix

    @classmethod
    def from_matrix(cls, matrix: RationalMatrix) -> MoritaElement:
        n = matrix.nrows // 2
        top, bottom = slice(0, n), slice(n, 2 * n)
        return cls(
            matrix.submatrix(top, top),
            matrix.submatrix(top, bottom),
            matrix.submatrix(bottom, top),
            matrix.submatrix(bottom, bottom),
        )

    @classmethod
    def identity(cls, n: int) -> MoritaElement:
        return cls(
            RationalMatrix.identity(n),
            RationalMatrix.zeros(n),
            RationalMatrix.zeros(n),
            RationalMatrix.identity(n),
        )

    @property
    def matrix(self) -> RationalMatrix:
        return RationalMatrix.block([[self.A, self.B], [self.C, self.D]])

    def __matmul__(self, other: MoritaElement) -> MoritaElement:
        return MoritaElement.from_matrix(self.matrix @ other.matrix)

    def inverse(self) -> MoritaElement:
        # Inverse in O(n, n): η gᵀ η with η = [[0, I], [I, 0]]
        return MoritaElement(self.D.T, self.B.T, self.C.T, self.A.T)


def is_so_nn(g: MoritaElement) -> bool:
    n = g.A.nrows
    if any(block.shape != (n, n) for block in (g.A, g.B, g.C, g.D)):
        return False
    if not g.matrix.is_integer():
        return False
    zero = RationalMatrix.zeros(n)
    return (
        g.A.T @ g.C + g.C.T @ g.A == zero
        and g.B.T @ g.D + g.D.T @ g.B == zero
        and g.A.T @ g.D + g.C.T @ g.B == RationalMatrix.identity(n)
        and det(g.matrix) == 1
    )


def mobius(g: MoritaElement, theta: RationalMatrix) -> RationalMatrix:
    """(AΘ + B)(CΘ + D)⁻¹"""
    try:
        denominator = inverse(g.C @ theta + g.D)
    except SingularMatrixError:
        raise UndefinedActionError("Action undefined at this Θ: CΘ + D is singular") from None
    result = (g.A @ theta + g.B) @ denominator
    if theta.is_antisymmetric():
        assert result.is_antisymmetric(), "Moebius image of an anti-symmetric matrix"
    return result

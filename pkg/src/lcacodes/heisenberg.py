"""
Hybrid displacement algebra with exact phases.

Displacements are stored in the code's coordinates (m_cv, s_cv | m_dv, s_dv),
with CV entries in the code's stored units: a physical CV coordinate is
√(2π·wᵢ) times the stored one, wᵢ being the code's weight for mode i.
Phases are kept modulo 1, as Fractions whenever every coordinate is exact.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, NamedTuple, Sequence, Union

from .errors import NotInLatticeError, ShapeError
from .exactmath import (
    ColumnEchelon,
    IntegerSystem,
    RationalMatrix,
    as_fraction,
    column_echelon,
    inverse,
    reduce_modulo_lattice,
)

if TYPE_CHECKING:
    from .codes import LatticeCode

logger = logging.getLogger(__name__)

Real = Union[Fraction, float]


@dataclass(frozen=True)
class HybridDisplacement:
    m_cv: tuple[Real, ...]
    s_cv: tuple[Real, ...]
    m_dv: tuple[int, ...] = ()
    s_dv: tuple[int, ...] = ()
    phase: Real = Fraction(0)

    @property
    def vector(self) -> tuple[Real, ...]:
        return self.m_cv + self.s_cv + self.m_dv + self.s_dv

    @classmethod
    def from_vector(
        cls, vector: Sequence[Real], p: int, phase: Real = Fraction(0)
    ) -> HybridDisplacement:
        k, rem = divmod(len(vector) - 2 * p, 2)
        if rem or k < 0:
            raise ShapeError(f"Vector of length {len(vector)} does not fit p={p}")
        vector = tuple(vector)
        return cls(
            vector[:p],
            vector[p : 2 * p],
            tuple(int(x) for x in vector[2 * p : 2 * p + k]),
            tuple(int(x) for x in vector[2 * p + k :]),
            phase,
        )

    def is_exact(self) -> bool:
        return all(isinstance(x, (int, Fraction)) for x in self.m_cv + self.s_cv) and not isinstance(
            self.phase, float
        )

    def __str__(self) -> str:
        def fmt(values):
            return ", ".join(str(x) for x in values)

        return f"D({fmt(self.m_cv)}, {fmt(self.s_cv)} | {fmt(self.m_dv)}, {fmt(self.s_dv)})·e^(2πi·{self.phase})"


def _mod1(value: Real) -> Real:
    return value % 1


def _reduce_dv(code: LatticeCode, values: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(v) % c for v, c in zip(values, code.cvec, strict=True))


def _check(code: LatticeCode, x: HybridDisplacement) -> None:
    if len(x.m_cv) != code.p or len(x.s_cv) != code.p:
        raise ShapeError(f"Displacement has {len(x.m_cv)} modes, code has {code.p}")
    if len(x.m_dv) != len(code.cvec) or len(x.s_dv) != len(code.cvec):
        raise ShapeError(f"Displacement has {len(x.m_dv)} qudits, code has {len(code.cvec)}")


def _raw_inner(x: HybridDisplacement, y: HybridDisplacement, code: LatticeCode) -> Real:
    """⟨x, J y⟩ without reduction"""
    cv = sum(
        w * (m1 * s2 - s1 * m2)
        for w, m1, s1, m2, s2 in zip(code.cv_weights, x.m_cv, x.s_cv, y.m_cv, y.s_cv)
    )
    dv = sum(
        Fraction(m1 * s2 - s1 * m2, c)
        for c, m1, s1, m2, s2 in zip(code.cvec, x.m_dv, x.s_dv, y.m_dv, y.s_dv)
    )
    return cv + dv


def _raw_half_inner(x: HybridDisplacement, y: HybridDisplacement, code: LatticeCode) -> Real:
    """⟨x, J′ y⟩, where J′ is J with its negative entries replaced by zero"""
    cv = sum(w * m1 * s2 for w, m1, s2 in zip(code.cv_weights, x.m_cv, y.s_cv))
    dv = sum(Fraction(m1 * s2, c) for c, m1, s2 in zip(code.cvec, x.m_dv, y.s_dv))
    return cv + dv


def phase_inner(x: HybridDisplacement, y: HybridDisplacement, code: LatticeCode) -> Real:
    """The commutation phase ⟨x, J y⟩ mod 1"""
    _check(code, x)
    _check(code, y)
    return _mod1(_raw_inner(x, y, code))


def compose(x: HybridDisplacement, y: HybridDisplacement, code: LatticeCode) -> HybridDisplacement:
    """The product x·y"""
    _check(code, x)
    _check(code, y)
    return HybridDisplacement(
        tuple(a + b for a, b in zip(x.m_cv, y.m_cv)),
        tuple(a + b for a, b in zip(x.s_cv, y.s_cv)),
        _reduce_dv(code, [a + b for a, b in zip(x.m_dv, y.m_dv)]),
        _reduce_dv(code, [a + b for a, b in zip(x.s_dv, y.s_dv)]),
        _mod1(x.phase + y.phase - _raw_half_inner(x, y, code)),
    )


def identity(code: LatticeCode) -> HybridDisplacement:
    k = len(code.cvec)
    zero = (Fraction(0),) * code.p
    return HybridDisplacement(zero, zero, (0,) * k, (0,) * k)


def stabilizer_element(code: LatticeCode, l: Sequence[int]) -> HybridDisplacement:
    """U_l = A(l)·D(T l) with A(l) = -⟨T l, J′ T l⟩/2"""
    basis = code.lattice_basis
    if len(l) != basis.ncols:
        raise ShapeError(f"Expected {basis.ncols} lattice coefficients, got {len(l)}")
    unreduced = HybridDisplacement.from_vector(basis.apply([int(x) for x in l]), code.p)
    phase = _mod1(-_raw_half_inner(unreduced, unreduced, code) / 2)
    return HybridDisplacement(
        unreduced.m_cv,
        unreduced.s_cv,
        _reduce_dv(code, unreduced.m_dv),
        _reduce_dv(code, unreduced.s_dv),
        phase,
    )


def generators(code: LatticeCode) -> list[HybridDisplacement]:
    n = code.lattice_basis.ncols
    return [stabilizer_element(code, [int(i == j) for j in range(n)]) for i in range(n)]


def logical_generators(code: LatticeCode) -> list[HybridDisplacement]:
    basis = code.logical_basis
    return [HybridDisplacement(*_split_reduced(code, basis.column(j))) for j in range(basis.ncols)]


def _split_reduced(code: LatticeCode, vector: Sequence[Fraction]):
    x = HybridDisplacement.from_vector(vector, code.p)
    return x.m_cv, x.s_cv, _reduce_dv(code, x.m_dv), _reduce_dv(code, x.s_dv), Fraction(0)


def displacement(
    code: LatticeCode,
    m_cv: Sequence[Real],
    s_cv: Sequence[Real],
    m_dv: Sequence[int] = (),
    s_dv: Sequence[int] = (),
) -> HybridDisplacement:
    """A displacement with zero phase; qudit powers default to zero"""
    k = len(code.cvec)
    return HybridDisplacement(
        tuple(m_cv),
        tuple(s_cv),
        _reduce_dv(code, m_dv or (0,) * k),
        _reduce_dv(code, s_dv or (0,) * k),
    )


def apply_linear(
    code: LatticeCode,
    V_cv: RationalMatrix,
    V_dv: RationalMatrix,
    x: HybridDisplacement,
) -> HybridDisplacement:
    """Push a displacement through a linear map given in stored coordinates"""
    _check(code, x)
    p, k = code.p, len(code.cvec)
    cv = V_cv.apply(x.m_cv + x.s_cv)
    dv = V_dv.apply(x.m_dv + x.s_dv) if k else ()
    return HybridDisplacement(
        cv[:p], cv[p:], _reduce_dv(code, dv[:k]), _reduce_dv(code, dv[k:]), x.phase
    )


def _exact_vector(x: HybridDisplacement) -> tuple[Fraction, ...]:
    if not x.is_exact():
        raise TypeError("Lattice queries need exact coordinates")
    return tuple(as_fraction(v) for v in x.vector)


def lattice_member(code: LatticeCode, x: HybridDisplacement) -> tuple[int, ...] | None:
    """The l with T·l = x (CV exactly, DV modulo c), or None"""
    _check(code, x)
    vector = _exact_vector(x)
    n_cv = 2 * code.p
    basis = code.lattice_basis
    cv_block = basis.submatrix(slice(0, n_cv), slice(None))
    l = inverse(cv_block).apply(vector[:n_cv])
    if any(v.denominator != 1 for v in l):
        return None
    dv = basis.submatrix(slice(n_cv, None), slice(None)).apply(l)
    k = len(code.cvec)
    for i, (have, want) in enumerate(zip(dv, vector[n_cv:])):
        if (have - want) % code.cvec[i % k]:
            return None
    return tuple(int(v) for v in l)


class _LogicalSolver(NamedTuple):
    system: IntegerSystem
    relations: ColumnEchelon
    n_stabilizers: int
    n_logicals: int


@functools.lru_cache(maxsize=32)
def _logical_solver(code: LatticeCode) -> _LogicalSolver:
    stabilizers = code.lattice_basis
    logicals = code.logical_basis
    n_cv = 2 * code.p
    k = len(code.cvec)
    size = stabilizers.nrows
    moduli = RationalMatrix.of(
        [
            [code.cvec[j % k] if i == n_cv + j else 0 for j in range(2 * k)]
            for i in range(size)
        ],
        ncols=2 * k,
    )
    system = IntegerSystem(RationalMatrix.hstack(stabilizers, logicals, moduli))
    n_s, n_l = stabilizers.ncols, logicals.ncols
    # Integer relations between the generators, seen on the logical coefficients
    relations = system.kernel.submatrix(slice(n_s, n_s + n_l), slice(None))
    logger.debug(f"Logical relation lattice built for {code}")
    return _LogicalSolver(system, column_echelon(relations), n_s, n_l)


def reduce_logical(code: LatticeCode, coefficients: Sequence[int]) -> tuple[int, ...]:
    """Canonical form of logical-generator coefficients modulo the stabilizers"""
    return reduce_modulo_lattice([int(x) for x in coefficients], _logical_solver(code).relations)


def logical_class(code: LatticeCode, x: HybridDisplacement) -> tuple[int, ...]:
    """
    Coefficients of x over the logical generators, modulo the stabilizers.

    For a simple code this is (α mod K, β mod K) with x ≡ X̄^α Z̄^β.
    """
    _check(code, x)
    solver = _logical_solver(code)
    solution = solver.system.solve(_exact_vector(x))
    if solution is None:
        raise NotInLatticeError(f"{x} is not a logical-coset element")
    coefficients = solution[solver.n_stabilizers : solver.n_stabilizers + solver.n_logicals]
    return reduce_modulo_lattice(coefficients, solver.relations)

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcacodes.codes import simple_code, standard_form_multi
from lcacodes.errors import NotInLatticeError, ShapeError
from lcacodes.exactmath import RationalMatrix
from lcacodes.heisenberg import (
    HybridDisplacement,
    apply_linear,
    compose,
    displacement,
    generators,
    identity,
    lattice_member,
    logical_class,
    logical_generators,
    phase_inner,
    reduce_logical,
    stabilizer_element,
)

QUBIT = simple_code(3, 2, 0)

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)
qutrit_powers = st.integers(min_value=-4, max_value=4)


@st.composite
def displacements(draw, code=QUBIT):
    return displacement(
        code,
        (draw(fractions),),
        (draw(fractions),),
        (draw(qutrit_powers),),
        (draw(qutrit_powers),),
    )


def test_stabilizers_commute():
    s_x, s_z = generators(QUBIT)
    assert phase_inner(s_x, s_z, QUBIT) == 0
    assert phase_inner(s_z, s_x, QUBIT) == 0


def test_logical_commutator():
    x_bar, z_bar = logical_generators(QUBIT)
    # ⟨X̄, J Z̄⟩ = -(aθ + b)/K
    assert phase_inner(x_bar, z_bar, QUBIT) == Fraction(1, 2)
    qutrit = simple_code(3, 1, 1)
    x_bar, z_bar = logical_generators(qutrit)
    assert phase_inner(x_bar, z_bar, qutrit) == Fraction(1, 4)


@given(displacements(), displacements())
@settings(deadline=None)
def test_group_commutator(x, y):
    forward = compose(x, y, QUBIT)
    backward = compose(y, x, QUBIT)
    assert forward.vector == backward.vector
    assert (backward.phase - forward.phase) % 1 == phase_inner(x, y, QUBIT)


@given(displacements(), displacements(), displacements())
@settings(deadline=None)
def test_composition_is_associative(x, y, z):
    left = compose(compose(x, y, QUBIT), z, QUBIT)
    right = compose(x, compose(y, z, QUBIT), QUBIT)
    assert left == right


@given(displacements())
@settings(deadline=None)
def test_identity(x):
    assert compose(identity(QUBIT), x, QUBIT) == x
    assert compose(x, identity(QUBIT), QUBIT) == x


def test_shape_checks():
    with pytest.raises(ShapeError):
        phase_inner(
            HybridDisplacement((Fraction(0),) * 2, (Fraction(0),) * 2, (0,), (0,)),
            identity(QUBIT),
            QUBIT,
        )
    with pytest.raises(ShapeError):
        stabilizer_element(QUBIT, [1, 0, 0])


def test_stabilizer_membership():
    s_x, s_z = generators(QUBIT)
    assert lattice_member(QUBIT, s_x) == (1, 0)
    assert lattice_member(QUBIT, s_z) == (0, 1)
    x_bar, _ = logical_generators(QUBIT)
    assert lattice_member(QUBIT, x_bar) is None


def test_logical_classes():
    x_bar, z_bar = logical_generators(QUBIT)
    assert logical_class(QUBIT, x_bar) == (1, 0)
    assert logical_class(QUBIT, z_bar) == (0, 1)
    for s in generators(QUBIT):
        assert not any(logical_class(QUBIT, s))


def test_powers_of_logicals():
    x_bar, _ = logical_generators(QUBIT)
    power = identity(QUBIT)
    for _ in range(QUBIT.c):
        power = compose(power, x_bar, QUBIT)
    # X̄ᶜ is X̄^(c mod K) times a stabilizer
    assert logical_class(QUBIT, power) == (QUBIT.c % QUBIT.K, 0)
    assert reduce_logical(QUBIT, [QUBIT.K, QUBIT.K]) == (0, 0)


def test_off_lattice_displacement():
    stray = displacement(QUBIT, (Fraction(1, 2),), (0,))
    with pytest.raises(NotInLatticeError):
        logical_class(QUBIT, stray)


def test_floats_need_exact_queries():
    with pytest.raises(TypeError):
        lattice_member(QUBIT, displacement(QUBIT, (0.5,), (0.0,)))


def test_apply_linear_identity():
    x_bar, _ = logical_generators(QUBIT)
    moved = apply_linear(QUBIT, RationalMatrix.identity(2), RationalMatrix.identity(2), x_bar)
    assert moved == x_bar


def test_multi_mode_logicals():
    code = standard_form_multi((3, 2), (2, 1), (0, 1))
    classes = [logical_class(code, x) for x in logical_generators(code)]
    n = len(classes)
    for j, found in enumerate(classes):
        assert found == reduce_logical(code, [int(i == j) for i in range(n)])
    for s in generators(code):
        assert phase_inner(s, s, code) == 0
        assert not any(logical_class(code, s))

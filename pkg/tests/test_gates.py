from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcacodes.codes import simple_code, standard_form_multi
from lcacodes.errors import InputError, NotRealizableError, NotSymplecticError
from lcacodes.exactmath import RationalMatrix, det
from lcacodes.gates import (
    hadamard,
    in_gamma0,
    induced_logical_action,
    is_automorphism,
    lift_sp2_modc,
    logical_action,
    qudit_clifford,
    synthesize,
    verify_gate,
)

QUBIT = simple_code(3, 2, 0)
SHEAR = RationalMatrix.of([[1, 1], [0, 1]])
LOWER_SHEAR = RationalMatrix.of([[1, 0], [1, 1]])

# Every coprime (c, d) with 1 < d < c ≤ 10, so that K = d > 1 at θ = 0
QUDIT_PAIRS = [(c, d) for c in range(3, 11) for d in range(2, c) if math.gcd(c, d) == 1]


def test_automorphisms():
    theta = RationalMatrix.of([[0, 2], [-2, 0]])
    assert is_automorphism(SHEAR, theta)
    assert not is_automorphism(RationalMatrix.of([[2, 0], [0, 1]]), theta)
    assert not is_automorphism(RationalMatrix.of([["1/2", 0], [0, 2]]), theta)


def test_gamma0():
    assert in_gamma0(RationalMatrix.of([[1, 0], [3, 1]]), 3)
    assert not in_gamma0(LOWER_SHEAR, 3)
    assert in_gamma0(SHEAR, 0)
    with pytest.raises(NotSymplecticError):
        in_gamma0(RationalMatrix.of([[2, 0], [0, 1]]), 3)


def test_qudit_clifford():
    assert qudit_clifford(QUBIT, SHEAR) == RationalMatrix.of([[1, 1], [0, 1]])
    with pytest.raises(NotRealizableError):
        qudit_clifford(QUBIT, LOWER_SHEAR)


def test_synthesize_shear():
    gate = synthesize(QUBIT, SHEAR)
    assert gate.V_cv == SHEAR
    assert gate.V_dv == RationalMatrix.of([[1, -2], [0, 1]])
    assert verify_gate(QUBIT, gate).passed
    assert logical_action(QUBIT, SHEAR, gate) == RationalMatrix.of([[1, 0], [1, 1]])


def test_synthesize_outside_gamma0():
    with pytest.raises(NotRealizableError):
        synthesize(QUBIT, LOWER_SHEAR)


def test_lower_shear_on_qubit_free_code():
    # With c = 1 every W ∈ Sp(2, Z) is realizable
    code = simple_code(1, 0, 2)
    gate = synthesize(code, LOWER_SHEAR)
    assert gate.V_dv == RationalMatrix.identity(2)


@pytest.mark.parametrize("c,d", QUDIT_PAIRS)
def test_hadamard(c, d):
    code = simple_code(c, d, 0)
    gate = hadamard(code)
    assert verify_gate(code, gate).passed
    # X̄ ↦ Z̄⁻¹ and Z̄ ↦ X̄
    K = code.K
    assert induced_logical_action(code, gate) == RationalMatrix.of(
        [[0, 1], [(K - 1) % K, 0]]
    )


def test_hadamard_qudit_map():
    gate = hadamard(QUBIT)
    # X ↦ Z and Z ↦ X²
    assert gate.V_dv == RationalMatrix.of([[0, 2], [1, 0]])


def test_multi_mode_gate():
    code = standard_form_multi((2,), (1,), (1,))
    gate = synthesize(code, SHEAR)
    report = verify_gate(code, gate)
    assert report.passed
    assert report.logical_action is not None


def test_multi_mode_needs_unit_d():
    code = standard_form_multi((3,), (2,), (1,))
    with pytest.raises(NotRealizableError):
        synthesize(code, SHEAR)


@pytest.mark.parametrize(
    "rows,c,d",
    [
        ([[1, 1], [0, 1]], 3, 2),
        ([[0, 2], [1, 0]], 3, 2),
        ([[2, 1], [1, 1]], 5, 3),
        ([[3, 0], [0, 3]], 4, 1),
    ],
)
def test_lift(rows, c, d):
    W_mod = RationalMatrix.of(rows)
    W = lift_sp2_modc(W_mod, c, d)
    assert det(W) == 1
    assert W[1, 0] % d == 0
    assert all((x - y) % c == 0 for x, y in zip(W.entries, W_mod.entries))


def test_lift_trivial_dimension():
    assert lift_sp2_modc(SHEAR, 1, 5) == RationalMatrix.identity(2)


def test_lift_rejects():
    with pytest.raises(InputError):
        lift_sp2_modc(SHEAR, 4, 2)
    with pytest.raises(NotSymplecticError):
        lift_sp2_modc(RationalMatrix.of([[2, 0], [0, 1]]), 3, 2)


def _shear(e: int, upper: bool) -> RationalMatrix:
    return RationalMatrix.of([[1, e], [0, 1]] if upper else [[1, 0], [e, 1]])


@given(
    st.sampled_from([(c, d) for c in (2, 3, 5, 7) for d in range(1, 13) if math.gcd(c, d) == 1]),
    st.lists(st.integers(min_value=-5, max_value=5), min_size=1, max_size=6),
)
@settings(deadline=None)
def test_lift_of_shear_products(cd, exponents):
    c, d = cd
    W_mod = RationalMatrix.identity(2)
    for i, e in enumerate(exponents):
        W_mod = W_mod @ _shear(e, i % 2 == 0)
    W = lift_sp2_modc(W_mod, c, d)
    assert det(W) == 1
    assert W[1, 0] % d == 0
    assert W[1, 0] != 0
    assert all((x - y) % c == 0 for x, y in zip(W.entries, W_mod.entries))

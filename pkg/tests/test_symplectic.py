from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from lcacodes.errors import NotSymplecticError, RadicandPairingError, ShapeError, UndefinedActionError
from lcacodes.exactmath import RationalMatrix
from lcacodes.symplectic import (
    MoritaElement,
    ScaledMatrix,
    SymplecticForm,
    cv_form,
    dv_form,
    is_integer_symplectic,
    is_mod_symplectic,
    is_so_nn,
    is_symplectic,
    mobius,
    mod_reduce,
    pair,
    symplectic_pauli_action,
)

I2 = RationalMatrix.identity(2)


def test_forms():
    assert cv_form(1) == RationalMatrix.of([[0, 1], [-1, 0]])
    assert dv_form([3]) == RationalMatrix.of([[0, "1/3"], ["-1/3", 0]])
    full = SymplecticForm(1, (3,)).full
    assert full.shape == (4, 4)
    assert full[0, 1] == 1 and full[2, 3] == Fraction(1, 3)


def test_scaled_product_becomes_rational():
    root2 = ScaledMatrix.uniform(2, I2)
    assert root2 @ root2 == I2 * 2
    assert (root2 @ root2).is_rational()
    assert not root2.is_rational()
    assert root2.inverse() @ root2 == I2


def test_scaled_incommensurate_product():
    with pytest.raises(RadicandPairingError):
        ScaledMatrix((1, 1), I2, (2, 3)) @ RationalMatrix.of([[1, 1], [1, 1]])


def test_rebased():
    squeezed = ScaledMatrix((8, Fraction(1, 2)), I2)
    rebased = squeezed.rebased((2, 2))
    assert rebased.base == RationalMatrix.of([[2, 0], [0, Fraction(1, 2)]])
    assert rebased == squeezed


def test_to_array():
    array = ScaledMatrix((2, Fraction(1, 2)), I2).to_array()
    assert np.allclose(array, [[np.sqrt(2), 0], [0, np.sqrt(0.5)]])


def test_squeezing_is_symplectic():
    squeeze = ScaledMatrix((2, Fraction(1, 2)), I2)
    assert is_symplectic(squeeze, 1)
    assert not is_symplectic(ScaledMatrix.uniform(2, I2), 1)
    assert pair(squeeze, squeeze, cv_form(1)) == cv_form(1)


def test_pair_shape_mismatch():
    with pytest.raises(ShapeError):
        pair(I2, I2, RationalMatrix.identity(3))


def test_integer_symplectic():
    shear = RationalMatrix.of([[1, 1], [0, 1]])
    assert is_integer_symplectic(shear, 1)
    assert not is_integer_symplectic(RationalMatrix.of([[2, 0], [0, 1]]), 1)
    assert not is_integer_symplectic(RationalMatrix.of([["1/2", 0], [0, 2]]), 1)


def test_mod_symplectic():
    assert is_mod_symplectic(RationalMatrix.of([[1, 1], [0, 1]]), (3,))
    assert is_mod_symplectic(RationalMatrix.of([[2, 0], [0, 2]]), (3,))
    assert not is_mod_symplectic(RationalMatrix.of([[2, 0], [0, 1]]), (3,))
    with pytest.raises(ShapeError):
        is_mod_symplectic(I2, (2, 2))


def test_mod_symplectic_mixed_dimensions():
    # X of a qubit cannot be sent to X of a qutrit
    swap = RationalMatrix.of(
        [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    )
    assert is_mod_symplectic(RationalMatrix.identity(4), (2, 3))
    assert not is_mod_symplectic(swap, (2, 3))


def test_mod_reduce():
    assert mod_reduce(RationalMatrix.of([[4, -1], [0, 1]]), (3,)) == RationalMatrix.of(
        [[1, 2], [0, 1]]
    )


def test_pauli_action():
    shear = RationalMatrix.of([[1, 1], [0, 1]])
    # Z ↦ XZ under the shear
    assert symplectic_pauli_action(shear, (3,), 1) == (1, 1)
    assert symplectic_pauli_action(shear, (3,), 0) == (1, 0)
    with pytest.raises(NotSymplecticError):
        symplectic_pauli_action(RationalMatrix.of([[2, 0], [0, 1]]), (3,), 0)


def test_morita_duality():
    duality = MoritaElement(
        RationalMatrix.zeros(2), I2, I2, RationalMatrix.zeros(2)
    )
    theta = RationalMatrix.of([[0, 2], [-2, 0]])
    assert is_so_nn(duality)
    assert mobius(duality, theta) == RationalMatrix.of([[0, "-1/2"], ["1/2", 0]])
    assert mobius(MoritaElement.identity(2), theta) == theta
    with pytest.raises(UndefinedActionError):
        mobius(duality, RationalMatrix.zeros(2))


def test_morita_inverse():
    shift = MoritaElement(I2, cv_form(1), RationalMatrix.zeros(2), I2)
    assert is_so_nn(shift)
    assert (shift @ shift.inverse()).matrix == RationalMatrix.identity(4)
    theta = RationalMatrix.of([[0, 3], [-3, 0]])
    assert mobius(shift, theta) == theta + cv_form(1)

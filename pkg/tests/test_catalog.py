from __future__ import annotations

from fractions import Fraction

import pytest

from lcacodes.catalog import (
    binary_code_lca,
    commutation_matrix_code,
    e8_matrix,
    e8_pauli_image,
    interleaved,
    rectangular_gkp,
    scaled_gkp,
    square_gkp,
)
from lcacodes.codes import verify
from lcacodes.errors import InputError, NotCompletableError
from lcacodes.exactmath import RationalMatrix, alt_smith, canonical_pairing, det
from lcacodes.symplectic import cv_form, direct_sum, is_integer_symplectic


def test_e8_is_symplectic():
    e8 = e8_matrix()
    assert det(e8) == 1
    assert is_integer_symplectic(e8, 4)


def test_e8_pauli_images():
    assert e8_pauli_image(2, "X") == ((1, 0, 1, 0), (0, 1, 0, 0))
    for j in range(1, 5):
        for kind in ("X", "Z"):
            x, z = e8_pauli_image(j, kind)
            assert len(x) == len(z) == 4
            assert any(x) or any(z)


@pytest.mark.parametrize("j", [1, 2, 3, 4])
def test_e8_cyclic_map(j):
    # X_j → X_{j-1} Z_j X_{j+1} and Z_j → Z_{j-1} X_j Z_{j+1}, qubits taken mod 4
    neighbours = tuple(int(i in ((j - 2) % 4, j % 4)) for i in range(4))
    own = tuple(int(i == j - 1) for i in range(4))
    assert e8_pauli_image(j, "X") == (neighbours, own)
    assert e8_pauli_image(j, "Z") == (own, neighbours)


@pytest.mark.parametrize("j,kind", [(0, "X"), (5, "Z"), (1, "Y")])
def test_e8_pauli_rejects(j, kind):
    with pytest.raises(InputError):
        e8_pauli_image(j, kind)


def test_interleaved():
    assert interleaved(cv_form(2)) == direct_sum(cv_form(1), cv_form(1))
    assert interleaved(cv_form(1)) == cv_form(1)


def test_binary_code():
    G = RationalMatrix.of([[1, 0, 1, 0], [0, 1, 0, 1]])
    code = binary_code_lca(G)
    assert code.cvec == (2,)
    assert code.T_dv == G
    report = verify(code)
    assert report.passed, report.failures


def test_binary_code_rejects():
    with pytest.raises(NotCompletableError):
        binary_code_lca(RationalMatrix.of([[1, 0, 1, 0], [1, 0, 1, 0]]))
    with pytest.raises(InputError):
        binary_code_lca(RationalMatrix.of([[2, 0, 1, 0], [0, 1, 0, 1]]))
    with pytest.raises(InputError):
        binary_code_lca(RationalMatrix.of([[1, 0, 1], [0, 1, 0]]))
    with pytest.raises(InputError):
        binary_code_lca(RationalMatrix.of([[1, 0, 1, 0], [0, 1, 0, 1]]), L1=[2])


def test_commutation_single_qubit():
    A = RationalMatrix.of([[0, "-2/3"], ["2/3", 0]])
    code = commutation_matrix_code(A)
    assert (code.cvec, code.dvec, code.K) == ((3,), (2,), 2)
    assert verify(code).passed


@pytest.mark.parametrize(
    "numerator,denominator,thetavec,c,d,K",
    [(5, 3, None, 3, 2, 5), (5, 3, (0,), 3, 5, 5), (7, 2, None, 2, 1, 7), (7, 5, (1,), 5, 2, 7)],
)
def test_commutation_keeps_the_class_of_A(numerator, denominator, thetavec, c, d, K):
    value = Fraction(numerator, denominator)
    A = RationalMatrix.of([[0, -value], [value, 0]])
    code = commutation_matrix_code(A, thetavec)
    assert (code.cvec, code.dvec, code.K) == ((c,), (d,), K)
    # K = cθ + d with h/m = θ + d/c
    assert alt_smith((code.theta - code.Z) * denominator).invariants == alt_smith(
        A * denominator
    ).invariants
    assert verify(code).passed


def test_commutation_two_pairs():
    A = canonical_pairing([Fraction(1, 2), Fraction(3, 2)], 4)
    code = commutation_matrix_code(A, (0, 0))
    assert code.cvec == (2, 2)
    assert code.dvec == (1, 3)
    assert verify(code).passed


def test_commutation_without_qudits():
    # Θ = 1 with nothing to commute is a scaled GKP code
    code = commutation_matrix_code(RationalMatrix.zeros(2), (1,))
    assert code.K == 2
    assert verify(code).passed


def test_commutation_rejects():
    with pytest.raises(InputError):
        commutation_matrix_code(RationalMatrix.identity(2))
    with pytest.raises(InputError):
        commutation_matrix_code(RationalMatrix.zeros(2), (1, 1))


def test_named_gkp_lattices():
    for code in (square_gkp(), square_gkp(2), rectangular_gkp(2), rectangular_gkp("1/3")):
        assert code.K == 2 ** code.p
        assert not code.cvec
        report = verify(code)
        assert report.passed, report.failures


def test_scaled_gkp():
    assert scaled_gkp(3).K == 3
    assert scaled_gkp(2, 2).K == 4
    with pytest.raises(InputError):
        scaled_gkp(0)
    with pytest.raises(InputError):
        rectangular_gkp(0)

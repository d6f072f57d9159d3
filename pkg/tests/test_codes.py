from __future__ import annotations

import dataclasses
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcacodes.codes import (
    build_general,
    distance_simple,
    displacement_unit,
    dual_torus,
    logical_dimension,
    physical_distance,
    prep_symplectic,
    simple_code,
    standard_form_multi,
    verify,
    verify_simple,
)
from lcacodes.errors import ConstructionError
from lcacodes.exactmath import RationalMatrix, canonical_pairing, inverse
from lcacodes.symplectic import is_so_nn, mobius


def test_smallest_qubit():
    code = simple_code(3, 2, 0)
    assert (code.K, code.a, code.b) == (2, 1, 1)
    assert not code.flipped
    assert verify_simple(code).passed


@pytest.mark.parametrize(
    "c,d,theta,K",
    [(2, 1, 0, 1), (2, 1, 1, 3), (3, 1, 1, 4), (5, 3, 0, 3), (7, 4, 2, 18), (1, 0, 2, 2)],
)
def test_simple_codes_verify(c, d, theta, K):
    code = simple_code(c, d, theta)
    assert code.K == K
    report = verify_simple(code)
    assert report.passed, report.failures
    assert logical_dimension(code) == K


def test_negative_dimension_flips():
    code = simple_code(3, -2, 0)
    assert code.flipped
    assert (code.d, code.theta, code.K) == (2, 0, 2)


@pytest.mark.parametrize("c,d,theta", [(4, 2, 0), (0, 1, 1), (3, 0, 0)])
def test_simple_code_rejects(c, d, theta):
    with pytest.raises(ConstructionError):
        simple_code(c, d, theta)


def test_tampered_code_fails_verification():
    code = dataclasses.replace(simple_code(3, 2, 0), K=3)
    report = verify_simple(code)
    assert not report.passed
    assert not report["dimension"].passed


def test_distance():
    code = simple_code(3, 2, 0)
    assert distance_simple(code) == Fraction(3, 2)
    assert physical_distance(code).magnitude == pytest.approx(math.sqrt(3 * math.pi))
    assert displacement_unit(code).to("quadrature").magnitude == pytest.approx(
        math.sqrt(2 * math.pi / 6)
    )


def test_simple_dual_torus():
    code = simple_code(3, 2, 1)
    assert dual_torus(code) == RationalMatrix.of([[0, "2/5"], ["-2/5", 0]])
    general = code.to_general()
    assert general.theta_perp == dual_torus(code)
    assert mobius(general.g, general.theta) == general.theta_perp


@pytest.mark.parametrize(
    "cvec,dvec,thetavec,K",
    [
        ((3,), (2,), (0,), 2),
        ((3,), (2,), (1,), 5),
        ((3, 5), (2, 3), (0, 1), 16),
        ((2, 2), (1, 1), (1, 0), 3),
        ((4, 3, 2), (1, 1, 1), (1, 1, 1), 5 * 4 * 3),
    ],
)
def test_standard_form_verifies(cvec, dvec, thetavec, K):
    code = standard_form_multi(cvec, dvec, thetavec)
    assert code.K == K
    assert code.cvec == cvec
    report = verify(code)
    assert report.passed, report.failures
    assert logical_dimension(code) == K


def test_standard_form_rejects():
    with pytest.raises(ConstructionError):
        standard_form_multi((3,), (3,), (0,))
    with pytest.raises(ConstructionError):
        standard_form_multi((3, 2), (1,), (0, 0))


def test_build_general_matches_standard_form():
    standard = standard_form_multi((3,), (2,), (1,))
    rebuilt = build_general(standard.theta, standard.Z)
    assert rebuilt.K == standard.K
    assert rebuilt.cvec == standard.cvec
    assert rebuilt.dvec == standard.dvec
    assert verify(rebuilt).passed


def test_build_general_rejects():
    theta = canonical_pairing([1], 2)
    with pytest.raises(ConstructionError):
        build_general(theta, canonical_pairing([1], 2))
    with pytest.raises(ConstructionError):
        build_general(RationalMatrix.identity(2), RationalMatrix.zeros(2))
    with pytest.raises(ConstructionError):
        build_general(canonical_pairing(["1/2"], 2), RationalMatrix.zeros(2))


def test_tampered_general_code_fails():
    code = standard_form_multi((3,), (2,), (1,))
    report = verify(dataclasses.replace(code, theta=code.theta * 2))
    assert not report.passed
    assert not report["encoder"].passed
    assert report["so_nn"].passed


def test_prep_symplectic_identity():
    code = standard_form_multi((3,), (2,), (1,))
    prep = prep_symplectic(code, code)
    assert prep.S_cv == RationalMatrix.identity(2)
    assert prep.L == RationalMatrix.identity(2)


@pytest.mark.parametrize(
    "c,d",
    [(c, d) for c in range(2, 11) for d in range(1, c) if math.gcd(c, d) == 1],
)
def test_single_mode_dimension(c, d):
    for theta in range(6):
        code = standard_form_multi((c,), (d,), (theta,))
        assert code.K == c * theta + d
        assert logical_dimension(code) == c * theta + d


def test_single_mode_dimension_mismatch():
    code = standard_form_multi((5,), (2,), (1,))
    with pytest.raises(ConstructionError):
        logical_dimension(dataclasses.replace(code, K=code.K + 5))


@st.composite
def unimodular_matrices(draw, n: int) -> RationalMatrix:
    """Products of elementary row additions"""
    U = RationalMatrix.identity(n)
    steps = draw(
        st.lists(
            st.tuples(
                st.integers(min_value=0, max_value=n - 1),
                st.integers(min_value=0, max_value=n - 1),
                st.integers(min_value=-2, max_value=2),
            ),
            max_size=4,
        )
    )
    for i, j, factor in steps:
        if i != j:
            step = [[int(r == s) for s in range(n)] for r in range(n)]
            step[i][j] = factor
            U = U @ RationalMatrix.of(step)
    return U


@st.composite
def rotated_standard_forms(draw):
    p = draw(st.integers(min_value=1, max_value=3))
    c = draw(st.sampled_from([2, 3, 5]))
    dvec = draw(st.lists(st.integers(min_value=1, max_value=c - 1), min_size=p, max_size=p))
    thetavec = draw(st.lists(st.integers(min_value=0, max_value=2), min_size=p, max_size=p))
    standard = standard_form_multi((c,) * p, dvec, thetavec)
    return standard, draw(unimodular_matrices(2 * p))


@given(rotated_standard_forms())
@settings(deadline=None, max_examples=40)
def test_build_general_in_any_basis(case):
    standard, U = case
    code = build_general(U.T @ standard.theta @ U, U.T @ standard.Z @ U)
    assert code.K == standard.K
    assert code.cvec == standard.cvec
    report = verify(code)
    assert report.passed, report.failures
    assert mobius(code.g, code.theta) == code.theta_perp
    assert is_so_nn(code.g)


@given(
    st.integers(min_value=1, max_value=3).flatmap(
        lambda p: st.tuples(
            st.lists(st.integers(min_value=1, max_value=4), min_size=p, max_size=p),
            unimodular_matrices(2 * p),
        )
    )
)
@settings(deadline=None, max_examples=40)
def test_gkp_dual_torus_is_inverse(case):
    scales, U = case
    theta = U.T @ canonical_pairing(scales, 2 * len(scales)) @ U
    code = build_general(theta, RationalMatrix.zeros(theta.nrows))
    assert code.K == math.prod(scales)
    assert code.theta_perp == inverse(theta)
    assert verify(code).passed

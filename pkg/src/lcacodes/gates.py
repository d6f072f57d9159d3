"""
Logical Clifford gates from automorphisms of the code lattice.

A lattice automorphism W (integer, unimodular, preserving the torus)
becomes the block-diagonal Gaussian-Clifford V_cv ⊕ V_dv with
V·T = T·W, so the stabilizer lattice is carried onto itself and the
logical operators are permuted by (W⁻¹)ᵀ.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .codes import GeneralLcaCode, SimpleLcaCode, VerificationReport
from .errors import (
    InputError,
    NotRealizableError,
    NotSymplecticError,
    ShapeError,
    VerificationError,
)
from .exactmath import RationalMatrix, det, extended_gcd, inverse
from .heisenberg import (
    HybridDisplacement,
    apply_linear,
    generators,
    lattice_member,
    logical_class,
    logical_generators,
    reduce_logical,
)
from .symplectic import (
    Encoder,
    ScaledMatrix,
    as_scaled,
    is_integer_symplectic,
    is_mod_symplectic,
    is_symplectic,
    mod_reduce,
)

logger = logging.getLogger(__name__)

Code = SimpleLcaCode | GeneralLcaCode

SWAP = RationalMatrix.of([[0, 1], [1, 0]])


@dataclass(frozen=True)
class GaussianClifford:
    # Oscillator part, in physical coordinates
    V_cv: Encoder
    # Qudit part, an integer matrix acting on (m_dv, s_dv)
    V_dv: RationalMatrix
    # The lattice automorphism this gate implements, if known
    W: RationalMatrix | None = None

    def to_json(self) -> dict[str, Any]:
        from .files import encoder_to_json, matrix_to_json

        return {
            "V_cv": encoder_to_json(self.V_cv),
            "V_dv": matrix_to_json(self.V_dv),
            "W": matrix_to_json(self.W) if self.W is not None else None,
        }


def is_automorphism(W: RationalMatrix, theta: RationalMatrix) -> bool:
    if not W.is_square() or W.shape != theta.shape or not W.is_integer():
        return False
    return abs(det(W)) == 1 and W.T @ theta @ W == theta


def in_gamma0(W: RationalMatrix, d: int) -> bool:
    """Whether W ∈ Sp(2, Z) has lower-left entry divisible by d"""
    if not is_integer_symplectic(W, 1):
        raise NotSymplecticError("W is not in Sp(2, Z)")
    return W[1, 0] % d == 0 if d else W[1, 0] == 0


def _stored_radicands(code: Code) -> tuple[Fraction, ...]:
    return tuple(code.cv_weights) * 2


def stored_cv(code: Code, V_cv: Encoder) -> RationalMatrix:
    """The oscillator map in the code's stored coordinates"""
    V = as_scaled(V_cv)
    radicands = _stored_radicands(code)
    return ScaledMatrix(
        tuple(r / w for r, w in zip(V.radicands, radicands)),
        V.base,
        tuple(c * w for c, w in zip(V.columns, radicands)),
    ).to_rational()


def qudit_clifford(code: SimpleLcaCode, W: RationalMatrix) -> RationalMatrix:
    """T_dv·W·T_dv⁻¹, reduced modulo c"""
    return mod_reduce(_simple_dv(code, W), code.cvec)


def _simple_dv(code: SimpleLcaCode, W: RationalMatrix) -> RationalMatrix:
    """T_dv·W·T_dv⁻¹ = [[p, -d·q], [-r/d, s]], integer when W ∈ Γ0(d)"""
    if code.c == 1:
        return RationalMatrix.identity(2)
    if code.d == 0 or W[1, 0] % code.d:
        raise NotRealizableError(
            f"W is not realizable as a qudit Clifford: d={code.d} does not divide {W[1, 0]}"
        )
    (p, q), (r, s) = W.rows()
    return RationalMatrix.of([[p, -code.d * q], [-r / code.d, s]])


def synthesize(code: Code, W: RationalMatrix) -> GaussianClifford:
    """The Gaussian-Clifford implementing the lattice automorphism W"""
    n = 2 * code.p
    if W.shape != (n, n) or not W.is_integer():
        raise ShapeError(f"W must be an integer {n}×{n} matrix")

    if isinstance(code, SimpleLcaCode):
        theta = RationalMatrix.of([[0, code.theta], [-code.theta, 0]])
        if not is_automorphism(W, theta):
            raise NotRealizableError("W is not an automorphism of Θ")
        V_cv: Encoder = W
        V_dv = _simple_dv(code, W)
    else:
        if not is_automorphism(W, code.theta):
            raise NotRealizableError("W is not an automorphism of Θ")
        if any(d != 1 for d in code.dvec):
            raise NotRealizableError(
                "Multi-mode gate synthesis needs every qudit to have d = 1"
            )
        base = code.T_cv.base
        V_cv = ScaledMatrix(
            code.T_cv.radicands,
            base @ W @ inverse(base),
            tuple(1 / r for r in code.T_cv.radicands),
        ).simplified()
        # With d = 1, R⁻¹·[[I], [0]] is an integer right inverse of T_dv
        k = code.k
        embed = RationalMatrix.of(
            [[int(i == j) for j in range(2 * k)] for i in range(n)], ncols=2 * k
        )
        V_dv = code.T_dv @ W @ inverse(code.R) @ embed

    gate = GaussianClifford(V_cv, V_dv, W)
    report = verify_gate(code, gate)
    if not report.passed:
        raise NotRealizableError(
            "Synthesized gate fails: " + ", ".join(c.name for c in report.failures)
        )
    logger.debug(f"Synthesized gate for W={W.tolist()}")
    return gate


def hadamard(code: SimpleLcaCode) -> GaussianClifford:
    """
    The logical Hadamard: a quarter rotation of phase space with the
    qudit map X → Zᵃ, Z → Xᵈ.
    """
    rotation = RationalMatrix.of([[0, -1], [1, 0]])
    V_dv = RationalMatrix.of([[0, code.d], [code.a, 0]])
    gate = GaussianClifford(rotation, V_dv, rotation)
    report = verify_gate(code, gate)
    if not report.passed:
        raise VerificationError(
            "Hadamard construction failed: " + ", ".join(c.name for c in report.failures)
        )
    return gate


def _push(code: Code, gate: GaussianClifford, x: HybridDisplacement) -> HybridDisplacement:
    return apply_linear(code, stored_cv(code, gate.V_cv), gate.V_dv, x)


def induced_logical_action(code: Code, gate: GaussianClifford) -> RationalMatrix:
    """Columns are the logical classes of the pushed logical generators"""
    columns = [logical_class(code, _push(code, gate, x)) for x in logical_generators(code)]
    return RationalMatrix.of(columns).T


def _expected_logical_matrix(code: Code, W: RationalMatrix) -> RationalMatrix:
    dual = inverse(W).T
    if isinstance(code, SimpleLcaCode):
        # The simple logical basis lists X̄ first; the dual torus basis Z̄ first
        return SWAP @ dual @ SWAP
    n = 2 * code.p
    k = code.k
    E = RationalMatrix.diag([Fraction(1, c) for c in code.cvec] * 2 + [-1] * (n - 2 * k))
    return inverse(E) @ inverse(code.R).T @ dual @ code.R.T @ E


def logical_action(
    code: Code, W: RationalMatrix, gate: GaussianClifford | None = None
) -> RationalMatrix:
    """(W⁻¹)ᵀ mod K, checked against the classes of the pushed logicals"""
    if gate is None:
        gate = synthesize(code, W)
    induced = induced_logical_action(code, gate)
    expected = _expected_logical_matrix(code, W)
    if not expected.is_integer():
        raise VerificationError("Predicted logical action is not integral")
    for j in range(expected.ncols):
        predicted = reduce_logical(code, [int(x) for x in expected.column(j)])
        if predicted != tuple(int(x) for x in induced.column(j)):
            raise VerificationError(
                f"Logical generator {j} maps to {induced.column(j)}, expected {predicted}"
            )
    return inverse(W).T.map(lambda x: x % code.K)


@dataclass
class GateReport(VerificationReport):
    logical_action: RationalMatrix | None = None

    def to_json(self) -> dict[str, Any]:
        data = super().to_json()
        if self.logical_action is not None:
            data["logical_action"] = [[int(x) for x in row] for row in self.logical_action.rows()]
        return data


def verify_gate(code: Code, gate: GaussianClifford) -> GateReport:
    report = GateReport(f"gate on {code}")
    report.record(
        "cv_symplectic", lambda: is_symplectic(gate.V_cv, code.p), "V_cvᵀ J V_cv ≠ J"
    )
    report.record(
        "dv_symplectic",
        lambda: is_mod_symplectic(gate.V_dv, code.cvec),
        "V_dv is not symplectic for the qudit form",
    )
    if not report.passed:
        return report
    for index, stabilizer in enumerate(generators(code)):
        report.record(
            f"stabilizer_{index}",
            lambda s=stabilizer: lattice_member(code, _push(code, gate, s)) is not None,
            "image is not in the stabilizer lattice",
        )
    if report.passed:
        report.logical_action = induced_logical_action(code, gate)
    return report


def lift_sp2_modc(W_mod: RationalMatrix, c: int, d: int) -> RationalMatrix:
    """
    An integer W ∈ Γ0(d) with det W = 1 and W ≡ W_mod (mod c).
    """
    if W_mod.shape != (2, 2) or not W_mod.is_integer():
        raise ShapeError("Expected an integer 2×2 matrix")
    if c < 1 or math.gcd(c, d) != 1:
        raise InputError(f"Need c ≥ 1 and gcd(c, d) = 1, got c={c} d={d}")
    (p, q), (r, s) = ([int(x) % c for x in row] for row in W_mod.rows())
    if (p * s - q * r) % c != 1 % c:
        raise NotSymplecticError(f"det W ≢ 1 mod {c}")

    if c == 1:
        return RationalMatrix.identity(2)

    # Lower row: r_lift ≡ r mod c, d | r_lift and gcd(r_lift, s_lift) = 1
    D = abs(d)
    r_lift = D * ((r * pow(D, -1, c)) % c) or D * c
    # s + j·c is coprime to r_lift when j carries exactly the primes of r_lift
    # that divide neither s nor c
    j = r_lift
    while (common := math.gcd(j, s * c)) > 1:
        j //= common
    s_lift = s + j * c

    _, x, y = extended_gcd(s_lift, r_lift)
    p0, q0 = x, -y
    for step in range(c):
        p_lift, q_lift = p0 + step * r_lift, q0 + step * s_lift
        if (p_lift - p) % c == 0 and (q_lift - q) % c == 0:
            break
    else:
        raise VerificationError("No lift of the upper row matches modulo c")

    W = RationalMatrix.of([[p_lift, q_lift], [r_lift, s_lift]])
    assert det(W) == 1
    assert r_lift % d == 0 if d else r_lift == 0
    logger.debug(f"Lifted {W_mod.tolist()} mod {c} to {W.tolist()}")
    return W

"""
Construction and verification of hybrid oscillator-qudit lattice codes.

Two kinds of code are provided:

- `SimpleLcaCode`: one oscillator and one qudit, given by (c, d, θ). Its
  stabilizer and logical generators are stored as integer coordinates in
  units of u′, with u′² = 1/(Kc).
- `GeneralLcaCode`: p oscillators and k qudits built from an integer
  anti-symmetric Θ and a rational anti-symmetric Z. The construction
  brings mZ and m(Θ - Z) into alternating Smith form and reads the qudit
  dimensions, encoders and the dual torus off the invariants.

Both expose the same stored-lattice interface (`p`, `cvec`, `cv_weights`,
`lattice_basis`, `logical_basis`) used by the displacement algebra,
decoder and gate synthesis.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NamedTuple, Protocol, Sequence

import pint

from .errors import ConstructionError, LcaError
from .exactmath import (
    AltSmithDecomposition,
    RationalMatrix,
    alt_smith,
    bezout_pair,
    canonical_pairing,
    det,
    inverse,
    lcm_of_denominators,
    pfaffian,
)
from .symplectic import (
    Encoder,
    MoritaElement,
    ScaledMatrix,
    as_scaled,
    cv_form,
    dv_form,
    is_mod_symplectic,
    is_so_nn,
    is_symplectic,
    mobius,
    pair,
    weighted_form,
)
from .util import unit_registry

logger = logging.getLogger(__name__)


class LatticeCode(Protocol):
    """Stored-coordinate view of a code's stabilizer and logical lattices"""

    @property
    def p(self) -> int: ...

    @property
    def cvec(self) -> tuple[int, ...]: ...

    @property
    def cv_weights(self) -> tuple[Fraction, ...]: ...

    @property
    def lattice_basis(self) -> RationalMatrix: ...

    @property
    def logical_basis(self) -> RationalMatrix: ...


def stored_form(code: LatticeCode) -> RationalMatrix:
    """The symplectic form on the code's stored coordinates"""
    return weighted_form(code.cv_weights, code.cvec)


@dataclass(frozen=True)
class SimpleLcaCode:
    c: int
    d: int
    theta: int
    a: int
    b: int
    K: int
    # Whether (θ, d) were sign-flipped to make cθ + d positive
    flipped: bool = False

    p = 1

    @property
    def cvec(self) -> tuple[int, ...]:
        return (self.c,)

    @property
    def unit_sq(self) -> Fraction:
        return Fraction(1, self.K * self.c)

    @property
    def cv_weights(self) -> tuple[Fraction, ...]:
        return (self.unit_sq,)

    @property
    def lattice_basis(self) -> RationalMatrix:
        # Columns S_X, S_Z in (m_cv, s_cv | m_dv, s_dv)
        return RationalMatrix.of(
            [[self.K, 0], [0, self.K], [-self.d, 0], [0, 1]]
        )

    @property
    def logical_basis(self) -> RationalMatrix:
        # Columns X̄, Z̄
        return RationalMatrix.of([[1, 0], [0, -1], [-1, 0], [0, self.a]])

    @property
    def ratio(self) -> Fraction:
        """θ + d/c, the single rational number fixing the code"""
        return Fraction(self.K, self.c)

    def to_general(self) -> GeneralLcaCode:
        return standard_form_multi((self.c,), (self.d,), (self.theta,))

    def __str__(self) -> str:
        return f"(c={self.c}, d={self.d}, θ={self.theta}) code, K={self.K}"


def _flip_if_negative(c: int, d: int, theta: int) -> tuple[int, int, bool]:
    K = c * theta + d
    if K == 0:
        raise ConstructionError(f"cθ + d = 0 for c={c}, d={d}, θ={theta}: no code")
    if K < 0:
        logger.info(
            f"cθ + d = {K} is negative; using the equivalent code with θ={-theta}, d={-d}"
        )
        return -d, -theta, True
    return d, theta, False


def simple_code(c: int, d: int, theta: int) -> SimpleLcaCode:
    if c < 1:
        raise ConstructionError(f"Qudit dimension must be at least 1, got {c}")
    if math.gcd(c, d) != 1:
        raise ConstructionError(f"gcd({c}, {d}) = {math.gcd(c, d)}; c and d must be coprime")
    d, theta, flipped = _flip_if_negative(c, d, theta)
    a, b = bezout_pair(c, d)
    K = c * theta + d
    logger.debug(f"Simple code c={c} d={d} θ={theta}: a={a} b={b} K={K}")
    return SimpleLcaCode(c=c, d=d, theta=theta, a=a, b=b, K=K, flipped=flipped)


@dataclass(frozen=True)
class GeneralLcaCode:
    theta: RationalMatrix
    Z: RationalMatrix
    m: int
    Q: RationalMatrix
    R: RationalMatrix
    t: tuple[int, ...]
    h: tuple[int, ...]
    cvec: tuple[int, ...]
    dvec: tuple[int, ...]
    avec: tuple[int, ...]
    bvec: tuple[int, ...]
    T_cv: ScaledMatrix
    T_dv: RationalMatrix
    S_cv: ScaledMatrix
    S_dv: RationalMatrix
    theta_perp: RationalMatrix
    g: MoritaElement
    K: int

    @property
    def p(self) -> int:
        return self.theta.nrows // 2

    @property
    def k(self) -> int:
        return len(self.cvec)

    @property
    def cv_weights(self) -> tuple[Fraction, ...]:
        return self.T_cv.radicands[: self.p]

    @property
    def lattice_basis(self) -> RationalMatrix:
        return RationalMatrix.vstack(self.T_cv.base, self.T_dv)

    @property
    def logical_basis(self) -> RationalMatrix:
        return RationalMatrix.vstack(self.S_cv.base, self.S_dv)

    @property
    def form(self) -> RationalMatrix:
        return stored_form(self)

    def __str__(self) -> str:
        return f"p={self.p} k={self.k} c={list(self.cvec)} code, K={self.K}"


def _qudit_rows(scales: Sequence[int], R: RationalMatrix) -> RationalMatrix:
    """[[diag(scales), 0, 0], [0, I_k, 0]] · R"""
    k = len(scales)
    rows = [[s * x for x in R.row(j)] for j, s in enumerate(scales)]
    rows += [list(R.row(k + j)) for j in range(k)]
    return RationalMatrix.of(rows, ncols=R.ncols)


def _assemble(
    theta: RationalMatrix,
    Z: RationalMatrix,
    m: int,
    R: RationalMatrix,
    cvec: Sequence[int],
    dvec: Sequence[int],
    h: Sequence[int],
    Q: RationalMatrix,
    t: Sequence[int],
) -> GeneralLcaCode:
    """
    Build every code matrix from the two normal forms.

    Requires Z = Rᵀ·[[0, d/c, 0], [-d/c, 0, 0], [0, 0, 0]]·R and
    Θ - Z = Qᵀ·[[0, t/m], [-t/m, 0]]·Q.
    """
    n = theta.nrows
    p, k = n // 2, len(cvec)
    pairs = [bezout_pair(c, d) for c, d in zip(cvec, dvec)]
    # The general construction uses a·d + b·c = 1
    avec = tuple(-pr.a for pr in pairs)
    bvec = tuple(pr.b for pr in pairs)
    radicands = tuple(Fraction(x, m) for x in t) * 2

    J = cv_form(p)
    encoder_base = J @ Q
    T_cv = ScaledMatrix(radicands, encoder_base)
    T_dv = _qudit_rows(dvec, R)

    inv_c = [Fraction(1, c) for c in cvec]
    E = RationalMatrix.diag(inv_c * 2 + [-1] * (n - 2 * k))
    S_cv = ScaledMatrix(
        radicands,
        RationalMatrix.diag([1 / r for r in radicands])
        @ J
        @ inverse(encoder_base).T
        @ R.T
        @ E,
    )
    s_dv_rows = [[-int(col == k + j) for col in range(n)] for j in range(k)]
    s_dv_rows += [[a if col == j else 0 for col in range(n)] for j, a in enumerate(avec)]
    S_dv = RationalMatrix.of(s_dv_rows, ncols=n)

    theta_perp = _dual_torus_closed_form(theta, Z, R, cvec, avec)

    R_invT = inverse(R).T
    g = MoritaElement(
        canonical_pairing([-a for a in avec], n) @ R_invT,
        RationalMatrix.diag(bvec * 2 + (-1,) * (n - 2 * k)) @ R,
        RationalMatrix.diag(tuple(cvec) * 2 + (-1,) * (n - 2 * k)) @ R_invT,
        canonical_pairing([-d for d in dvec], n) @ R,
    )

    K = Fraction(math.prod(cvec) * math.prod(t), m**p)
    if K.denominator != 1 or K <= 0:
        raise ConstructionError(f"Logical dimension {K} is not a positive integer")
    logger.debug(f"Assembled code: c={list(cvec)} d={list(dvec)} t={list(t)} m={m} K={K}")
    return GeneralLcaCode(
        theta=theta,
        Z=Z,
        m=m,
        Q=Q,
        R=R,
        t=tuple(t),
        h=tuple(h),
        cvec=tuple(cvec),
        dvec=tuple(dvec),
        avec=avec,
        bvec=bvec,
        T_cv=T_cv,
        T_dv=T_dv,
        S_cv=S_cv,
        S_dv=S_dv,
        theta_perp=theta_perp,
        g=g,
        K=int(K),
    )


def _dual_torus_closed_form(
    theta: RationalMatrix,
    Z: RationalMatrix,
    R: RationalMatrix,
    cvec: Sequence[int],
    avec: Sequence[int],
) -> RationalMatrix:
    n = theta.nrows
    k = len(cvec)
    E = RationalMatrix.diag([Fraction(1, c) for c in cvec] * 2 + [-1] * (n - 2 * k))
    correction = canonical_pairing([Fraction(-a, c) for a, c in zip(avec, cvec)], n)
    return E @ R @ inverse(theta - Z) @ R.T @ E + correction


def _validate_pair(theta: RationalMatrix, Z: RationalMatrix) -> None:
    if theta.shape != Z.shape or not theta.is_square() or theta.nrows % 2:
        raise ConstructionError(
            f"Θ {theta.shape} and Z {Z.shape} must be square with the same even size"
        )
    if not theta.is_antisymmetric() or not Z.is_antisymmetric():
        raise ConstructionError("Θ and Z must be anti-symmetric")
    if not theta.is_integer():
        raise ConstructionError("Θ must be an integer matrix")


def build_general(
    theta: RationalMatrix,
    Z: RationalMatrix,
    smith: AltSmithDecomposition | None = None,
) -> GeneralLcaCode:
    """
    Construct the code of the non-commutative torus Θ with qudit part Z.

    `smith` may supply a known alternating Smith transform P of mZ (with
    Pᵀ·mZ·P in canonical form), which pins the qudit encoder T_dv to the
    first rows of P⁻¹.
    """
    _validate_pair(theta, Z)
    m = lcm_of_denominators(Z)
    if smith is None:
        smith = alt_smith(Z * m)
    elif smith.transform.T @ (Z * m) @ smith.transform != smith.canonical_form():
        raise ConstructionError("Supplied transform does not bring mZ to canonical form")
    R = inverse(smith.transform)
    gcds = [math.gcd(h, m) for h in smith.invariants]
    cvec = tuple(m // g for g in gcds)
    dvec = tuple(h // g for h, g in zip(smith.invariants, gcds))

    difference = theta - Z
    if det(difference) == 0:
        raise ConstructionError("Θ - Z is singular; the construction requires invertibility")
    outer = alt_smith(difference * m)
    assert outer.k == theta.nrows // 2
    Q = inverse(outer.transform)
    logger.debug(f"m={m}, qudit invariants h={list(smith.invariants)}, t={list(outer.invariants)}")
    return _assemble(theta, Z, m, R, cvec, dvec, smith.invariants, Q, outer.invariants)


def standard_form_multi(
    cvec: Sequence[int], dvec: Sequence[int], thetavec: Sequence[int]
) -> GeneralLcaCode:
    """The tensor product of single-mode (c_j, d_j, θ_j) codes"""
    if not len(cvec) == len(dvec) == len(thetavec) or not cvec:
        raise ConstructionError("cvec, dvec and θvec must be non-empty and equally long")
    cs, ds, thetas = [], [], []
    for c, d, theta in zip(cvec, dvec, thetavec):
        if c < 1 or math.gcd(c, d) != 1:
            raise ConstructionError(f"Need c ≥ 1 and gcd(c, d) = 1, got c={c} d={d}")
        d, theta, _ = _flip_if_negative(c, d, theta)
        cs.append(c)
        ds.append(d)
        thetas.append(theta)
    p = len(cs)
    m = math.lcm(*cs)
    theta = canonical_pairing(thetas, 2 * p)
    Z = canonical_pairing([Fraction(-d, c) for c, d in zip(cs, ds)], 2 * p)
    R = RationalMatrix.diag([-1] * p + [1] * p)
    # Q = -J makes the encoder √(θ + d/c)·I
    Q = -cv_form(p)
    h = [m * d // c for c, d in zip(cs, ds)]
    t = [m * theta + hj for theta, hj in zip(thetas, h)]
    return _assemble(theta, Z, m, R, cs, ds, h, Q, t)


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    subject: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [check for check in self.checks if not check.passed]

    def __getitem__(self, name: str) -> Check:
        return next(check for check in self.checks if check.name == name)

    def record(self, name: str, test, detail: str = "") -> None:
        """Run a check; library errors count as failure rather than propagating"""
        try:
            passed = bool(test())
        except LcaError as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        self.checks.append(Check(name, passed, "" if passed else detail))
        logger.debug(f"{'PASS' if passed else 'FAIL'} {name}")

    def to_json(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "checks": [check._asdict() for check in self.checks],
        }


def _full_pair(
    X_cv: Encoder, X_dv: RationalMatrix, Y_cv: Encoder, Y_dv: RationalMatrix, code: GeneralLcaCode
) -> RationalMatrix:
    return pair(X_cv, Y_cv, cv_form(code.p)) + X_dv.T @ dv_form(code.cvec) @ Y_dv


def verify(code: GeneralLcaCode) -> VerificationReport:
    report = VerificationReport(str(code))
    report.record(
        "encoder",
        lambda: _full_pair(code.T_cv, code.T_dv, code.T_cv, code.T_dv, code) == code.theta,
        "Tᵀ J T ≠ Θ",
    )
    report.record(
        "dual_torus",
        lambda: -_full_pair(code.S_cv, code.S_dv, code.S_cv, code.S_dv, code) == code.theta_perp,
        "Sᵀ J S ≠ -Θ⊥",
    )
    report.record(
        "dual_torus_closed_form",
        lambda: dual_torus(code) == code.theta_perp,
        "closed form of Θ⊥ disagrees with the stored value",
    )
    report.record(
        "morita_action", lambda: mobius(code.g, code.theta) == code.theta_perp, "g·Θ ≠ Θ⊥"
    )
    report.record("so_nn", lambda: is_so_nn(code.g), "g is not in SO(2p, 2p | Z)")
    report.record(
        "commutation",
        lambda: _full_pair(code.T_cv, code.T_dv, code.S_cv, code.S_dv, code).is_integer(),
        "Tᵀ J S is not an integer matrix",
    )
    report.record(
        "dimension",
        lambda: abs(pfaffian(code.theta - code.Z)) * math.prod(code.cvec)
        == Fraction(math.prod(code.cvec) * math.prod(code.t), code.m**code.p)
        == code.K,
        "|Pf(Θ - Z)|·∏c, ∏(c·t)/mᵖ and K disagree",
    )
    return report


def verify_simple(code: SimpleLcaCode) -> VerificationReport:
    report = VerificationReport(str(code))
    G = stored_form(code)
    S = code.lattice_basis
    L = code.logical_basis
    report.record("bezout", lambda: code.b * code.c - code.a * code.d == 1, "b·c - a·d ≠ 1")
    report.record(
        "dimension", lambda: code.K == code.c * code.theta + code.d > 0, "K ≠ cθ + d"
    )
    report.record(
        "logical_coprime",
        lambda: math.gcd(code.a * code.theta + code.b, code.K) == 1,
        "gcd(aθ + b, K) ≠ 1",
    )
    report.record(
        "stabilizers_commute",
        lambda: (S.T @ G @ S).is_integer(),
        "stabilizer generators do not commute",
    )
    report.record(
        "logicals_commute_with_stabilizers",
        lambda: (S.T @ G @ L).is_integer(),
        "a logical generator does not commute with the stabilizers",
    )
    report.record(
        "logical_commutator_order",
        lambda: (L.T @ G @ L)[0, 1] == Fraction(-(code.a * code.theta + code.b), code.K)
        and (L.T @ G @ L)[0, 1].denominator == code.K,
        "X̄-Z̄ commutation phase is not a primitive K-th root of unity",
    )
    return report


def logical_dimension(code: SimpleLcaCode | GeneralLcaCode) -> int:
    if isinstance(code, SimpleLcaCode):
        general = logical_dimension(code.to_general())
        if general != code.K:
            raise ConstructionError(f"Standard form gives K={general}, expected {code.K}")
        return code.K
    pfaffian_form = abs(pfaffian(code.theta - code.Z)) * math.prod(code.cvec)
    smith_form = Fraction(math.prod(code.cvec) * math.prod(code.t), code.m**code.p)
    if not pfaffian_form == smith_form == code.K:
        raise ConstructionError(
            f"Inconsistent logical dimension: {pfaffian_form} vs {smith_form} vs {code.K}"
        )
    if code.p == 1:
        # One mode: K = |cθ + d| with Z = -d/c on the pair
        c = math.prod(code.cvec)
        single_mode = abs(c * code.theta[0, 1] - c * code.Z[0, 1])
        if single_mode != code.K:
            raise ConstructionError(f"Single-mode K = |cθ + d| = {single_mode}, expected {code.K}")
    return code.K


def dual_torus(code: SimpleLcaCode | GeneralLcaCode) -> RationalMatrix:
    """Θ⊥ from its closed form"""
    if isinstance(code, SimpleLcaCode):
        value = Fraction(code.a * code.theta + code.b, code.K)
        return RationalMatrix.of([[0, value], [-value, 0]])
    return _dual_torus_closed_form(code.theta, code.Z, code.R, code.cvec, code.avec)


def distance_simple(code: SimpleLcaCode) -> Fraction:
    """d_LCA² / 2π = c/K"""
    return Fraction(code.c, code.K)


def physical_distance(code: SimpleLcaCode) -> pint.Quantity:
    """The shortest undetectable pure displacement, √(2πc/K)"""
    return unit_registry.Quantity(
        math.sqrt(2 * math.pi * distance_simple(code)), "quadrature"
    )


def displacement_unit(code: SimpleLcaCode) -> pint.Quantity:
    """Physical length of one u′ unit, √(2π/(Kc))"""
    return unit_registry.Quantity(math.sqrt(2 * math.pi * code.unit_sq), "quadrature")


class PrepSymplectic(NamedTuple):
    S_cv: ScaledMatrix | RationalMatrix
    L: RationalMatrix


def prep_symplectic(
    source: GeneralLcaCode,
    target: GeneralLcaCode,
    relation: RationalMatrix | None = None,
    qudit_map: RationalMatrix | None = None,
) -> PrepSymplectic:
    """
    The block-diagonal symplectic (S_cv ⊕ L) taking one encoding to another.

    Requires a unimodular relation R with Rᵀ(Θ - Z)_target R = (Θ - Z)_source;
    S_cv = T_cv(target)·R·T_cv(source)⁻¹ then maps the source lattice
    generator l to the target generator R·l.
    """
    n = 2 * source.p
    R = relation if relation is not None else RationalMatrix.identity(n)
    if target.p != source.p or target.cvec != source.cvec:
        raise ConstructionError("Codes have different numbers of modes or qudit dimensions")
    if not R.is_integer() or abs(det(R)) != 1:
        raise ConstructionError("Relation must be a unimodular integer matrix")
    if R.T @ (target.theta - target.Z) @ R != source.theta - source.Z:
        raise ConstructionError("Codes are not related by the given transformation")

    S_cv = ScaledMatrix(
        target.T_cv.radicands,
        target.T_cv.base @ R @ inverse(source.T_cv.base),
        tuple(1 / r for r in source.T_cv.radicands),
    )
    if not is_symplectic(S_cv, source.p):
        raise ConstructionError("Oscillator part of the map is not symplectic")

    L = qudit_map if qudit_map is not None else RationalMatrix.identity(2 * source.k)
    if source.k:
        if not is_mod_symplectic(L, source.cvec):
            raise ConstructionError("Qudit map is not symplectic modulo c")
        mismatch = L @ source.T_dv - target.T_dv @ R
        for i, row in enumerate(mismatch.rows()):
            c = source.cvec[i % source.k]
            if any(x % c for x in row):
                raise ConstructionError("Qudit map does not carry the source lattice to the target")
    return PrepSymplectic(S_cv.simplified(), L)


def with_encoder(code: GeneralLcaCode, T_cv: Encoder) -> GeneralLcaCode:
    """
    A copy of the code with another oscillator encoder of the same torus.

    The logical encoder follows through T_cv·T_cv(old)⁻¹, and both are
    re-expressed with one radicand per mode so the stored coordinates keep
    a single weight for position and momentum.
    """
    T_new = as_scaled(T_cv)
    J = cv_form(code.p)
    if T_new.shape != code.T_cv.shape:
        raise ConstructionError(f"Encoder must be {code.T_cv.shape}, got {T_new.shape}")
    if pair(T_new, T_new, J) != pair(code.T_cv, code.T_cv, J):
        raise ConstructionError("New encoder does not reproduce the torus")
    S_new = T_new @ code.T_cv.inverse() @ code.S_cv
    T_new = T_new.rebased(T_new.radicands[: code.p] * 2)
    return dataclasses.replace(
        code, T_cv=T_new, S_cv=S_new.rebased(T_new.radicands)
    )

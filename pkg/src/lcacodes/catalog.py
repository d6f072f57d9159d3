"""
Worked constructions.

- The E8 Gaussian circuit, an integer symplectic matrix that is also a
  qubit Clifford circuit once taken modulo 2.
- Hybrid codes with qubits from the generator matrix of a binary code.
- Hybrid codes read off an arbitrary Pauli commutation matrix.
- Named GKP lattices, which have no qudit part.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Literal, Sequence

from .codes import GeneralLcaCode, build_general, with_encoder
from .errors import InputError
from .exactmath import (
    AltSmithDecomposition,
    RationalMatrix,
    alt_smith,
    as_fraction,
    canonical_pairing,
    complete_unimodular,
    inverse,
    lcm_of_denominators,
)
from .symplectic import ScaledMatrix, cv_form, direct_sum, symplectic_pauli_action

logger = logging.getLogger(__name__)

_E8_ROWS = (
    (2, 1, 0, 1, 1, 0, 0, 0),
    (1, 2, 1, 0, 0, 1, 0, 0),
    (0, 1, 2, -1, 0, 0, 1, 0),
    (1, 0, -1, 2, 0, 0, 0, 1),
    (1, 0, 0, 0, 2, -1, 0, -1),
    (0, 1, 0, 0, -1, 2, -1, 0),
    (0, 0, 1, 0, 0, -1, 2, 1),
    (0, 0, 0, 1, -1, 0, 1, 2),
)

# Coordinates (x₁…x₄, z₁…z₄), the ordering cv_form uses
E8_ORDERING = "block"


def e8_matrix() -> RationalMatrix:
    return RationalMatrix.of(_E8_ROWS)


def interleaved(M: RationalMatrix) -> RationalMatrix:
    """M re-read with coordinates (x₁, z₁, x₂, z₂, …) instead of block order"""
    p = M.nrows // 2
    order = [i // 2 + (p if i % 2 else 0) for i in range(2 * p)]
    return RationalMatrix.of([[M[i, j] for j in order] for i in order])


def e8_pauli_image(
    j: int, kind: Literal["X", "Z"]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """
    The qubit Pauli that the E8 circuit maps X_j or Z_j onto.

    Qubits are numbered from 1. Returns the X and Z exponent vectors.
    """
    if kind not in ("X", "Z") or not 1 <= j <= 4:
        raise InputError(f"No Pauli generator {kind}{j} on four qubits")
    index = j - 1 + (4 if kind == "Z" else 0)
    image = symplectic_pauli_action(e8_matrix(), (2,) * 4, index)
    return image[:4], image[4:]


def _unimodular_diagonal(values: Sequence[int] | None, size: int, name: str) -> tuple[int, ...]:
    if values is None:
        return (1,) * size
    values = tuple(int(x) for x in values)
    if len(values) != size or any(x not in (1, -1) for x in values):
        raise InputError(f"{name} must be {size} entries of ±1, got {values}")
    return values


def binary_code_lca(
    G: RationalMatrix,
    L1: Sequence[int] | None = None,
    L2: Sequence[int] | None = None,
) -> GeneralLcaCode:
    """
    A code with one qubit per row pair of the binary generator matrix G.

    G is 2k×2p; rows j and k + j become the X and Z rows of qubit j, and
    the qudit encoder of the result is G itself. L1 and L2 are the diagonal
    unimodular blocks of the torus on the qubit and pure-oscillator pairs.
    """
    if not G.is_integer() or any(x not in (0, 1) for x in G.entries):
        raise InputError("G must be a 0/1 matrix")
    rows, n = G.shape
    if not rows or rows % 2 or n % 2 or rows > n:
        raise InputError(f"G must be 2k×2p with 1 ≤ k ≤ p, got {rows}×{n}")
    k, p = rows // 2, n // 2
    L1 = _unimodular_diagonal(L1, k, "L1")
    L2 = _unimodular_diagonal(L2, p - k, "L2")

    R = complete_unimodular(G.to_ints())
    Z = R.T @ canonical_pairing([Fraction(1, 2)] * k, n) @ R
    theta = (
        R.T
        @ direct_sum(canonical_pairing(L1, 2 * k), canonical_pairing(L2, 2 * (p - k)))
        @ R
    )
    smith = AltSmithDecomposition(inverse(R), (1,) * k)
    code = build_general(theta, Z, smith)
    logger.info(f"Binary code with {k} qubit(s) on {p} mode(s): {code}")
    return code


def commutation_matrix_code(
    A: RationalMatrix, thetavec: Sequence[int] | None = None
) -> GeneralLcaCode:
    """
    The code whose Pauli commutation matrix has the alternating Smith class of A.

    Each invariant h/m of mA is split as θ + d/c. θ defaults to the integer
    part; pairs beyond the rank of A have h = 0 and need a nonzero θ.
    """
    if not A.is_square() or A.nrows % 2 or not A.is_antisymmetric():
        raise InputError(f"A must be an even-sized anti-symmetric matrix, got {A.shape}")
    n = A.nrows
    p = n // 2
    m = lcm_of_denominators(A)
    smith = alt_smith(A * m)
    k = smith.k
    ratios = [Fraction(h, m) for h in smith.invariants] + [Fraction(0)] * (p - k)
    if thetavec is None:
        thetavec = [math.floor(v) for v in ratios]
    thetavec = [int(t) for t in thetavec]
    if len(thetavec) != p:
        raise InputError(f"Need {p} values of θ, got {len(thetavec)}")

    # Spread the Smith pairs (j, k + j) over the mode pairs (j, p + j)
    order = [*range(k), *range(2 * k, k + p), *range(k, 2 * k), *range(k + p, n)]
    R = inverse(smith.transform.select_columns(order))
    # h/m = θ + d/c with Z = -d/c on each pair, so that Θ - Z is congruent to A.
    # Pairs past the rank have nothing to split and keep Z = -Θ
    z_values = [t - v if j < k else v - t for j, (v, t) in enumerate(zip(ratios, thetavec))]
    logger.debug(
        f"m={m}, h/m={[str(v) for v in ratios]} split as θ={thetavec} + d/c={[str(-z) for z in z_values[:k]]}"
    )
    theta = R.T @ canonical_pairing(thetavec, n) @ R
    Z = R.T @ canonical_pairing(z_values, n) @ R
    return build_general(theta, Z)


def scaled_gkp(scale: int, p: int = 1) -> GeneralLcaCode:
    """The oscillator-only code of Θ = λ·J, encoding λᵖ states"""
    if scale < 1 or p < 1:
        raise InputError(f"Need λ ≥ 1 and p ≥ 1, got λ={scale} p={p}")
    return build_general(cv_form(p) * scale, RationalMatrix.zeros(2 * p))


def square_gkp(p: int = 1) -> GeneralLcaCode:
    """The square-lattice GKP qubit on each mode, encoder √2·I"""
    return with_encoder(scaled_gkp(2, p), ScaledMatrix.uniform(2, RationalMatrix.identity(2 * p)))


def rectangular_gkp(ratio: Fraction | int | str, p: int = 1) -> GeneralLcaCode:
    """
    The rectangular GKP qubit: position spacing √(2r), momentum spacing √(2/r).
    """
    r = as_fraction(ratio)
    if r <= 0:
        raise InputError(f"Aspect ratio must be positive, got {r}")
    encoder = ScaledMatrix((2 * r,) * p + (2 / r,) * p, RationalMatrix.identity(2 * p))
    return with_encoder(scaled_gkp(2, p), encoder)

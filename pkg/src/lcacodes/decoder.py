"""
Syndrome decoding of simple (c, d) codes.

Everything here works in u′ units, where the code distance is c and the
qudit-error spacing 2δ is 1. Two strategies are registered:

- ``pure`` treats the syndrome as a small displacement, correcting any
  shift shorter than half the distance.
- ``qudit`` splits each syndrome axis into c regions, reading the region
  as a qudit Pauli power and the offset within it as a small shift.

Strategies act on whole arrays of syndromes. Monte Carlo runs draw and
decode fixed-size batches in numpy and classify only the distinct failing
residuals exactly.
"""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .codes import SimpleLcaCode
from .errors import DecodingError, InputError
from .heisenberg import HybridDisplacement, compose, displacement, logical_class, phase_inner
from .util import batched

logger = logging.getLogger(__name__)

# Residual CV coordinates further than this from the lattice are a decoder bug
SNAP_TOLERANCE = 1e-9

# Half the spacing between qudit-error centres
DELTA = 0.5

# Monte Carlo trials drawn from each generator, whatever the thread count
TRIALS_PER_BATCH = 8192


class ErrorSample(NamedTuple):
    eps1: float
    eps2: float
    n: int = 0
    w: int = 0


class ErrorBatch(NamedTuple):
    """Columns of sampled errors, one entry per trial"""

    eps1: np.ndarray
    eps2: np.ndarray
    n: np.ndarray
    w: np.ndarray

    def sample(self, i: int) -> ErrorSample:
        return ErrorSample(float(self.eps1[i]), float(self.eps2[i]), int(self.n[i]), int(self.w[i]))


class Syndrome(NamedTuple):
    xi1: float
    xi2: float


class Corrections(NamedTuple):
    """Correction powers per trial; CV parts in u′ units"""

    m_cv: np.ndarray
    s_cv: np.ndarray
    m_dv: np.ndarray
    s_dv: np.ndarray


class DecodeOutcome(NamedTuple):
    syndrome: Syndrome
    correction: HybridDisplacement
    residual: HybridDisplacement
    residual_class: tuple[int, ...]
    success: bool


Strategy = Callable[[SimpleLcaCode, np.ndarray, np.ndarray], Corrections]

STRATEGIES: dict[str, Strategy] = {}


def strategy(*names: str):
    """Register a decoding strategy"""

    def _wrapped(fn: Strategy) -> Strategy:
        for name in names:
            STRATEGIES[name] = fn
        return fn

    return _wrapped


def get_strategy(name: str) -> Strategy:
    if name not in STRATEGIES:
        raise InputError(f"Unknown decoding strategy '{name}' (known: {', '.join(STRATEGIES)})")
    return STRATEGIES[name]


def _require_simple(code) -> None:
    if not isinstance(code, SimpleLcaCode):
        raise DecodingError("Decoding is only defined for simple (c, d) codes")


def error_displacement(code: SimpleLcaCode, e: ErrorSample) -> HybridDisplacement:
    return displacement(code, (e.eps1,), (e.eps2,), (e.n,), (e.w,))


def syndrome(code: SimpleLcaCode, e: ErrorSample) -> Syndrome:
    """
    Measured stabilizer phases, scaled to [0, c).

    ξ1 = (ε1 + n) mod c and ξ2 = (ε2 - d·w) mod c; Z^a reads as ξ2 = 1.
    """
    _require_simple(code)
    error = error_displacement(code, e)
    s_x, s_z = (
        displacement(code, *column)
        for column in (((code.K,), (0,), (-code.d,), (0,)), ((0,), (code.K,), (0,), (1,)))
    )
    xi1 = ((-phase_inner(s_z, error, code)) % 1) * code.c
    xi2 = (phase_inner(s_x, error, code) % 1) * code.c
    return Syndrome(float(xi1) % code.c, float(xi2) % code.c)


def _fold(xi: np.ndarray, c: int) -> np.ndarray:
    xi = np.mod(xi, c)
    # Rounding can land a tiny negative value on c itself
    return np.where(xi >= c, 0.0, xi)


def syndromes(code: SimpleLcaCode, errors: ErrorBatch) -> tuple[np.ndarray, np.ndarray]:
    """`syndrome` over a whole batch, in floating point"""
    _require_simple(code)
    xi1 = _fold(errors.eps1 + errors.n, code.c)
    xi2 = _fold(errors.eps2 - code.d * errors.w, code.c)
    return xi1, xi2


def _check_range(xi: np.ndarray, c: int) -> None:
    outside = (xi < 0) | (xi >= c)
    if np.any(outside):
        raise DecodingError(f"Syndrome {xi[outside][0]} outside [0, {c})")


def _regions(xi: np.ndarray, c: int) -> np.ndarray:
    lower = np.floor(xi).astype(np.int64)
    offset = xi - lower
    below = lower % c + 1
    above = (lower + 1) % c + 1
    return np.where(
        offset < DELTA, below, np.where(offset > DELTA, above, np.minimum(below, above))
    )


def region_of(code: SimpleLcaCode, xi: float) -> int:
    """
    The region r ∈ 1..c whose centre r - 1 (or c, for region 1) is nearest.

    A syndrome exactly between two centres goes to the smaller label.
    """
    values = np.array([xi], dtype=float)
    _check_range(values, code.c)
    return int(_regions(values, code.c)[0])


def _wrap(value: np.ndarray, period: float) -> np.ndarray:
    """Representative of value in (-period/2, period/2]"""
    value = np.mod(value, period)
    return np.where(value <= period / 2, value, value - period)


def _centres(xi: np.ndarray, regions: np.ndarray, c: int) -> np.ndarray:
    # Region 1 straddles the wrap, centred on 0 or on c
    return np.where((regions == 1) & (xi > DELTA), c, regions - 1)


@strategy("pure")
def pure_corrections(code: SimpleLcaCode, xi1: np.ndarray, xi2: np.ndarray) -> Corrections:
    """Undo the shortest displacement consistent with the syndrome"""
    zero = np.zeros(len(xi1), dtype=np.int64)
    return Corrections(-_wrap(xi1, code.c), -_wrap(xi2, code.c), zero, zero)


@strategy("qudit")
def qudit_corrections(code: SimpleLcaCode, xi1: np.ndarray, xi2: np.ndarray) -> Corrections:
    """Read each axis as a qudit Pauli power plus a shift no longer than δ"""
    for xi in (xi1, xi2):
        _check_range(xi, code.c)
    r1 = _regions(xi1, code.c)
    r2 = _regions(xi2, code.c)
    shift1 = xi1 - _centres(xi1, r1, code.c)
    shift2 = xi2 - _centres(xi2, r2, code.c)
    return Corrections(-shift1, -shift2, -(r1 - 1), -code.a * (r2 - 1))


def _correction(code: SimpleLcaCode, decoder: Strategy, s: Syndrome) -> HybridDisplacement:
    _require_simple(code)
    c = decoder(code, np.array([s.xi1]), np.array([s.xi2]))
    return displacement(
        code,
        (float(c.m_cv[0]),),
        (float(c.s_cv[0]),),
        (int(c.m_dv[0]),),
        (int(c.s_dv[0]),),
    )


def decode_pure(code: SimpleLcaCode, s: Syndrome) -> HybridDisplacement:
    return _correction(code, pure_corrections, s)


def decode_qudit(code: SimpleLcaCode, s: Syndrome) -> HybridDisplacement:
    return _correction(code, qudit_corrections, s)


def _snap(value: float) -> Fraction:
    nearest = round(value)
    if abs(value - nearest) > SNAP_TOLERANCE:
        raise DecodingError(f"Residual coordinate {value} is not on the code lattice")
    return Fraction(nearest)


def adjudicate(
    code: SimpleLcaCode, e: ErrorSample, correction: HybridDisplacement
) -> DecodeOutcome:
    """Apply the correction and classify what is left"""
    _require_simple(code)
    residual = compose(correction, error_displacement(code, e), code)
    exact = HybridDisplacement(
        tuple(_snap(x) for x in residual.m_cv),
        tuple(_snap(x) for x in residual.s_cv),
        residual.m_dv,
        residual.s_dv,
    )
    if not any(exact.vector):
        residual_class = (0, 0)
    else:
        residual_class = logical_class(code, exact)
    return DecodeOutcome(
        syndrome(code, e),
        correction,
        exact,
        residual_class,
        not any(residual_class),
    )


def decode(code: SimpleLcaCode, strategy_name: str, e: ErrorSample) -> DecodeOutcome:
    decoder = get_strategy(strategy_name)
    return adjudicate(code, e, _correction(code, decoder, syndrome(code, e)))


class SweepRow(NamedTuple):
    eps1: float
    eps2: float
    n: int
    w: int
    success: bool
    residual_class: tuple[int, ...]


def default_radius(code: SimpleLcaCode, strategy_name: str) -> float:
    """Just inside the guaranteed-correctable box of each strategy"""
    if strategy_name == "pure":
        return 0.99 * code.c / 2
    return 0.99 * 0.5


def grid_values(radius: float, grid_points: int) -> list[float]:
    """Cell centres of an even grid over (-radius, radius)"""
    step = 2 * radius / grid_points
    return [-radius + (i + 0.5) * step for i in range(grid_points)]


def run_grid_sweep(
    code: SimpleLcaCode,
    strategy_name: str,
    grid_points: int,
    radius: float | None = None,
    qudit_errors: Sequence[tuple[int, int]] | None = None,
) -> list[SweepRow]:
    _require_simple(code)
    if grid_points < 1:
        raise InputError("Need at least one grid point")
    if radius is None:
        radius = default_radius(code, strategy_name)
    if qudit_errors is None:
        if strategy_name == "pure":
            qudit_errors = [(0, 0)]
        else:
            qudit_errors = [(n, w) for n in range(code.c) for w in range(code.c)]
    values = grid_values(radius, grid_points)
    logger.info(
        f"Sweeping {len(values)}² shifts × {len(qudit_errors)} qudit errors, radius {radius:.4g}"
    )
    rows = []
    for n, w in qudit_errors:
        for eps1 in values:
            for eps2 in values:
                outcome = decode(code, strategy_name, ErrorSample(eps1, eps2, n, w))
                rows.append(SweepRow(eps1, eps2, n, w, outcome.success, outcome.residual_class))
    return rows


class MonteCarloResult(NamedTuple):
    strategy: str
    c: int
    d: int
    theta: int
    sigma: float
    p_x: float
    p_z: float
    trials: int
    failures: int
    histogram: dict[tuple[int, ...], int]

    @property
    def rate(self) -> float:
        return self.failures / self.trials if self.trials else 0.0

    @property
    def standard_error(self) -> float:
        if not self.trials:
            return 0.0
        return float(np.sqrt(self.rate * (1 - self.rate) / self.trials))


def sample_errors(
    code: SimpleLcaCode,
    sigma: float,
    p_x: float,
    p_z: float,
    seed: int,
    batch_index: int,
    size: int,
) -> ErrorBatch:
    """Batch `batch_index` of the noise channel, drawn from its own generator"""
    rng = np.random.default_rng((seed, batch_index))
    eps1, eps2 = rng.normal(0.0, sigma, size=(2, size))
    if code.c > 1:
        n = np.where(rng.random(size) < p_x, rng.integers(1, code.c, size), 0)
        w = np.where(rng.random(size) < p_z, rng.integers(1, code.c, size), 0)
    else:
        n = w = np.zeros(size, dtype=np.int64)
    return ErrorBatch(eps1, eps2, n, w)


def _lattice_points(values: np.ndarray) -> np.ndarray:
    nearest = np.rint(values)
    if np.any(np.abs(values - nearest) > SNAP_TOLERANCE):
        raise DecodingError("Residual coordinates are not on the code lattice")
    return nearest.astype(np.int64)


def count_failures(code: SimpleLcaCode, strategy_name: str, errors: ErrorBatch) -> Counter:
    """Decode a whole batch, counting the residual logical class of every failure"""
    _require_simple(code)
    corrections = get_strategy(strategy_name)(code, *syndromes(code, errors))
    residuals = np.column_stack(
        (
            _lattice_points(errors.eps1 + corrections.m_cv),
            _lattice_points(errors.eps2 + corrections.s_cv),
            np.mod(errors.n + corrections.m_dv, code.c),
            np.mod(errors.w + corrections.s_dv, code.c),
        )
    )
    residuals = residuals[np.any(residuals != 0, axis=1)]
    failures: Counter = Counter()
    if not len(residuals):
        return failures
    # Only the distinct nonzero residuals need the exact classification
    rows, counts = np.unique(residuals, axis=0, return_counts=True)
    for (m, s, m_dv, s_dv), count in zip(rows.tolist(), counts.tolist()):
        residual = HybridDisplacement((Fraction(m),), (Fraction(s),), (m_dv,), (s_dv,))
        residual_class = logical_class(code, residual)
        if any(residual_class):
            failures[residual_class] += count
    return failures


def _run_batch(
    code: SimpleLcaCode,
    strategy_name: str,
    sigma: float,
    p_x: float,
    p_z: float,
    seed: int,
    batch_index: int,
    size: int,
) -> Counter:
    errors = sample_errors(code, sigma, p_x, p_z, seed, batch_index, size)
    return count_failures(code, strategy_name, errors)


def run_monte_carlo(
    code: SimpleLcaCode,
    strategy_name: str,
    sigma: float,
    p_x: float,
    p_z: float,
    trials: int,
    seed: int,
    threads: int = 1,
) -> MonteCarloResult:
    _require_simple(code)
    get_strategy(strategy_name)
    if sigma < 0:
        raise InputError(f"σ must be non-negative, got {sigma}")
    for name, value in (("p_x", p_x), ("p_z", p_z)):
        if not 0 <= value <= 1:
            raise InputError(f"{name} must be a probability, got {value}")
    if trials < 0 or threads < 1:
        raise InputError("Need trials ≥ 0 and threads ≥ 1")

    logger.info(
        f"Running {trials} trials of '{strategy_name}' decoding on {code} with {threads} thread(s)"
    )
    histogram: Counter = Counter()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        jobs = [
            pool.submit(
                _run_batch, code, strategy_name, sigma, p_x, p_z, seed, index, len(batch)
            )
            for index, batch in enumerate(batched(range(trials), TRIALS_PER_BATCH))
        ]
        for job in jobs:
            histogram.update(job.result())
    failures = sum(histogram.values())
    logger.debug(f"Residual logical classes of failures: {dict(histogram)}")
    return MonteCarloResult(
        strategy_name,
        code.c,
        code.d,
        code.theta,
        sigma,
        p_x,
        p_z,
        trials,
        failures,
        dict(sorted(histogram.items())),
    )

from __future__ import annotations

import argparse
import logging
from enum import Enum, auto
from typing import NamedTuple

import pint

from .codes import SimpleLcaCode, displacement_unit
from .errors import InputError
from .util import to_code_units

logger = logging.getLogger(__name__)


class Strategy(Enum):
    PURE = auto()
    QUDIT = auto()

    @classmethod
    def _missing_(cls, value):
        if not isinstance(value, str):
            return None
        for kind in cls:
            if kind.name.lower() == value.lower():
                return kind
        # Allow prefix-only of the name, as long as unambiguous
        partial = [kind for kind in cls if kind.name.lower().startswith(value.lower())]
        if len(partial) == 1:
            return partial[0]
        return None

    def __str__(self):
        return self.name.lower()


class SweepOptions(NamedTuple):
    strategy: Strategy = Strategy.QUDIT
    grid_points: int = 21
    # Half-width of the shift box, in u′. None means per-strategy default
    radius: float | None = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> SweepOptions:
        if args.grid < 1:
            raise InputError(f"Grid must have at least one point, got {args.grid}")
        return cls(strategy=args.strategy, grid_points=args.grid, radius=args.radius)


class MonteCarloOptions(NamedTuple):
    strategy: Strategy = Strategy.QUDIT
    # Noise standard deviation in u′
    sigma: float = 0.0
    p_x: float = 0.0
    p_z: float = 0.0
    trials: int = 1000
    seed: int = 0
    threads: int = 1

    @classmethod
    def from_args(
        cls, args: argparse.Namespace, code: SimpleLcaCode
    ) -> MonteCarloOptions:
        sigma = args.sigma
        if isinstance(sigma, pint.Quantity):
            unit = displacement_unit(code).to("quadrature").magnitude
            sigma = to_code_units(sigma, units_per_quadrature=1 / unit)
            logger.debug(f"σ = {args.sigma} is {sigma:.6g} u′ for {code}")
        if sigma < 0:
            raise InputError(f"σ must be non-negative, got {sigma}")
        return cls(
            strategy=args.strategy,
            sigma=float(sigma),
            p_x=args.p_x,
            p_z=args.p_z,
            trials=args.trials,
            seed=args.seed,
            threads=args.threads,
        )

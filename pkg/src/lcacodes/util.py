from __future__ import annotations

import logging
import textwrap
from itertools import islice

import pint
from rich.console import Console
from rich.logging import RichHandler

from .errors import InputError

unit_registry = pint.UnitRegistry()
# One unit of a code's stored displacement coordinates (u′)
unit_registry.define("uprime = [code_displacement]")
# Physical quadrature displacement, in units of √ħ with ħ = 1
unit_registry.define("quadrature = [quadrature]")

# The conversion depends on the code, so is carried as a context parameter
ctx = pint.Context("lca", defaults={"units_per_quadrature": 1.0})
ctx.add_transformation(
    "[quadrature]",
    "[code_displacement]",
    lambda ureg, x, units_per_quadrature: x
    * units_per_quadrature
    * ureg.uprime
    / ureg.quadrature,
)
ctx.add_transformation(
    "[code_displacement]",
    "[quadrature]",
    lambda ureg, x, units_per_quadrature: x
    / units_per_quadrature
    * ureg.quadrature
    / ureg.uprime,
)
unit_registry.add_context(ctx)

pint.set_application_registry(unit_registry)


def to_code_units(value: float | pint.Quantity, units_per_quadrature: float) -> float:
    """
    Express a displacement size in u′ units.

    Plain numbers and dimensionless quantities are already u′.
    """
    if not isinstance(value, pint.Quantity):
        return float(value)
    if value.dimensionless:
        return float(value.magnitude)
    if value.check("[code_displacement]"):
        return float(value.to("uprime").magnitude)
    if value.check("[quadrature]"):
        return float(
            value.to(
                "uprime", "lca", units_per_quadrature=units_per_quadrature
            ).magnitude
        )
    raise InputError(f"Cannot use {value} as a displacement size")


# Taken from Python 3.12 documentation.
def batched(iterable, n):
    # batched('ABCDEFG', 3) → ABC DEF G
    if n < 1:
        raise ValueError("n must be at least one")
    it = iter(iterable)
    while batch := tuple(islice(it, n)):
        yield batch


class IndentingRichHandler(RichHandler):
    _INDENT = ""
    _SINGLE_INDENT = "    "

    def __init__(self, *args, **kwargs):
        # stdout carries JSON and CSV output
        kwargs.setdefault("console", Console(stderr=True))
        super().__init__(*args, **kwargs)

    @classmethod
    def indent(cls):
        cls._INDENT += cls._SINGLE_INDENT

    @classmethod
    def dedent(cls):
        cls._INDENT = cls._INDENT[len(cls._SINGLE_INDENT) :]

    def emit(self, record: logging.LogRecord) -> None:
        if isinstance(record.msg, str):
            record.msg = textwrap.indent(record.msg, self._INDENT)
        return super().emit(record)

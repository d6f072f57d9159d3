#!/usr/bin/env python3

from __future__ import annotations

import argparse
import logging
import sys
from argparse import ArgumentParser
from fractions import Fraction
from typing import Any, Callable, Sequence

import pint
import rich
import rich.table
from rich.console import Console

from . import __version__, catalog, decoder
from .codes import (
    GeneralLcaCode,
    SimpleLcaCode,
    build_general,
    dual_torus,
    distance_simple,
    displacement_unit,
    logical_dimension,
    physical_distance,
    simple_code,
    verify,
    verify_simple,
)
from .errors import InputError, LcaError
from .exactmath import alt_smith, lcm_of_denominators
from .files import (
    code_to_json,
    encoder_to_json,
    matrix_to_json,
    read_code,
    read_matrix,
    write_json,
    write_monte_carlo_csv,
    write_sweep_csv,
)
from .gates import hadamard, lift_sp2_modc, logical_action, synthesize, verify_gate
from .heisenberg import logical_generators, phase_inner
from .options import MonteCarloOptions, Strategy, SweepOptions
from .util import IndentingRichHandler, unit_registry

logger = logging.getLogger(__name__)

# Messages for the user; stdout is reserved for JSON and CSV
console = Console(stderr=True)


class ListStrategiesAction(argparse.Action):
    def __init__(self, option_strings, dest, nargs=None, **kwargs):
        if nargs is not None:
            raise ValueError("nargs not allowed")
        super().__init__(option_strings, dest, nargs=0, **kwargs)

    def __call__(
        self,
        parser: ArgumentParser,
        namespace: argparse.Namespace,
        values: str | Sequence[Any] | None,
        option_string: str | None = None,
    ) -> None:
        table = rich.table.Table("NAME", "DESCRIPTION")
        for name, fn in decoder.STRATEGIES.items():
            table.add_row(name, (fn.__doc__ or "").strip())
        rich.print(table)
        sys.exit(0)


def _require_simple(code: SimpleLcaCode | GeneralLcaCode, command: str) -> SimpleLcaCode:
    if not isinstance(code, SimpleLcaCode):
        raise InputError(f"'{command}' needs a simple (c, d, θ) code")
    return code


def cmd_simple(args: argparse.Namespace) -> None:
    code = simple_code(args.c, args.d, args.theta)
    logger.info(f"Built {code}: a={code.a}, b={code.b}")
    write_json(code_to_json(code.to_general() if args.general else code), args.out)


def cmd_build(args: argparse.Namespace) -> None:
    code = build_general(read_matrix(args.theta), read_matrix(args.z))
    logger.info(f"Built {code} with d={list(code.dvec)}")
    write_json(code_to_json(code), args.out)


def cmd_verify(args: argparse.Namespace) -> None:
    code = read_code(args.code)
    logger.info(f"Verifying {code}")
    IndentingRichHandler.indent()
    try:
        report = verify_simple(code) if isinstance(code, SimpleLcaCode) else verify(code)
    finally:
        IndentingRichHandler.dedent()
    data = report.to_json()
    data["K"] = code.K
    write_json(data, args.out)
    if not report.passed:
        for check in report.failures:
            console.print(f"[red]FAIL[/red] {check.name}: {check.detail}")
        sys.exit(2)
    logger.info(f"All {len(report.checks)} checks passed")


def cmd_logicals(args: argparse.Namespace) -> None:
    code = read_code(args.code)
    generators = logical_generators(code)
    data: dict[str, Any] = {
        "K": logical_dimension(code),
        "logical_basis": matrix_to_json(code.logical_basis),
        "dual_torus": matrix_to_json(dual_torus(code)),
        "generators": [str(x) for x in generators],
    }
    if isinstance(code, SimpleLcaCode):
        data["commutation_phase"] = str(phase_inner(generators[0], generators[1], code))
    write_json(data, args.out)


def cmd_smith(args: argparse.Namespace) -> None:
    A = read_matrix(args.a)
    m = lcm_of_denominators(A)
    smith = alt_smith(A * m)
    ratios = [Fraction(h, m) for h in smith.invariants]
    logger.info(f"m = {m}, h/m = {', '.join(str(r) for r in ratios)}")
    write_json(
        {
            "m": m,
            "invariants": [str(h) for h in smith.invariants],
            "c": [str(r.denominator) for r in ratios],
            "d": [str(r.numerator) for r in ratios],
            "transform": matrix_to_json(smith.transform),
        },
        args.out,
    )


def cmd_distance(args: argparse.Namespace) -> None:
    code = _require_simple(read_code(args.code), "distance")
    distance = physical_distance(code)
    unit = displacement_unit(code)
    logger.info(f"Distance {distance:.6g~P}; one u′ is {unit:.6g~P}")
    write_json(
        {
            "distance_sq_over_2pi": str(distance_simple(code)),
            "distance": distance.magnitude,
            "distance_uprime": code.c,
            "uprime": unit.magnitude,
        },
        args.out,
    )


def _write_gate(code, gate, W, out) -> None:
    report = verify_gate(code, gate)
    data = {"gate": gate.to_json(), "report": report.to_json()}
    if report.passed and W is not None:
        data["logical_action"] = matrix_to_json(logical_action(code, W, gate))
    write_json(data, out)
    if not report.passed:
        sys.exit(2)


def cmd_gate(args: argparse.Namespace) -> None:
    code = read_code(args.code)
    W = read_matrix(args.w)
    gate = synthesize(code, W)
    logger.info(f"V_cv = {encoder_to_json(gate.V_cv)}")
    _write_gate(code, gate, W, args.out)


def cmd_hadamard(args: argparse.Namespace) -> None:
    code = _require_simple(read_code(args.code), "hadamard")
    gate = hadamard(code)
    _write_gate(code, gate, gate.W, args.out)


def cmd_lift(args: argparse.Namespace) -> None:
    W = lift_sp2_modc(read_matrix(args.w), args.c, args.d)
    write_json(matrix_to_json(W), args.out)


def cmd_decode_sweep(args: argparse.Namespace) -> None:
    code = _require_simple(read_code(args.code), "decode-sweep")
    options = SweepOptions.from_args(args)
    rows = decoder.run_grid_sweep(
        code, str(options.strategy), options.grid_points, options.radius
    )
    successes = sum(row.success for row in rows)
    logger.info(f"{successes} of {len(rows)} grid points decoded correctly")
    write_sweep_csv(code, str(options.strategy), rows, args.out)


def cmd_decode_mc(args: argparse.Namespace) -> None:
    code = _require_simple(read_code(args.code), "decode-mc")
    options = MonteCarloOptions.from_args(args, code)
    logger.debug(f"Got Monte Carlo options: {options}")
    logger.info(f"One u′ is {displacement_unit(code):.6g~P}")
    result = decoder.run_monte_carlo(
        code,
        str(options.strategy),
        options.sigma,
        options.p_x,
        options.p_z,
        options.trials,
        options.seed,
        threads=options.threads,
    )
    logger.info(
        f"{result.failures}/{result.trials} failures, rate {result.rate:.4g} ± {result.standard_error:.2g}"
    )
    write_monte_carlo_csv([result], args.out)


def cmd_catalog(args: argparse.Namespace) -> None:
    if args.entry == "e8":
        table = rich.table.Table("PAULI", "IMAGE")
        for kind in ("X", "Z"):
            for j in range(1, 5):
                xs, zs = catalog.e8_pauli_image(j, kind)
                factors = [f"X{i + 1}" for i, x in enumerate(xs) if x]
                factors += [f"Z{i + 1}" for i, z in enumerate(zs) if z]
                table.add_row(f"{kind}{j}", "·".join(factors))
        console.print(table)
        write_json(matrix_to_json(catalog.e8_matrix()), args.out)
        return

    if args.entry == "binary":
        code = catalog.binary_code_lca(read_matrix(args.g), args.l1, args.l2)
    elif args.entry == "commutation":
        code = catalog.commutation_matrix_code(read_matrix(args.a), args.theta_vec)
    elif args.entry == "square":
        code = catalog.square_gkp(args.modes)
    elif args.entry == "rectangular":
        code = catalog.rectangular_gkp(args.ratio, args.modes)
    else:
        code = catalog.scaled_gkp(args.scale, args.modes)
    logger.info(f"Built {code}")
    write_json(code_to_json(code), args.out)


def _quantity(text: str) -> pint.Quantity:
    try:
        return unit_registry.Quantity(text)
    except (pint.PintError, AttributeError, ValueError) as e:
        raise argparse.ArgumentTypeError(f"Cannot read {text!r} as a quantity: {e}") from e


def _add_out(parser: ArgumentParser, what: str = "JSON") -> None:
    parser.add_argument(
        "-o",
        "--out",
        help=f"Where to write the {what}. [Default: standard output]",
        default="-",
    )


def _add_strategy(parser: ArgumentParser) -> None:
    parser.add_argument(
        "--strategy",
        help="Decoding strategy. [Default: %(default)s]",
        choices=Strategy,
        default=Strategy.QUDIT,
        type=Strategy,
    )


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="lcacodes",
        description="Construct, verify and decode hybrid oscillator-qudit lattice codes",
    )
    parser.add_argument("-v", "--verbose", help="Verbose output", action="store_true")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--list-strategies",
        help="List all available decoding strategies.",
        action=ListStrategiesAction,
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def command(
        name: str, fn: Callable[[argparse.Namespace], None], summary: str
    ) -> ArgumentParser:
        sub = commands.add_parser(name, help=summary, description=summary)
        sub.set_defaults(func=fn)
        return sub

    sub = command("simple", cmd_simple, "Build the single-mode (c, d, θ) code.")
    sub.add_argument("--c", type=int, required=True, help="Qudit dimension")
    sub.add_argument("--d", type=int, required=True, help="Shift, coprime to c")
    sub.add_argument("--theta", type=int, required=True, help="Integer torus entry θ")
    sub.add_argument(
        "--general",
        action="store_true",
        help="Write the multi-mode standard form instead of the compact form.",
    )
    _add_out(sub)

    sub = command("build", cmd_build, "Build the code of an integer torus Θ and qudit matrix Z.")
    sub.add_argument("--theta", required=True, metavar="FILE", help="Matrix file holding Θ")
    sub.add_argument("--z", required=True, metavar="FILE", help="Matrix file holding Z")
    _add_out(sub)

    sub = command("verify", cmd_verify, "Check every algebraic identity of a code file.")
    sub.add_argument("code", metavar="CODE")
    _add_out(sub, "report")

    sub = command("logicals", cmd_logicals, "Show the logical operators and dual torus.")
    sub.add_argument("code", metavar="CODE")
    _add_out(sub)

    sub = command("smith", cmd_smith, "Alternating Smith form of a commutation matrix.")
    sub.add_argument("--a", required=True, metavar="FILE", help="Matrix file holding A")
    _add_out(sub)

    sub = command("distance", cmd_distance, "Pure-displacement distance of a simple code.")
    sub.add_argument("code", metavar="CODE")
    _add_out(sub)

    sub = command("gate", cmd_gate, "Synthesize the Gaussian-Clifford of a lattice automorphism.")
    sub.add_argument("code", metavar="CODE")
    sub.add_argument("--w", required=True, metavar="FILE", help="Matrix file holding W")
    _add_out(sub)

    sub = command("hadamard", cmd_hadamard, "The logical Hadamard of a simple code.")
    sub.add_argument("code", metavar="CODE")
    _add_out(sub)

    sub = command("lift", cmd_lift, "Lift W ∈ Sp(2, Z_c) to an integer matrix in Γ0(d).")
    sub.add_argument("--w", required=True, metavar="FILE", help="Matrix file holding W mod c")
    sub.add_argument("--c", type=int, required=True)
    sub.add_argument("--d", type=int, required=True)
    _add_out(sub)

    sub = command("decode-sweep", cmd_decode_sweep, "Decode every point of an error grid.")
    sub.add_argument("code", metavar="CODE")
    _add_strategy(sub)
    sub.add_argument(
        "--grid", type=int, default=21, help="Grid points per axis. [Default: %(default)s]"
    )
    sub.add_argument(
        "--radius",
        type=float,
        default=None,
        help="Half-width of the shift grid in u′. Default is per-strategy.",
    )
    _add_out(sub, "CSV")

    sub = command("decode-mc", cmd_decode_mc, "Monte Carlo logical failure rate.")
    sub.add_argument("code", metavar="CODE")
    _add_strategy(sub)
    sub.add_argument(
        "--sigma",
        help="Shift noise standard deviation. Plain numbers are u′; give e.g. '0.1 quadrature' for physical units.",
        type=_quantity,
        default=unit_registry.Quantity(0.0),
    )
    sub.add_argument("--px", dest="p_x", type=float, default=0.0, help="Qudit X error probability")
    sub.add_argument("--pz", dest="p_z", type=float, default=0.0, help="Qudit Z error probability")
    sub.add_argument("--trials", type=int, default=1000, help="[Default: %(default)s]")
    sub.add_argument("--seed", type=int, default=0, help="[Default: %(default)s]")
    sub.add_argument(
        "--threads", type=int, default=1, help="Worker threads. [Default: %(default)s]"
    )
    _add_out(sub, "CSV")

    sub = command("catalog", cmd_catalog, "Worked example constructions.")
    entries = sub.add_subparsers(dest="entry", metavar="ENTRY", required=True)
    entry = entries.add_parser("e8", help="The E8 Gaussian circuit.")
    _add_out(entry)
    entry = entries.add_parser("binary", help="Qubit code from a binary generator matrix.")
    entry.add_argument("--g", required=True, metavar="FILE", help="Matrix file holding G")
    entry.add_argument("--l1", type=int, nargs="+", help="Diagonal of L1 (±1 each)")
    entry.add_argument("--l2", type=int, nargs="+", help="Diagonal of L2 (±1 each)")
    _add_out(entry)
    entry = entries.add_parser("commutation", help="Code of a Pauli commutation matrix.")
    entry.add_argument("--a", required=True, metavar="FILE", help="Matrix file holding A")
    entry.add_argument("--theta-vec", type=int, nargs="+", help="Integer part θ of each pair")
    _add_out(entry)
    for name, summary in (
        ("square", "Square GKP qubit on each mode."),
        ("rectangular", "Rectangular GKP qubit on each mode."),
        ("scaled", "Scaled GKP code of Θ = λ·J."),
    ):
        entry = entries.add_parser(name, help=summary)
        entry.add_argument("--modes", type=int, default=1, help="[Default: %(default)s]")
        _add_out(entry)
        if name == "rectangular":
            entry.add_argument("--ratio", type=Fraction, required=True, help="Aspect ratio r")
        if name == "scaled":
            entry.add_argument("--scale", type=int, required=True, help="λ")
    return parser


def run(argv: list[str] | None = None) -> None:
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        handlers=[
            IndentingRichHandler(
                show_time=args.verbose,
                show_level=args.verbose,
                show_path=args.verbose,
                log_time_format="[%Y-%m-%d %H:%M:%S]",
            )
        ],
        format="%(message)s",
        force=True,
    )
    logger.debug(f"Args: {args}")

    try:
        args.func(args)
    except LcaError as e:
        console.print(f"\n[y][b]Could not proceed: {e}[/b][/y]\n")
        sys.exit(1)


if __name__ == "__main__":
    run()

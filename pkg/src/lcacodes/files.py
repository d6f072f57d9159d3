"""
JSON and CSV formats for matrices, codes, gates and decoder results.

Rationals are always written as strings ("p/q" or an integer), so that
everything but the decoder statistics round-trips exactly.
"""

from __future__ import annotations

import csv
import json
import logging
import sys
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import IO, Any, Iterable, Iterator, Sequence

from .codes import GeneralLcaCode, SimpleLcaCode
from .decoder import MonteCarloResult, SweepRow
from .errors import InputError, LcaError
from .exactmath import RationalMatrix, as_fraction
from .symplectic import Encoder, MoritaElement, ScaledMatrix, as_scaled

logger = logging.getLogger(__name__)

MONTE_CARLO_HEADER = ("strategy", "c", "d", "theta", "sigma", "p_x", "p_z", "trials", "failures", "rate")
SWEEP_HEADER = ("strategy", "c", "d", "theta", "eps1", "eps2", "n", "w", "success", "residual_class")


def _rational(value: Any) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InputError(f"Expected a rational as a string or integer, got {value!r}")
    try:
        return as_fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"Malformed rational {value!r}: {e}") from e


def _rationals(values: Any) -> tuple[Fraction, ...]:
    if not isinstance(values, list):
        raise InputError(f"Expected a list of rationals, got {values!r}")
    return tuple(_rational(x) for x in values)


def _integers(values: Any) -> tuple[int, ...]:
    result = _rationals(values)
    if any(x.denominator != 1 for x in result):
        raise InputError(f"Expected integers, got {values!r}")
    return tuple(int(x) for x in result)


def matrix_to_json(matrix: RationalMatrix) -> dict[str, Any]:
    return {"rows": [[str(x) for x in row] for row in matrix.rows()], "ncols": matrix.ncols}


def matrix_from_json(data: Any) -> RationalMatrix:
    if not isinstance(data, dict) or not isinstance(data.get("rows"), list):
        raise InputError('A matrix must be an object with a "rows" list')
    rows = [_rationals(row) for row in data["rows"]]
    ncols = data.get("ncols")
    if ncols is not None and (isinstance(ncols, bool) or not isinstance(ncols, int)):
        raise InputError(f'"ncols" must be an integer, got {ncols!r}')
    try:
        return RationalMatrix.of(rows, ncols=ncols)
    except LcaError as e:
        raise InputError(f"Malformed matrix: {e}") from e


def encoder_to_json(encoder: Encoder) -> dict[str, Any]:
    if isinstance(encoder, RationalMatrix):
        return matrix_to_json(encoder)
    data = {
        "radicands": [str(r) for r in encoder.radicands],
        "base": matrix_to_json(encoder.base),
    }
    if encoder.col_radicands is not None:
        data["col_radicands"] = [str(r) for r in encoder.col_radicands]
    return data


def encoder_from_json(data: Any) -> Encoder:
    if isinstance(data, dict) and "radicands" in data:
        cols = data.get("col_radicands")
        try:
            return ScaledMatrix(
                _rationals(data["radicands"]),
                matrix_from_json(data.get("base")),
                _rationals(cols) if cols is not None else None,
            )
        except (LcaError, ValueError) as e:
            raise InputError(f"Malformed scaled matrix: {e}") from e
    return matrix_from_json(data)


def code_to_json(code: SimpleLcaCode | GeneralLcaCode) -> dict[str, Any]:
    if isinstance(code, SimpleLcaCode):
        return {
            "kind": "simple",
            "c": code.c,
            "d": code.d,
            "theta": code.theta,
            "a": code.a,
            "b": code.b,
            "K": code.K,
            "flipped": code.flipped,
        }
    return {
        "kind": "general",
        "theta": matrix_to_json(code.theta),
        "z": matrix_to_json(code.Z),
        "m": code.m,
        "Q": matrix_to_json(code.Q),
        "R": matrix_to_json(code.R),
        "t": [str(x) for x in code.t],
        "h": [str(x) for x in code.h],
        "cvec": [str(x) for x in code.cvec],
        "dvec": [str(x) for x in code.dvec],
        "avec": [str(x) for x in code.avec],
        "bvec": [str(x) for x in code.bvec],
        "T_cv": encoder_to_json(code.T_cv),
        "T_dv": matrix_to_json(code.T_dv),
        "S_cv": encoder_to_json(code.S_cv),
        "S_dv": matrix_to_json(code.S_dv),
        "theta_perp": matrix_to_json(code.theta_perp),
        "g": {name: matrix_to_json(getattr(code.g, name)) for name in "ABCD"},
        "K": code.K,
    }


def _field(data: dict[str, Any], name: str) -> Any:
    if name not in data:
        raise InputError(f"Code file is missing '{name}'")
    return data[name]


def _integer(data: dict[str, Any], name: str) -> int:
    return _integers([_field(data, name)])[0]


def code_from_json(data: Any) -> SimpleLcaCode | GeneralLcaCode:
    """
    Read a code exactly as stored.

    Nothing is recomputed, so a tampered file loads and then fails
    verification.
    """
    if not isinstance(data, dict):
        raise InputError("A code file must hold a JSON object")
    kind = data.get("kind")
    if kind == "simple":
        return SimpleLcaCode(
            c=_integer(data, "c"),
            d=_integer(data, "d"),
            theta=_integer(data, "theta"),
            a=_integer(data, "a"),
            b=_integer(data, "b"),
            K=_integer(data, "K"),
            flipped=bool(data.get("flipped", False)),
        )
    if kind != "general":
        raise InputError(f"Unknown code kind {kind!r}")
    g = _field(data, "g")
    if not isinstance(g, dict):
        raise InputError("'g' must be an object with blocks A, B, C and D")
    return GeneralLcaCode(
        theta=matrix_from_json(_field(data, "theta")),
        Z=matrix_from_json(_field(data, "z")),
        m=_integer(data, "m"),
        Q=matrix_from_json(_field(data, "Q")),
        R=matrix_from_json(_field(data, "R")),
        t=_integers(_field(data, "t")),
        h=_integers(_field(data, "h")),
        cvec=_integers(_field(data, "cvec")),
        dvec=_integers(_field(data, "dvec")),
        avec=_integers(_field(data, "avec")),
        bvec=_integers(_field(data, "bvec")),
        T_cv=as_scaled(encoder_from_json(_field(data, "T_cv"))),
        T_dv=matrix_from_json(_field(data, "T_dv")),
        S_cv=as_scaled(encoder_from_json(_field(data, "S_cv"))),
        S_dv=matrix_from_json(_field(data, "S_dv")),
        theta_perp=matrix_from_json(_field(data, "theta_perp")),
        g=MoritaElement(*(matrix_from_json(_field(g, name)) for name in "ABCD")),
        K=_integer(data, "K"),
    )


def read_json(path: Path | str) -> Any:
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise InputError(f"Cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from e


def read_matrix(path: Path | str) -> RationalMatrix:
    return matrix_from_json(read_json(path))


def read_code(path: Path | str) -> SimpleLcaCode | GeneralLcaCode:
    code = code_from_json(read_json(path))
    logger.debug(f"Read {code} from {path}")
    return code


@contextmanager
def _output(path: Path | str | None, newline: str | None = None) -> Iterator[IO[str]]:
    """A writable text stream; None or "-" means standard output"""
    if path is None or str(path) == "-":
        yield sys.stdout
        return
    try:
        with open(path, "w", newline=newline) as f:
            yield f
    except OSError as e:
        raise InputError(f"Cannot write {path}: {e.strerror}") from e
    logger.info(f"Wrote {path}")


def write_json(data: Any, path: Path | str | None = None) -> None:
    with _output(path) as f:
        json.dump(data, f, indent=2, ensure_ascii=False)
        f.write("\n")


def _float(value: float) -> str:
    return f"{value:.12g}"


def monte_carlo_rows(results: Iterable[MonteCarloResult]) -> Iterator[list[str]]:
    for r in results:
        yield [
            r.strategy,
            str(r.c),
            str(r.d),
            str(r.theta),
            _float(r.sigma),
            _float(r.p_x),
            _float(r.p_z),
            str(r.trials),
            str(r.failures),
            _float(r.rate),
        ]


def write_monte_carlo_csv(
    results: Sequence[MonteCarloResult], path: Path | str | None = None
) -> None:
    with _output(path, newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(MONTE_CARLO_HEADER)
        writer.writerows(monte_carlo_rows(results))


def write_sweep_csv(
    code: SimpleLcaCode,
    strategy: str,
    rows: Sequence[SweepRow],
    path: Path | str | None = None,
) -> None:
    with _output(path, newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        for row in rows:
            writer.writerow(
                [
                    strategy,
                    code.c,
                    code.d,
                    code.theta,
                    _float(row.eps1),
                    _float(row.eps2),
                    row.n,
                    row.w,
                    int(row.success),
                    " ".join(str(x) for x in row.residual_class),
                ]
            )

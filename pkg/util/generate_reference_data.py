"""
Generate the reference code files, decoder sweeps and Monte Carlo tables
"""

from __future__ import annotations

import argparse
import os
import shlex
import subprocess
from pathlib import Path

parser = argparse.ArgumentParser(description="Generate reference data for lcacodes")

EXAMPLES = ["codes", "sweeps", "montecarlo", "catalog"]
parser.add_argument(
    "output_dir",
    type=Path,
    help="Path to write output files to.",
    metavar="OUTPUT_DIR",
)
parser.add_argument("--trials", type=int, default=20000, help="Monte Carlo trials per point")

for kind in EXAMPLES:
    parser.add_argument(f"--{kind}", help=f"Generate the {kind} data", action="store_true")

args = parser.parse_args()
args.output_dir.mkdir(parents=True, exist_ok=True)
os.chdir(args.output_dir)

if all(not x for x in [getattr(args, name) for name in EXAMPLES]):
    for name in EXAMPLES:
        setattr(args, name, True)

# (c, d, θ) of the small qubit and qudit codes
CODES = [(3, 2, 0), (5, 2, 0), (5, 3, 0), (7, 4, 0), (3, 1, 1), (5, 2, 1)]
SIGMAS = ["0.1", "0.15", "0.2", "0.25", "0.3", "0.35", "0.4"]


def lcacodes(*args):
    command = ["lcacodes", "-v", *args]
    print("+ " + " ".join(shlex.quote(x) for x in command))
    subprocess.run(command, check=True)


def code_file(c: int, d: int, theta: int) -> str:
    return f"code_{c}_{d}_{theta}.json"


if args.codes or args.sweeps or args.montecarlo:
    for c, d, theta in CODES:
        name = code_file(c, d, theta)
        lcacodes("simple", f"--c={c}", f"--d={d}", f"--theta={theta}", "-o", name)
        if args.codes:
            lcacodes("verify", name, "-o", name.replace("code_", "verify_"))
            lcacodes("logicals", name, "-o", name.replace("code_", "logicals_"))
            lcacodes("hadamard", name, "-o", name.replace("code_", "hadamard_"))

if args.sweeps:
    for c, d, theta in CODES:
        for strategy in ("pure", "qudit"):
            lcacodes(
                "decode-sweep",
                code_file(c, d, theta),
                f"--strategy={strategy}",
                "--grid=11",
                "-o",
                f"sweep_{strategy}_{c}_{d}_{theta}.csv",
            )

if args.montecarlo:
    for c, d, theta in CODES:
        for strategy in ("pure", "qudit"):
            for sigma in SIGMAS:
                lcacodes(
                    "decode-mc",
                    code_file(c, d, theta),
                    f"--strategy={strategy}",
                    f"--sigma={sigma} quadrature",
                    f"--trials={args.trials}",
                    "--threads=4",
                    "-o",
                    f"mc_{strategy}_{c}_{d}_{theta}_{sigma}.csv",
                )

if args.catalog:
    lcacodes("catalog", "e8", "-o", "e8.json")
    lcacodes("catalog", "square", "--modes=2", "-o", "square_gkp.json")
    lcacodes("catalog", "rectangular", "--ratio=3", "-o", "rectangular_gkp.json")
    lcacodes("catalog", "scaled", "--scale=3", "-o", "scaled_gkp.json")

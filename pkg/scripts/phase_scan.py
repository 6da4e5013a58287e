#!/usr/bin/env python3
"""Scan evolution phases across scenarios, comparing both evaluation routes.

For each shipped scenario the script tabulates the closed-form phase and the
adaptive-quadrature phase of the (0, 1) state on a time grid, records which
method the closed-form entry actually used (families without a valid series
representation fall back to quadrature), and prints the worst disagreement.
"""

from __future__ import annotations

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from ncho.config import build_scenario, parse_scenario_file
from ncho.hamiltonian import reality_horizon_time
from ncho.spectrum import StateLabel, phase_closed_form, phase_quadrature

FMT = "%.12e"
STATE = StateLabel(0, 1)


def scan(scenario, name: str, out_dir: pathlib.Path, points: int) -> float:
    horizon = reality_horizon_time(scenario)
    t_end = 2.0 if horizon is None else min(0.9 * horizon, 2.0)
    worst = 0.0
    path = out_dir / f"phase_{name}.csv"
    with path.open("w", newline="\n") as fh:
        fh.write("t,closed_re,closed_im,quad_re,quad_im,method,rel_err\n")
        for i in range(points):
            t = t_end * i / (points - 1)
            cf = phase_closed_form(scenario, STATE, t)
            qd = phase_quadrature(scenario, STATE, t)
            err = abs(cf.value - qd.value) / max(1.0, abs(cf.value), abs(qd.value))
            worst = max(worst, err)
            fh.write(
                ",".join(
                    (FMT % t, FMT % cf.value.real, FMT % cf.value.imag,
                     FMT % qd.value.real, FMT % qd.value.imag,
                     cf.method.value, FMT % err)
                )
                + "\n"
            )
    print(f"wrote {path}  worst rel err {worst:.3e}")
    return worst


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--scenarios", default=None,
        help="directory of .scenario files (default: ../scenarios)",
    )
    parser.add_argument("--out", default=None, help="output directory (default: ../out)")
    parser.add_argument("--points", type=int, default=60, help="grid size (default 60)")
    args = parser.parse_args(argv)

    root = pathlib.Path(__file__).resolve().parent.parent
    scenario_dir = pathlib.Path(args.scenarios) if args.scenarios else root / "scenarios"
    out_dir = pathlib.Path(args.out) if args.out else root / "out"
    out_dir.mkdir(parents=True, exist_ok=True)

    worst = 0.0
    for path in sorted(scenario_dir.glob("*.scenario")):
        scenario = build_scenario(parse_scenario_file(path))
        worst = max(worst, scan(scenario, path.stem, out_dir, args.points))
    print(f"overall worst rel err {worst:.3e}")
    return 0 if worst <= 1e-7 else 1


if __name__ == "__main__":
    raise SystemExit(main())

"""Regenerate every preset output (CSV, SVG and manifest) into one directory.

Usage: python3 scripts/run_figures.py [--out-dir DIR]
"""
import argparse
import sys
import time
from pathlib import Path

from qhyst import cli

RUNS = (
    ("dimer-ground", "fig1"),
    ("dimer-hysteresis", "fig2"),
    ("dimer-hysteresis", "fig2-mirrored"),
    ("dimer-hysteresis", "fig2-linear"),
    ("box-anneal", "linear"),
    ("box-hysteresis", "fig3"),
    ("box-hysteresis", "fig3-calibrated"),
    ("beta-scan", "fig4"),
    ("beta-scan", "fig4-calibrated"),
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="out/figures")
    args = ap.parse_args()
    status = 0
    for command, preset in RUNS:
        out = Path(args.out_dir) / preset
        t0 = time.perf_counter()
        extra = ["--svg", "true"] if "svg" in cli.COMMANDS[command] else []
        code = cli.main([command, "--preset", preset, *extra, "--out-dir", str(out)])
        print(f"{preset:18s} {command:18s} exit {code}  {time.perf_counter() - t0:6.1f} s")
        status = max(status, code)
    return status


if __name__ == "__main__":
    sys.exit(main())

"""Locate the bistable working point of the nonlinear box and store it.

Usage: python3 scripts/calibrate.py [--out PATH] [--workers N]
"""
import argparse
import time

from qhyst.annealer import AnnealSchedule
from qhyst.hysteresis import CALIBRATION_FILE, bifurcation_scan, write_calibration
from qhyst.wavefunction import BoxSpec

BETAS = (0.0, -20.0, -40.0, -60.0, -80.0, -100.0, -120.0, -150.0)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(CALIBRATION_FILE))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--area-floor", type=float, default=20.0)
    args = ap.parse_args()

    t0 = time.perf_counter()
    sched = AnnealSchedule(cycles_per_temp=500, proposal_sigma0=0.1, sigma_floor=1e-3)
    rec = bifurcation_scan(-1.0, BoxSpec(0.5, 512), BETAS, sched, area_floor=args.area_floor,
                           workers=args.workers)
    print(f"{'beta':>8} {'order':>10} {'probe area':>12}")
    for b, o, ar in zip(rec.betas, rec.order_parameter, rec.probe_area):
        print(f"{b:8.1f} {o:10.4f} {ar:12.3f}")
    print(f"beta_strong = {rec.beta_strong} (area floor {rec.area_floor}), "
          f"{time.perf_counter() - t0:.1f} s")
    write_calibration(rec, args.out)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()

"""Run every pinned figure target and print wall time per target.

    python scripts/reproduce_all.py [--out repro] [fig3 fig17 ...]
"""

import argparse
import time

from cglocality.harness import figure_targets, reproduce


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("targets", nargs="*")
    ap.add_argument("--out", default="repro")
    args = ap.parse_args()
    total = 0.0
    for target in args.targets or figure_targets():
        t0 = time.perf_counter()
        bundles = reproduce(target, args.out)
        dt = time.perf_counter() - t0
        total += dt
        codes = ",".join(str(b.exit_code) for b in bundles)
        print(f"{target:6s} {len(bundles)} bundle(s) exit={codes} {dt:7.2f}s")
    print(f"total {total:.1f}s, output under {args.out}/")


if __name__ == "__main__":
    main()

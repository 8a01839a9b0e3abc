"""Exhaustive equal-order inner-product search on the equispaced grid.

For each bandwidth B, finds the largest |sum_p d_{l1}^{k,n} d_{l2}^{k,n}| over
0 <= l1 < l2 < B, |k|, |n| <= l1 at m = min_samples(B), and compares it to the
P_{B-1}/P_{B-3} pair. With --scan, also reports the smallest m beyond which the
pair stays the argmax over a window of sample counts.
"""
import argparse
import csv
import sys
import time

from sphericoh.coherence import max_equal_order_product, theorem_lower_bound
from sphericoh.grids import Grid, min_samples


def argmax_matches(B, m):
    value, arg = max_equal_order_product(Grid.equispaced(m), B)
    return value, arg, arg == (B - 3, B - 1, 0, 0)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bmin", type=int, default=3)
    ap.add_argument("--bmax", type=int, default=20)
    ap.add_argument("--scan", action="store_true")
    ap.add_argument("--window", type=int, default=10, help="consecutive passing m required by --scan")
    ap.add_argument("--out")
    args = ap.parse_args()

    fields = ["B", "m", "value", "bound", "arg_l1", "arg_l2", "arg_k", "arg_n", "matches", "stable_from_m"]
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh)
    w.writerow(fields)
    t0 = time.perf_counter()
    for B in range(args.bmin, args.bmax + 1):
        m = min_samples(B)
        value, arg, ok = argmax_matches(B, m)
        bound = theorem_lower_bound(B, m)
        stable = ""
        if args.scan:
            run, probe = 0, m
            while run < args.window:
                run = run + 1 if argmax_matches(B, probe)[2] else 0
                probe += 1
            stable = probe - args.window
        w.writerow([B, m, f"{value:.17g}", f"{bound:.17g}", *arg, ok, stable])
        fh.flush()
    print(f"# elapsed {time.perf_counter() - t0:.1f} s", file=sys.stderr)


if __name__ == "__main__":
    main()

"""Residual of the equispaced Legendre sum at the threshold sample count.

Prints l, m, leading term, residual R_l(m) and whether -0.463 < R_l(m) < 0.
Optionally sweeps m above the threshold for a fixed l.
"""
import argparse

from sphericoh.identities import RESIDUAL_LOWER, legendre_sum_closed_form, residual_threshold


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lmax", type=int, default=60)
    ap.add_argument("--sweep-l", type=int, help="sweep m for this even degree instead")
    ap.add_argument("--sweep-count", type=int, default=50)
    args = ap.parse_args()

    print("l,m,leading,residual,in_band")
    if args.sweep_l is not None:
        l = args.sweep_l
        pairs = [(l, m) for m in range(residual_threshold(l), residual_threshold(l) + args.sweep_count)]
    else:
        pairs = [(l, residual_threshold(l)) for l in range(4, args.lmax + 1, 2)]
    for l, m in pairs:
        dec = legendre_sum_closed_form(l, m)
        r = float(dec.residual)
        print(f"{l},{m},{float(dec.leading):.17g},{r:.17g},{RESIDUAL_LOWER < r < 0}")


if __name__ == "__main__":
    main()

"""Weight-by-weight H^2 table for a multiloop preset across a range of cutoffs.

    python scripts/h2_table.py --preset a2-twisted --weights -3 3 --cutoffs 3 4 5
"""
import argparse
import itertools
import time

from multiloop.cochains import WindowEmpty
from multiloop.cocycle import target_dim
from multiloop.cohomology import ce_h2_weight
from multiloop.presets import MULTILOOP_PRESETS, multiloop_preset


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--preset", default="sl2-loop", choices=sorted(MULTILOOP_PRESETS))
    p.add_argument("--weights", type=int, nargs=2, default=(-3, 5), metavar=("LO", "HI"),
                   help="inclusive range for every weight coordinate")
    p.add_argument("--cutoffs", type=int, nargs="+", default=[3, 4, 5])
    args = p.parse_args()

    M = multiloop_preset(args.preset)
    lo, hi = args.weights
    print("# preset", args.preset, "slice dims", M.slice_dims())
    print("\t".join(["weight", "target"] + [f"H2@D={D}" for D in args.cutoffs] + ["seconds"]))
    for w in itertools.product(range(lo, hi + 1), repeat=M.n):
        t0 = time.perf_counter()
        dims = []
        for D in args.cutoffs:
            try:
                dims.append(str(ce_h2_weight(M, w, D).dim_h2))
            except WindowEmpty:
                dims.append("-")
        row = [str(w), str(target_dim(M, w))] + dims + [f"{time.perf_counter() - t0:.2f}"]
        print("\t".join(row))


if __name__ == "__main__":
    main()

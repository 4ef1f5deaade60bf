"""Convergence tables for Fourier truncation on the torus and Bernstein integration on [0, 1].

    python scripts/density_convergence.py --function exp-sin --N 2 4 8 16 32 64 --k 2
    python scripts/density_convergence.py --interval exp --mu 2 --N 8 16 32 64 128
"""
import argparse

from multiloop.density import CATALOGUE, INTERVAL_CATALOGUE, fourier_ladder, weierstrass_ladder


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    g = p.add_mutually_exclusive_group()
    g.add_argument("--function", choices=sorted(CATALOGUE))
    g.add_argument("--interval", choices=sorted(INTERVAL_CATALOGUE))
    p.add_argument("--N", type=int, nargs="+", default=[4, 8, 16, 32, 64])
    p.add_argument("--k", type=int, default=2, help="highest derivative order reported")
    p.add_argument("--mu", type=int, default=2, help="derivative order approximated (interval mode)")
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--dps", type=int, default=150)
    args = p.parse_args()

    if args.interval:
        reps = weierstrass_ladder(args.interval, args.mu, args.N, k=args.k, grid=args.grid or 1001)
        title = f"Bernstein integration of {args.interval}, mu = {args.mu}"
    else:
        name = args.function or "exp-sin"
        reps = fourier_ladder(name, args.N, args.k, grid=args.grid or 256, dps=args.dps)
        title = f"Fourier truncation of {name}, {args.dps} digits"
    print("#", title)
    print("\t".join(["N", "grid"] + [f"C{j}" for j in range(args.k + 1)] + ["ratio C0"]))
    prev = None
    for r in reps:
        ratio = f"{prev / r.errors[0]:.3g}" if prev and r.errors[0] else "-"
        print("\t".join([str(r.N), str(r.grid)] + [f"{e:.3e}" for e in r.errors] + [ratio]))
        prev = r.errors[0]


if __name__ == "__main__":
    main()

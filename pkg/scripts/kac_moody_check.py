"""Compare omega_alg on a loop algebra with the classical residue cocycle a delta_{a+b,0} K(x, y).

Prints the global scale between the two and the factorization of the weight-0
H^2 representatives.

    python scripts/kac_moody_check.py --preset sl2-loop --degree 5 --cutoff 3
"""
import argparse
import itertools
from fractions import Fraction

from multiloop.cocycle import omega_alg
from multiloop.cohomology import certify_weight
from multiloop.liealg import killing_form
from multiloop.presets import multiloop_preset


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--preset", default="sl2-loop", choices=["sl2-loop", "sl2xsl2-loop"])
    p.add_argument("--degree", type=int, default=5)
    p.add_argument("--cutoff", type=int, default=3)
    args = p.parse_args()

    M = multiloop_preset(args.preset)
    K = killing_form(M.lie)
    d = M.lie.dim
    scales = set()
    mismatches = 0
    R = range(-args.degree, args.degree + 1)
    for a, b in itertools.product(R, repeat=2):
        for i, j in itertools.product(range(d), repeat=2):
            val = omega_alg(M.graded_component((a,))[i], M.graded_component((b,))[j])
            if a + b:
                mismatches += not val.is_zero()
                continue
            classical = a * K.rows[i][j].to_fraction()
            coords = [c.to_fraction() for c in val.at((0,), M.field.zero)]
            if classical:
                # per V coordinate; for sl2 + sl2 each summand has its own scale
                scales.update((k, c / classical) for k, c in enumerate(coords) if c)
            else:
                mismatches += any(coords)
    print(f"{args.preset}: degrees |a|,|b| <= {args.degree}")
    print("V coordinate / scale pairs:", sorted(scales, key=lambda t: (t[0], Fraction(t[1]))))
    print("support mismatches:", mismatches)
    cert = certify_weight(M, (0,), args.cutoff)
    print(f"weight 0, D = {args.cutoff}: dim H2 = {cert.h2_dim}, target = {cert.target_dim}, "
          f"all factor: {cert.success}")
    for k, f in enumerate(cert.factorizations):
        print(f"  representative {k}: phi = {[str(c) for c in f.phi.coeffs]}")


if __name__ == "__main__":
    main()

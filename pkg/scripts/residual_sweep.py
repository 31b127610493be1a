#!/usr/bin/env python3
"""Sweep the numerical residuals of the cell systems, connections, and
flatness commutators over a range of Coxeter numbers."""

import argparse

from a2planar import pathalg as P
from a2planar.graph import build_A, solve_cells


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nmax", type=int, default=7)
    ap.add_argument("--depth", type=int, default=2,
                    help="horizontal/vertical depth for the flatness check")
    args = ap.parse_args()

    print(f"{'n':>3} {'cells':>10} {'unit even':>10} {'unit odd':>10} "
          f"{'csq even':>10} {'csq odd':>10} {'flatness':>10}")
    for n in range(4, args.nmax + 1):
        g = build_A(n)
        cells = solve_cells(g)
        row = [cells.residual]
        for parity in ("even", "odd"):
            conn = P.connection(g, cells, parity)
            row += [conn.unitarity_residual(), conn.commuting_square_residual()]
        row.append(P.flatness_check(g, cells, args.depth, args.depth)
                   ["max_commutator"])
        print(f"{n:>3} " + " ".join(f"{v:>10.2e}" for v in row))


if __name__ == "__main__":
    main()

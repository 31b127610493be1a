#!/usr/bin/env python3
"""Print the matrix of the six-vertex (hexagon) element on the level-(3,0)
path-pair algebra of the weight-lattice graph at a chosen Coxeter number."""

import argparse

import numpy as np

from a2planar import pathalg as P
from a2planar.graph import build_A, qnum, solve_cells


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=7)
    args = ap.parse_args()

    g = build_A(args.n)
    cells = solve_cells(g)
    z = P.z_element(P.word_hexagon(), [], g, cells, 3, 0)
    paths = sorted({p for p, _ in P.enumerate_paths(g, P.level_signs(3, 0))})
    m = np.array([[z.terms.get((p, q), 0.0) for q in paths] for p in paths])

    print(f"n = {args.n}:  [2] = {qnum(2, args.n):.6f}, "
          f"[3] = {qnum(3, args.n):.6f}, [4] = {qnum(4, args.n):.6f}")
    print(f"basis: {len(paths)} paths, grouped by endpoint")
    for idx, p in enumerate(paths):
        print(f"  {idx}: ends at {P.path_range(g, p)}")
    with np.printoptions(precision=6, suppress=True):
        print(m.real if abs(m.imag).max() < 1e-12 else m)


if __name__ == "__main__":
    main()

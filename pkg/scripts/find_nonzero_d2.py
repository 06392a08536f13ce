#!/usr/bin/env python3
"""Brute-force search for small double complexes with a nonzero d_2.

Samples sparse integer differentials on grids with bounds <= 2 and cell
dims <= 2, keeps the samples that satisfy the double-complex laws, and
reports every one whose page 2 differs from page 3.  A d_2 needs three
columns (its bidegree is (2, -1)), so the minimal witnesses live on
P = 2 grids; the frozen instance shipped in cohom.generators was found
this way.

Usage: python scripts/find_nonzero_d2.py [--samples N] [--seed S] [--verify]
"""

import argparse
import json
import random
import sys
from fractions import Fraction

from cohom.complexes import cohomology
from cohom.grid import (
    DoubleComplex,
    InvariantViolation,
    double_complex_to_json,
    total,
)
from cohom.linalg import LabeledSpace, LinearMap, rank
from cohom.spectral import certify_convergence, first_pages


def random_candidate(rng: random.Random) -> DoubleComplex:
    P, Q = 2, rng.choice([1, 2])
    dims = {(p, q): rng.choice([0, 0, 1, 1, 2]) for p in range(P + 1)
            for q in range(Q + 1)}
    cells = tuple(tuple(LabeledSpace(tuple(((p, q), i) for i in range(dims[(p, q)])))
                        for q in range(Q + 1)) for p in range(P + 1))

    def sparse_map(dom, cod):
        rows = []
        for _ in range(cod.dim):
            rows.append(tuple(Fraction(rng.choice([0, 0, 0, 1, -1]))
                              for _ in range(dom.dim)))
        return LinearMap(dom, cod, tuple(rows))

    horiz = tuple(tuple(sparse_map(cells[p][q], cells[p + 1][q])
                        for q in range(Q + 1)) for p in range(P))
    vert = tuple(tuple(sparse_map(cells[p][q], cells[p][q + 1])
                       for q in range(Q)) for p in range(P + 1))
    return DoubleComplex(P, Q, cells, horiz, vert)


def page_dims(page):
    return {pq: e.dim for pq, e in sorted(page.entries.items()) if e.dim}


def search(samples: int, seed: int):
    rng = random.Random(seed)
    valid = 0
    found = []
    for _ in range(samples):
        dc = random_candidate(rng)
        try:
            dc.validate()
        except InvariantViolation:
            continue
        valid += 1
        pages = first_pages(dc, max(dc.P, dc.Q) + 2)
        e2, e3 = pages[1], pages[2]
        if page_dims(e2) != page_dims(e3):
            d2_ranks = {pq: rank(d) for pq, d in e2.differentials.items() if rank(d)}
            found.append((dc, page_dims(e2), page_dims(e3), d2_ranks))
    return valid, found


def verify_frozen():
    from cohom.generators import nonzero_d2_double_complex

    dc = nonzero_d2_double_complex()
    pages = first_pages(dc, 4)
    print("frozen instance:")
    print("  H_D:", cohomology(total(dc)).dims)
    for pg in pages:
        ranks = {pq: rank(d) for pq, d in pg.differentials.items() if rank(d)}
        print(f"  E_{pg.r} dims {page_dims(pg)} nonzero d ranks {ranks}")
    certify_convergence(dc)
    print("  convergence certificate: ok")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--verify", action="store_true",
                    help="only re-check the frozen instance")
    args = ap.parse_args()

    if args.verify:
        verify_frozen()
        return 0

    valid, found = search(args.samples, args.seed)
    print(f"sampled {args.samples}, {valid} valid double complexes, "
          f"{len(found)} with E_2 != E_3")
    for dc, e2, e3, ranks in found[:3]:
        print("witness:")
        print("  E_2:", e2, " E_3:", e3, " d_2 ranks:", ranks)
        print("  json:", json.dumps(double_complex_to_json(dc)))
    return 0 if found else 1


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Sweep a parameter grid for one family and rank candidates by score.

The score averages local data at good primes; larger values loosely favor
larger rank.  The best few candidates are then processed fully: torsion,
naive point search and a certified rank lower bound.
"""

import argparse
from fractions import Fraction

from diocurves import (
    DegenerateParameter,
    canonical_points,
    clear_denominators,
    induced_curves,
    make_family_member,
    mestre_nagao_sum,
    naive_point_search,
    rank_lower_bound,
    torsion_subgroup,
)
from diocurves.cli import _grid


def score_grid(family, numerators, denominators, N):
    rows = []
    for q in _grid(numerators, denominators):
        try:
            member = make_family_member(family, q)
        except DegenerateParameter:
            continue
        E = clear_denominators(induced_curves(member.triple).curve)[0]
        s = mestre_nagao_sum(E, N)
        rows.append((s.value, q, member.triple))
    rows.sort(key=lambda row: -row[0])
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--family", default="K_PLUSMINUS")
    parser.add_argument("--numerators", default="1:25")
    parser.add_argument("--denominators", default="1:4")
    parser.add_argument("--N", type=int, default=600)
    parser.add_argument("--top", type=int, default=5)
    args = parser.parse_args()

    lo, hi = (int(v) for v in args.numerators.split(":"))
    dlo, dhi = (int(v) for v in args.denominators.split(":"))
    rows = score_grid(args.family, (lo, hi), (dlo, dhi), args.N)
    print(f"{len(rows)} candidates scored (N = {args.N})\n")

    for value, q, triple in rows[:args.top]:
        E = induced_curves(triple).curve
        pts = list(canonical_points(triple).all_points())
        pts += naive_point_search(E, 4.0)
        tor = torsion_subgroup(E)
        bound = rank_lower_bound(E, pts)
        shape = "x".join(str(n) for n in tor.invariants)
        print(f"q = {q!s:10s} score {value:7.3f}  torsion Z{shape:5s} "
              f"rank >= {bound.bound}")


if __name__ == "__main__":
    main()

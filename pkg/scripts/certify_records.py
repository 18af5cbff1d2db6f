#!/usr/bin/env python3
"""Re-certify every bundled record that ships with a curve.

For each record this rebuilds the companion curve from the stored triple,
matches it to the stored minimal model, recomputes the torsion subgroup
exactly and certifies a rank lower bound from the stored points.  Takes a
few seconds total.
"""

import argparse
import time

from diocurves import (
    dataset_record,
    find_isomorphism,
    induced_curves,
    minimal_model,
    paper_dataset,
    rank_lower_bound,
    torsion_subgroup,
)


def certify(record_id: str) -> None:
    try:
        rec = dataset_record(record_id)
    except KeyError:
        raise SystemExit(f"unknown record {record_id!r}")
    t0 = time.monotonic()
    companion = induced_curves(rec.triple).curve
    reduced = minimal_model(companion)
    iso = find_isomorphism(reduced.curve, rec.curve)
    assert iso is not None, "stored model is not isomorphic"

    tor = torsion_subgroup(rec.curve)
    bound = rank_lower_bound(rec.curve, rec.points)
    dt = time.monotonic() - t0

    shape = "x".join(str(n) for n in tor.invariants)
    print(f"{record_id:14s} torsion Z{shape:6s} "
          f"rank >= {bound.bound} ({bound.method}) "
          f"claimed {rec.claimed_rank}   [{dt:.2f}s]")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("record", nargs="*",
                        help="record ids (default: all with stored curves)")
    args = parser.parse_args()

    ids = args.record or [r.record_id for r in paper_dataset()
                          if r.curve is not None]
    for rid in ids:
        certify(rid)


if __name__ == "__main__":
    main()

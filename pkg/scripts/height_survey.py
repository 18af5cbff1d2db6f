#!/usr/bin/env python3
"""Print canonical heights and the Gram matrix for a record's points.

The Gram determinant of the height pairing certifies independence when it
clears the accumulated error bound; the determinant itself estimates the
regulator of the span.
"""

import argparse

from diocurves import (
    canonical_height,
    dataset_record,
    gram_certificate,
    height_pairing,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("record", nargs="?", default="s5-rank4")
    parser.add_argument("--eps", type=float, default=1e-3)
    args = parser.parse_args()

    try:
        rec = dataset_record(args.record)
    except KeyError:
        raise SystemExit(f"unknown record {args.record!r}")
    if rec.curve is None:
        raise SystemExit(f"{args.record} stores no curve")
    E, points = rec.curve, rec.points

    print(f"{rec.record_id}: {len(points)} stored points\n")
    for i, P in enumerate(points, 1):
        h = canonical_height(E, P, eps=args.eps)
        print(f"  P{i}  height {h:.6f}  x = {P.x}")

    n = len(points)
    print("\npairing matrix:")
    for i in range(n):
        row = [height_pairing(E, points[i], points[j], eps=args.eps)
               for j in range(n)]
        print("  " + "  ".join(f"{v:9.4f}" for v in row))

    cert = gram_certificate(E, points, eps=args.eps)
    print(f"\ndet = {cert.determinant:.4f}  error bound "
          f"{cert.error_bound:.4f}  independent: {cert.independent}")


if __name__ == "__main__":
    main()

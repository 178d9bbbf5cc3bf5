#!/usr/bin/env python3
"""Scan surface positions on a geometry and record gap plus rigidity verdicts.

Writes one CSV line per surface radius: the two-sided bound gap, the relative
gap, and whether the sharp equality configuration was detected.  Useful for
watching rigidity persist across a whole cap family, or break under a
truncated interval.

Examples:
    python3 scripts/rigidity_scan.py --kind round-sphere --n 2 --radius 1
    python3 scripts/rigidity_scan.py --kind weighted-interval --K 1 --N 2 --length 3.04
"""

from __future__ import annotations

import argparse

from needlecomp import (CurvatureDimension, GeodesicSphere, LevelPoint,
                        RoundSphere, SphericalSuspension, decompose,
                        equality_detect, hk_full, model_interval)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--kind", required=True,
                        choices=("round-sphere", "weighted-interval",
                                 "spherical-suspension"))
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--radius", type=float, default=1.0)
    parser.add_argument("--K", type=float, default=1.0)
    parser.add_argument("--N", type=float, default=2.0)
    parser.add_argument("--base-volume", type=float, default=1.0)
    parser.add_argument("--length", type=float, default=None)
    parser.add_argument("--points", type=int, default=15)
    args = parser.parse_args()

    if args.kind == "round-sphere":
        geom = RoundSphere(args.n, args.radius)
        length = 3.141592653589793 * args.radius
        surface = GeodesicSphere
    elif args.kind == "spherical-suspension":
        cd = CurvatureDimension(args.K, args.N)
        geom = SphericalSuspension(cd, args.base_volume)
        length = 3.141592653589793 / (cd.K / (cd.N - 1.0)) ** 0.5
        surface = GeodesicSphere
    else:
        cd = CurvatureDimension(args.K, args.N)
        geom = model_interval(cd, length=args.length)
        length = geom.length
        surface = LevelPoint

    print("r0,gap,relative_gap,rigid,failed_conditions")
    for i in range(args.points):
        r0 = length * (i + 1.0) / (args.points + 1.0)
        dec = decompose(geom, surface(r0))
        full = hk_full(dec)
        verdict = equality_detect(dec)
        failed = "+".join(verdict.failed_conditions) or "none"
        print(f"{r0!r},{full.gap!r},{full.relative_gap!r},"
              f"{str(verdict.rigid).lower()},{failed}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

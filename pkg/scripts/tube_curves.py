#!/usr/bin/env python3
"""Scan the outer tube bound over a range of tube widths.

Emits plot data (two columns per series) comparing the measured outer tube
mass with the distortion-profile bound, for one geometry/surface pair given
on the command line.

Examples:
    python3 scripts/tube_curves.py --kind round-sphere --n 2 --radius 1 --r0 0.7
    python3 scripts/tube_curves.py --kind euclidean-ball --n 3 --R 1 --r0 0.5 --t-max 1.5
"""

from __future__ import annotations

import argparse

from needlecomp import (CurvatureDimension, EuclideanBall, GeodesicSphere,
                        LevelPoint, RoundSphere, SphericalSuspension,
                        decompose, hk_outer, model_interval)


def build_geometry(args):
    if args.kind == "round-sphere":
        return RoundSphere(args.n, args.radius), GeodesicSphere(args.r0)
    if args.kind == "euclidean-ball":
        return EuclideanBall(args.n, args.R), GeodesicSphere(args.r0)
    if args.kind == "spherical-suspension":
        cd = CurvatureDimension(args.K, args.N)
        return SphericalSuspension(cd, args.base_volume), GeodesicSphere(args.r0)
    cd = CurvatureDimension(args.K, args.N)
    return model_interval(cd, length=args.length), LevelPoint(args.r0)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--kind", required=True,
                        choices=("round-sphere", "euclidean-ball",
                                 "weighted-interval", "spherical-suspension"))
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--radius", type=float, default=1.0)
    parser.add_argument("--R", type=float, default=1.0)
    parser.add_argument("--K", type=float, default=1.0)
    parser.add_argument("--N", type=float, default=2.0)
    parser.add_argument("--base-volume", type=float, default=1.0)
    parser.add_argument("--length", type=float, default=None)
    parser.add_argument("--r0", type=float, required=True)
    parser.add_argument("--t-max", type=float, default=None)
    parser.add_argument("--points", type=int, default=40)
    args = parser.parse_args()

    geom, surf = build_geometry(args)
    dec = decompose(geom, surf)
    t_max = args.t_max if args.t_max is not None else dec.diameter
    ts = [t_max * (i + 1) / args.points for i in range(args.points)]
    reports = [hk_outer(dec, t) for t in ts]

    print(f"# outer tube curves, diameter={dec.diameter!r}, m_S={dec.surface_total!r}")
    print("# series: lhs")
    for t, rep in zip(ts, reports):
        print(f"{t!r} {rep.lhs!r}")
    print()
    print("# series: rhs")
    for t, rep in zip(ts, reports):
        print(f"{t!r} {rep.rhs!r}")
    worst = min(rep.gap for rep in reports)
    print(f"# smallest gap: {worst!r}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

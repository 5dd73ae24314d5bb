#!/usr/bin/env python3
"""Stress the Moebius-action identities with random group elements.

Reports worst-case residuals over random samples for: differential
conformality, the scale-factor cocycle, weighted-pairing invariance on a
product quadrature grid, chart covariance of the conformal Killing
operator, and its kernel fields.

Usage:
    python scripts/conformal_checks.py --dim 2 --samples 10 --seed 1
"""

import argparse

import numpy as np

from spherehess.confgroup import (
    ahlfors_chart,
    chart_dilation,
    chart_inversion,
    chart_translation,
    check_ahlfors_covariance,
    check_pairing_invariance,
    cocycle_residual,
    compose_chart,
    conformality_residual,
    random_band_limited_field,
    random_moebius,
    sphere_conformal_fields,
    sphere_grid,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dim", type=int, default=2, choices=(2, 3))
    parser.add_argument("--samples", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--order", type=int, default=40, help="quadrature order")
    parser.add_argument("--rapidity", type=float, default=1.0)
    args = parser.parse_args()

    n = args.dim
    rng = np.random.default_rng(args.seed)
    grid = sphere_grid(n, args.order)

    worst_conf = worst_cocycle = 0.0
    for _ in range(args.samples):
        a = random_moebius(rng, n, args.rapidity)
        b = random_moebius(rng, n, args.rapidity)
        y = rng.normal(size=n + 1)
        y /= np.linalg.norm(y)
        worst_conf = max(worst_conf, conformality_residual(a, y))
        worst_cocycle = max(worst_cocycle, cocycle_residual(a, b, y))

    worst_pair = 0.0
    for _ in range(max(2, args.samples // 3)):
        h = random_band_limited_field(rng, n)
        k = random_band_limited_field(rng, n)
        a = random_moebius(rng, n, args.rapidity)
        worst_pair = max(worst_pair, check_pairing_invariance(h, k, a, grid))

    lin = rng.normal(size=(n, n))
    const = rng.normal(size=n)

    def vec_field(x):
        return const + lin @ x + 0.3 * x * float(x @ x)

    phi = compose_chart(
        chart_translation(np.full(n, 0.7)), chart_inversion(), chart_dilation(1.3)
    )
    pts = rng.normal(size=(50, n)) * 0.8
    worst_cov = check_ahlfors_covariance(vec_field, phi, pts)

    worst_kernel = 0.0
    samples = rng.normal(size=(6, n)) * 0.9
    for fld in sphere_conformal_fields(n):
        for x in samples:
            worst_kernel = max(worst_kernel, float(np.max(np.abs(ahlfors_chart(fld, x)))))

    lines = (
        ("differential conformality", worst_conf, 1e-7),
        ("scale-factor cocycle", worst_cocycle, 1e-7),
        ("weighted-pairing invariance", worst_pair, 1e-6),
        ("conformal Killing covariance", worst_cov, 1e-6),
        ("conformal Killing kernel", worst_kernel, 1e-8),
    )
    print(f"S^{n}, {args.samples} samples, grid order {args.order}, "
          f"rapidity <= {args.rapidity}")
    failed = 0
    for name, value, tol in lines:
        status = "ok" if value <= tol else "FAIL"
        if status == "FAIL":
            failed += 1
        print(f"  {name:<30} {value:.3e}  (tolerance {tol:.0e})  {status}")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())

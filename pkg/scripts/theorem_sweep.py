#!/usr/bin/env python3
"""Full sweep for one smooth positive potential: jumps, boundedness of
n*e_n, Weyl defects on random couplings, and the two-sided count bracket.
Writes the jump table as CSV when --out is given."""

import argparse
import math
import random
import time

from sturmjumps.asymptotics import theorem_check, weyl_defect
from sturmjumps.jumps import jump_sequence
from sturmjumps.liouville_green import count_bracket, lg_data
from sturmjumps.oscillation import AtJumpAmbiguity, count_negative
from sturmjumps.potential import Potential
from sturmjumps.quadrature import integrate_sqrt_v


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--potential", default="2+sin(x)")
    ap.add_argument("--a", type=float, default=0.0)
    ap.add_argument("--b", type=float, default=3.0)
    ap.add_argument("--n-min", type=int, default=10)
    ap.add_argument("--n-max", type=int, default=500)
    ap.add_argument("--weyl-samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    p = Potential.from_formula(args.potential, args.a, args.b)
    report = p.validate()
    print(f"potential {p.source} on ({p.a}, {p.b}): min V = {report.min_v:.4f}, ok = {report.ok}")

    t0 = time.monotonic()
    records = jump_sequence(p, args.n_min, args.n_max, workers=args.threads)
    chk = theorem_check(records)
    print(
        f"jumps n in [{args.n_min}, {args.n_max}] in {time.monotonic() - t0:.1f}s: "
        f"max |n e_n| = {chk.max_n_en:.4f}, tail/head = "
        f"{chk.tail_max_n_en:.4f}/{chk.head_max_n_en:.4f}, consistent = {chk.consistent}"
    )

    d = integrate_sqrt_v(p, p.a, p.b, 1e-12).value
    rng = random.Random(args.seed)
    worst = 0.0
    for _ in range(args.weyl_samples):
        lam = rng.uniform(10.0, 1000.0)
        try:
            worst = max(worst, abs(weyl_defect(p, lam, rtol=1e-9, d_value=d)))
        except AtJumpAmbiguity:
            continue
    print(f"Weyl defect over {args.weyl_samples} random couplings: max |defect| = {worst:.4f}")

    lg = lg_data(p, 512)
    bad = 0
    for k in range(60):
        lam = 1.2 * math.sqrt(lg.c) * (500.0 / (1.2 * math.sqrt(lg.c))) ** (k / 59.0)
        try:
            n = count_negative(p, lam, rtol=1e-9)
        except AtJumpAmbiguity:
            continue
        lower, upper = count_bracket(lg, lam)
        bad += not lower <= n <= upper
    print(f"bracket: D = {lg.d:.6f}, C = {lg.c:.6f}, inclusion violations = {bad}/60")

    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("n,lambda_n,e_n,n_times_e_n\n")
            for r in records:
                fh.write(f"{r.n},{r.lambda_n:.17e},{r.e_n:.17e},{r.n * r.e_n:.17e}\n")
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()

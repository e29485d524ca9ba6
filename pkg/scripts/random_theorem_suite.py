"""Build and verify plain blowup atlases for seeded random centers.

    python scripts/random_theorem_suite.py --count 100 --seed 0
"""

import argparse
import collections
import time

from plainchart.blowup import plain_blowup_atlas, verify_atlas
from plainchart.polycore import to_string
from plainchart.sampling import random_center


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0, help="first seed")
    ap.add_argument("--max-vars", type=int, default=4)
    ap.add_argument("--max-codim", type=int, default=2)
    ap.add_argument("--max-deg", type=int, default=3)
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args()

    failed = collections.Counter()
    total_start = time.perf_counter()
    slowest = (0.0, None)
    for seed in range(args.seed, args.seed + args.count):
        c = random_center(seed, args.max_vars, args.max_codim, args.max_deg)
        start = time.perf_counter()
        report = verify_atlas(plain_blowup_atlas(c))
        elapsed = time.perf_counter() - start
        slowest = max(slowest, (elapsed, seed))
        for check in report.checks:
            failed[check.name] += not check.passed
        if args.verbose or not report.ok:
            status = "ok" if report.ok else "FAILED"
            print(f"seed {seed:4d}  n={c.ring.nvars} r={len(c.subvariety)}  "
                  f"f = {to_string(c.f)}  {elapsed:.2f}s  {status}")
    print(f"{args.count} centers in {time.perf_counter() - total_start:.1f}s "
          f"(slowest: seed {slowest[1]}, {slowest[0]:.2f}s)")
    for name, bad in failed.items():
        print(f"  {name:24s} {args.count - bad}/{args.count} passed")
    return int(any(failed.values()))


if __name__ == "__main__":
    raise SystemExit(main())

"""Write the default sweep of every subcommand as CSV into one directory.

    python scripts/run_sweeps.py --out runs/ [--threads 4] [--only delta1,marc]
"""

import argparse
import sys
import time

from walshtri import cli


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="runs")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--only", default=None, help="comma-separated subcommands")
    args = ap.parse_args(argv)
    names = args.only.split(",") if args.only else list(cli.COMMANDS)
    worst = 0
    for name in names:
        start = time.perf_counter()
        status = cli.main([name, "--sweep", "--threads", str(args.threads), "--output", f"{args.out}/{name}.csv"])
        print(f"{name:12s} exit {status}  {time.perf_counter() - start:7.1f}s", file=sys.stderr)
        worst = max(worst, status)
    return worst


if __name__ == "__main__":
    raise SystemExit(main())

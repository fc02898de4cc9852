"""Run the acceptance suites and print one line per criterion.

    python3 scripts/run_acceptance.py            # all twelve
    python3 scripts/run_acceptance.py 1 7 12     # a subset
"""
import json
import sys
from dataclasses import asdict

from surfacelab.acceptance import run_all


def main(argv):
    which = [int(a) for a in argv] or None
    results = run_all(which)
    for r in results:
        print(f"{r.line()}  ({r.seconds:.1f}s)")
    with open("acceptance-detail.json", "w") as fh:
        json.dump([asdict(r) for r in results], fh, indent=2, default=str)
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))

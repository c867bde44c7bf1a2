"""Run every acceptance check at default parameters and write report.md."""

import argparse
import sys
from pathlib import Path

from percmono.experiments import markdown_report, run_all


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="report.md")
    args = ap.parse_args()
    results = run_all(progress=lambda c: print(c.line(), flush=True))
    Path(args.out).write_text(markdown_report(results))
    print(f"wrote {args.out}")
    return 0 if all(c.passed for c in results) else 1


if __name__ == "__main__":
    sys.exit(main())

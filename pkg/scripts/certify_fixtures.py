"""Certify every fixture, optionally with the numeric oracle, and print a summary table.

Usage:  python scripts/certify_fixtures.py [--numeric] [--grid N] [--json-dir DIR] [--jobs J]
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from abelcert.cli import CertifyFlags, certify_directory
from abelcert.report import dumps

ROOT = Path(__file__).resolve().parents[1]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dir", default=str(ROOT / "fixtures"))
    ap.add_argument("--numeric", action="store_true")
    ap.add_argument("--grid", type=int, default=50)
    ap.add_argument("--jobs", type=int, default=None)
    ap.add_argument("--json-dir", help="write one JSON report per fixture here")
    args = ap.parse_args()
    flags = CertifyFlags(json=False, numeric=args.numeric, grid=args.grid, quiet=True)
    results = certify_directory(args.dir, flags, args.jobs)
    print(f"{'fixture':<22} {'exit':>4}  {'verdict':<20} {'sturm counts':<14} {'seconds':>8}  oracle")
    worst = 0
    for path, outcome in results:
        name = Path(path).stem
        worst = max(worst, outcome.code)
        doc = outcome.document
        if doc is None:
            print(f"{name:<22} {outcome.code:>4}  {'(input error)':<20}")
            continue
        counts = ",".join(str(r["sturm_count"]) for r in doc["k_records"]) or "-"
        seconds = sum(doc["timings"].values())
        oracle = doc["oracle"]
        if oracle is None:
            note = "-"
        elif oracle.get("skipped"):
            note = f"skipped ({oracle['skipped']})"
        else:
            note = f"sign constant {oracle['sign_constant']}" + ("  INCONSISTENT" if oracle["inconsistent"] else "")
        print(f"{name:<22} {outcome.code:>4}  {doc['verdict']:<20} {counts:<14} {seconds:>8.2f}  {note}")
        if args.json_dir:
            out = Path(args.json_dir)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{name}.json").write_text(dumps(doc))
    return worst


if __name__ == "__main__":
    sys.exit(main())

"""Run the acceptance suite and print one PASS/FAIL line per criterion.

Usage:  python scripts/run_acceptance.py [extra pytest args]
"""
from __future__ import annotations

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def main() -> int:
    cmd = [sys.executable, "-m", "pytest", "-q", str(ROOT / "tests" / "test_acceptance.py"), *sys.argv[1:]]
    return subprocess.call(cmd, cwd=ROOT)


if __name__ == "__main__":
    sys.exit(main())

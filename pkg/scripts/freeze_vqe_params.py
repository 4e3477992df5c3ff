"""Regenerate the shipped VQE parameter table for J = h = 1."""

from __future__ import annotations

import json
import sys
from pathlib import Path

from qbk.benchmarks.vqe import PARAMS_TABLE, optimize_vqe


def main(max_n: int = 8) -> None:
    table = {}
    for n in range(2, max_n + 1):
        thetas, energy = optimize_vqe(n)
        table[str(n)] = {"thetas": thetas, "energy": energy}
        print(n, energy, flush=True)
    PARAMS_TABLE.write_text(json.dumps(table, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:]))

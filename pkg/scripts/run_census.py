"""Run the matched-graph census and list the non-member embeddings.

    python scripts/run_census.py --m 3
    python scripts/run_census.py --m 5 --mode sample --count 500 --seed 1
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from twofactor.census import CensusConfig, run_census
from twofactor.plane_graph import write_graph
from twofactor.resolution import in_family_G


@dataclass
class Settings:
    census: CensusConfig
    witness_dir: Path | None = None


def parse_args() -> Settings:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--m", type=int, default=3, help="number of matching edges")
    p.add_argument("--mode", choices=("exhaustive", "sample"), default="exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--witness-dir", type=Path, help="write non-member graphs here")
    a = p.parse_args()
    return Settings(CensusConfig(a.m, a.mode, a.seed, a.count), a.witness_dir)


def main() -> None:
    s = parse_args()
    t0 = time.perf_counter()
    rep = run_census(s.census)
    for line in rep.lines():
        print(line)
    for k, g in enumerate(rep.witnesses):
        print(f"witness {k} {in_family_G(g).witness.line()}")
        if s.witness_dir:
            s.witness_dir.mkdir(parents=True, exist_ok=True)
            (s.witness_dir / f"census-m{s.census.m}-{k}.tfg").write_text(write_graph(g), encoding="utf-8")
    print(f"elapsed {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()

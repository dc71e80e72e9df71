"""Per-graph table over the corpus: membership, polynomial, six-cycle results and butterfly flips.

The ``flips`` columns come from the GF(2) system of butterfly flips: ``literal``
says whether the run-pair matching already closes every index-3 face,
``symmetric`` and ``chiral`` whether a matching invariant under the graph's
automorphisms (with or without reflections) could.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

from twofactor.corpus import LARGE_LINKS, WEB_LINKS, corpus, web_items
from twofactor.invariants import two_factor_polynomial
from twofactor.moduli import analyze_flips, verify_six_cycles
from twofactor.resolution import in_family_G


@dataclass
class ReportConfig:
    large: bool = False  # include the five-crossing links
    only_failing: bool = False


@dataclass
class Row:
    name: str
    vertices: int
    member: bool
    poly: str
    faces3: int
    literal_failures: int
    wrong_failures: int
    butterflies: int
    rank: int
    symmetric: bool
    chiral: bool


def row_for(name, g) -> Row:
    member = in_family_G(g).member
    lit = verify_six_cycles(g) if member else None
    wrong = verify_six_cycles(g, wrong=True) if member else None
    fl = analyze_flips(g) if member else None
    return Row(
        name, len(g.vertices), member, str(two_factor_polynomial(g)),
        len(lit.rows) if lit else 0,
        len(lit.failures) if lit else 0,
        len(wrong.failures) if wrong else 0,
        len(fl.butterflies) if fl else 0,
        fl.rank if fl else 0,
        bool(fl and fl.symmetric_ok),
        bool(fl and fl.chiral_ok),
    )


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--large", action="store_true", help="add every flattening of 5_1 and 5_2")
    p.add_argument("--only-failing", action="store_true")
    a = p.parse_args()
    cfg = ReportConfig(a.large, a.only_failing)

    items = corpus(links=WEB_LINKS) + (web_items(LARGE_LINKS) if cfg.large else [])
    out = csv.writer(sys.stdout)
    out.writerow(list(Row.__dataclass_fields__))
    for it in items:
        r = row_for(it.name, it.graph)
        if cfg.only_failing and not r.literal_failures:
            continue
        out.writerow([int(x) if isinstance(x, bool) else x for x in r.__dict__.values()])


if __name__ == "__main__":
    main()

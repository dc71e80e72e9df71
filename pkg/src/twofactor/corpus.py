"""The test corpus: hand-made graphs from ``data/graphs`` and every flattening of the small links."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from .plane_graph import MatchedGraph, load_graph
from .resolution import all_states, state_str
from .webs import LinkDiagram, flatten_web, load_pd

DATA = Path(os.environ.get("TF_DATA", Path(__file__).resolve().parents[2] / "data"))

GRAPHS = ("theta", "L2", "K4-af", "K4-bd", "K4-ce", "prism")
WEB_LINKS = ("trefoil", "hopf", "fig8")
LARGE_LINKS = ("5_1", "5_2")


@dataclass(frozen=True)
class CorpusItem:
    name: str
    graph: MatchedGraph
    source: str  # "graph" or the link name


def load_link(name: str, data: Path = DATA) -> LinkDiagram:
    return load_pd(data / "links" / f"{name}.pd")


def graph_items(data: Path = DATA, names=GRAPHS) -> list[CorpusItem]:
    return [CorpusItem(n, load_graph(data / "graphs" / f"{n}.tfg"), "graph") for n in names]


def web_items(links=WEB_LINKS, data: Path = DATA) -> list[CorpusItem]:
    """One item per connected component of every flattening that has a matching edge."""
    out = []
    for name in links:
        link = load_link(name, data)
        for f in all_states(link.n):
            parts = flatten_web(link, f).parts
            for k, g in enumerate(parts):
                suffix = "" if len(parts) == 1 else f".{k}"
                out.append(CorpusItem(f"{name}-{state_str(f)}{suffix}", g, name))
    return out


def corpus(data: Path = DATA, links=WEB_LINKS) -> list[CorpusItem]:
    return graph_items(data) + web_items(links, data)

"""Colored directed multigraphs of constant outdegree and their link to mapping laws.

A road coloring with d colors gives one self-map per color: the map sends each
site along its road of that color.  Conversely a mapping law with support
``s_1..s_d`` yields roads ``a^(x,k)`` from x to ``s_k(x)`` colored k.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _graph
from .errors import InvalidColoring, SearchSpaceTooLarge, ValidationError
from .mapping import Mapping, MappingLaw, law_from_pairs
from .sync import find_sync_word

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Road:
    id: str
    source: int
    target: int


@dataclass(frozen=True)
class RoadGraph:
    sites: tuple[str, ...]
    roads: tuple[Road, ...]

    @property
    def n(self) -> int:
        return len(self.sites)

    def outdegrees(self) -> list[int]:
        out = [0] * self.n
        for a in self.roads:
            out[a.source] += 1
        return out

    def adjacency(self) -> list[list[int]]:
        adj: list[set[int]] = [set() for _ in self.sites]
        for a in self.roads:
            adj[a.source].add(a.target)
        return [sorted(s) for s in adj]

    def road(self, road_id: str) -> Road:
        for a in self.roads:
            if a.id == road_id:
                return a
        raise InvalidColoring(f"unknown road {road_id!r}")


@dataclass(frozen=True)
class RoadColoring:
    """``classes[k]`` holds the road ids painted with color k (0-based)."""

    classes: tuple[tuple[str, ...], ...]

    @property
    def d(self) -> int:
        return len(self.classes)

    def color_of(self) -> dict[str, int]:
        return {rid: k for k, ids in enumerate(self.classes) for rid in ids}


ColorWord = tuple[int, ...]


def make_graph(sites: Sequence, roads: Sequence[tuple[str, int, int]]) -> RoadGraph:
    sites = tuple(str(s) for s in sites)
    if len(set(sites)) != len(sites):
        raise ValidationError("duplicate site label")
    built = tuple(Road(str(rid), int(i), int(t)) for rid, i, t in roads)
    if len({a.id for a in built}) != len(built):
        raise ValidationError("duplicate road id")
    for a in built:
        if not (0 <= a.source < len(sites) and 0 <= a.target < len(sites)):
            raise ValidationError(f"road {a.id} leaves the site set")
    return RoadGraph(sites, built)


def road_id(site: str, k: int) -> str:
    return f"a^({site},{k + 1})"


def from_mapping_law(law: MappingLaw | Sequence[Mapping], states: Sequence[str] | None = None):
    """Graph, coloring and color masses induced by a law (or a bare list of maps).

    Roads are listed color by color; for a bare list of maps the masses are None.
    """
    if isinstance(law, MappingLaw):
        maps, states, probs = law.support, law.states, law.probs
    else:
        maps = [tuple(m) for m in law]
        states = tuple(states or (str(i + 1) for i in range(len(maps[0]))))
        probs = None
    roads, classes = [], []
    for k, m in enumerate(maps):
        ids = []
        for x, y in enumerate(m):
            rid = road_id(states[x], k)
            roads.append((rid, x, y))
            ids.append(rid)
        classes.append(tuple(ids))
    return make_graph(states, roads), RoadColoring(tuple(classes)), probs


def _validate(g: RoadGraph, C: RoadColoring) -> list[list[Road]]:
    """Per color, the road leaving each site; raises InvalidColoring otherwise."""
    seen: dict[str, int] = {}
    table: list[list[Road]] = []
    for k, ids in enumerate(C.classes):
        row: list[Road | None] = [None] * g.n
        for rid in ids:
            if rid in seen:
                raise InvalidColoring(f"road {rid} has colors {seen[rid] + 1} and {k + 1}")
            seen[rid] = k
            a = g.road(rid)
            if row[a.source] is not None:
                raise InvalidColoring(f"color {k + 1} has two roads leaving {g.sites[a.source]}")
            row[a.source] = a
        missing = [g.sites[x] for x, a in enumerate(row) if a is None]
        if missing:
            raise InvalidColoring(f"color {k + 1} has no road leaving {', '.join(missing)}")
        table.append(row)
    uncolored = [a.id for a in g.roads if a.id not in seen]
    if uncolored:
        raise InvalidColoring(f"uncolored roads: {', '.join(uncolored)}")
    return table


def to_mappings(g: RoadGraph, C: RoadColoring) -> list[Mapping]:
    return [tuple(a.target for a in row) for row in _validate(g, C)]


def is_sync_coloring(g: RoadGraph, C: RoadColoring) -> ColorWord | None:
    """A color word along which all paths end at one site, or None."""
    word = find_sync_word(to_mappings(g, C))
    return None if word is None else word.indices


def follow(g: RoadGraph, C: RoadColoring, word: Sequence[int]) -> set[int]:
    """Terminal sites of all paths along ``word`` (colors read left to right)."""
    table = _validate(g, C)
    ends = set()
    for start in range(g.n):
        x = start
        for k in word:
            x = table[k][x].target
        ends.add(x)
    return ends


def graph_properties(g: RoadGraph) -> dict[str, bool]:
    adj = g.adjacency()
    out = g.outdegrees()
    return {
        "constant_outdegree": len(set(out)) == 1,
        "strongly_connected": _graph.is_strongly_connected(adj),
        "aperiodic": all(_graph.period(adj, x) == 1 for x in range(g.n)),
    }


def brute_force_sync_coloring(g: RoadGraph, cap: int = 10**6) -> RoadColoring | None:
    """First synchronizing coloring in lexicographic order, or None.

    Site by site, every assignment of the d outgoing roads to the d colors is
    tried.  Exhausting the search on a strongly connected aperiodic graph
    would contradict Trahtman's theorem and is logged as an anomaly.
    """
    out = g.outdegrees()
    if len(set(out)) != 1:
        raise ValidationError("road colorings need constant outdegree")
    d = out[0]
    total = math.factorial(d) ** g.n
    if total > cap:
        raise SearchSpaceTooLarge(f"{total} colorings exceed the cap of {cap}")
    leaving = [[a for a in g.roads if a.source == x] for x in range(g.n)]
    per_site = [list(itertools.permutations(rs)) for rs in leaving]
    for choice in itertools.product(*per_site):
        maps = [tuple(choice[x][k].target for x in range(g.n)) for k in range(d)]
        if find_sync_word(maps) is not None:
            classes = tuple(tuple(choice[x][k].id for x in range(g.n)) for k in range(d))
            return RoadColoring(classes)
    props = graph_properties(g)
    if all(props.values()):
        log.warning("no sync coloring found although the graph meets Trahtman's hypotheses")
    return None


def color_law(g: RoadGraph, C: RoadColoring, probs: Sequence[Fraction] | None = None) -> MappingLaw:
    """Re-form a mapping law from a coloring; colors get equal mass unless ``probs`` is given.

    Colors inducing the same map are merged.
    """
    maps = to_mappings(g, C)
    if probs is None:
        probs = [Fraction(1, len(maps))] * len(maps)
    return law_from_pairs(g.sites, zip(maps, probs))


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: RoadGraph, C: RoadColoring | None = None) -> str:
    """DOT digraph with one edge per road, labelled by road id.

    Sites come first in site order, then roads in graph order.  Colored roads
    carry ``color=<k>`` (1-based) within the ``set19`` color scheme.
    """
    colors = C.color_of() if C is not None and C.classes else {}
    lines = ["digraph roads {"]
    lines += [f"  {_q(s)};" for s in g.sites]
    for a in g.roads:
        attrs = [f"label={_q(a.id)}"]
        if a.id in colors:
            attrs.append(f"colorscheme=set19, color={colors[a.id] + 1}")
        lines.append(f"  {_q(g.sites[a.source])} -> {_q(g.sites[a.target])} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"

"""JSON file formats for chains, mapping laws and road graphs.

Probabilities travel as strings (``"1/2"``) so nothing passes through floats.
Mapping images, sync-word positions and colors are 1-based on disk.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

from ._exact import format_fraction
from .chain import TransitionMatrix, validate_chain
from .errors import ValidationError
from .mapping import MappingLaw, make_law
from .road import RoadColoring, RoadGraph, make_graph
from .sync import SyncWord, check_sync_word


def read_json(path: str | Path) -> Any:
    """Load JSON from a path, or stdin for ``"-"``; syntax errors become ValidationError."""
    try:
        text = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _field(data: Any, key: str, what: str) -> Any:
    if not isinstance(data, dict) or key not in data:
        raise ValidationError(f"{what} JSON needs a {key!r} field")
    return data[key]


def chain_from_json(data: Any) -> TransitionMatrix:
    states = _field(data, "states", "chain")
    rows = _field(data, "rows", "chain")
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ValidationError("chain 'rows' must be a list of lists")
    return validate_chain(states, rows)


def chain_to_json(Q: TransitionMatrix) -> dict:
    return {
        "states": list(Q.states),
        "rows": [[format_fraction(q) for q in row] for row in Q.rows],
    }


def law_from_json(data: Any) -> tuple[MappingLaw, SyncWord | None]:
    states = [str(s) for s in _field(data, "states", "law")]
    support = _field(data, "support", "law")
    probs = _field(data, "probs", "law")
    try:
        maps = [[int(v) - 1 for v in m] for m in support]
    except (TypeError, ValueError) as exc:
        raise ValidationError("law 'support' must hold 1-based integer image arrays") from exc
    law = make_law(states, maps, probs)
    word = None
    if data.get("sync_word") is not None:
        target = str(data.get("target", ""))
        if target not in states:
            raise ValidationError(f"sync word target {target!r} is not a state")
        word = SyncWord(tuple(int(i) - 1 for i in data["sync_word"]), states.index(target))
        if not check_sync_word(law, word):
            raise ValidationError("sync_word does not collapse the state set onto its target")
    return law, word


def law_to_json(law: MappingLaw, word: SyncWord | None = None) -> dict:
    out: dict[str, Any] = {
        "states": list(law.states),
        "support": [[v + 1 for v in m] for m in law.support],
        "probs": [format_fraction(p) for p in law.probs],
    }
    if word is not None:
        out["sync_word"] = [i + 1 for i in word.indices]
        out["target"] = law.states[word.target]
    return out


def graph_from_json(data: Any) -> tuple[RoadGraph, RoadColoring | None]:
    """Graph plus its coloring when every road carries a ``color`` (1-based)."""
    sites = [str(s) for s in _field(data, "sites", "graph")]
    roads = _field(data, "roads", "graph")
    index = {s: i for i, s in enumerate(sites)}
    parsed = []
    colors: dict[str, int] = {}
    for r in roads:
        try:
            rid, src, dst = str(r["id"]), index[str(r["from"])], index[str(r["to"])]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad road entry {r!r}") from exc
        parsed.append((rid, src, dst))
        if r.get("color") is not None:
            colors[rid] = int(r["color"])
    g = make_graph(sites, parsed)
    if not colors:
        return g, None
    if len(colors) != len(parsed) or min(colors.values()) < 1:
        raise ValidationError("either every road has a positive color or none does")
    d = max(colors.values())
    classes = tuple(tuple(rid for rid, _, _ in parsed if colors[rid] == k + 1) for k in range(d))
    return g, RoadColoring(classes)


def graph_to_json(g: RoadGraph, C: RoadColoring | None = None) -> dict:
    colors = C.color_of() if C is not None else {}
    roads = []
    for a in g.roads:
        entry: dict[str, Any] = {"id": a.id, "from": g.sites[a.source], "to": g.sites[a.target]}
        if a.id in colors:
            entry["color"] = colors[a.id] + 1
        roads.append(entry)
    return {"sites": list(g.sites), "roads": roads}

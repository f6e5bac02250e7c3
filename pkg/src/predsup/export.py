"""JSON and DOT forms of arenas and control structures.

JSON layout (``kind`` is ``"control_structure"`` or ``"arena"``)::

    {
      "kind": ...,
      "horizon": 2,
      "initials": [0],                       # decision node ids
      "decision_nodes": [
        {"id": 0, "entries": [["0", "NNN"]], "patterns": [0]}
      ],
      "observation_nodes": [
        {"id": 0, "source": 0, "decision": ["b", ...],
         "ur_part": [["0", "NNN"], ["3", "NNU"], ...],
         "obs_parts": {"o1": [["5", "NYN"], ["6", "NNN"]]},
         "edges": {"o1": 1}}
      ]
    }

A control structure has exactly one pattern per decision node and one
initial node; an empty structure (no solution) has no nodes at all.  Node
ids follow discovery order, so equal inputs give byte-identical files.
"""

from __future__ import annotations

import json

from .automaton import Automaton
from .infostate import InfoState, Pattern
from .prediction import format_vector, vec
from .synthesis import Arena, ControlStructure


def _entries(G: Automaton, info: InfoState) -> list:
    return [[G.name(x), format_vector(v)] for x, v in info]


def _info(G: Automaton, entries) -> InfoState:
    return InfoState.of((G.index(x), vec(v)) for x, v in entries)


def _graph_to_dict(G, kind, horizon, initials, nodes, patterns_of, edges_of) -> dict:
    node_id = {n: i for i, n in enumerate(nodes)}
    pats = []
    for n in nodes:
        for p in patterns_of(n):
            if p not in pats:
                pats.append(p)
    pat_id = {p: i for i, p in enumerate(pats)}
    return {
        "kind": kind,
        "horizon": horizon,
        "initials": [node_id[i] for i in initials],
        "decision_nodes": [
            {
                "id": node_id[n],
                "entries": _entries(G, n),
                "patterns": [pat_id[p] for p in patterns_of(n)],
            }
            for n in nodes
        ],
        "observation_nodes": [
            {
                "id": pat_id[p],
                "source": node_id[p.source],
                "decision": G.sort_events(p.decision),
                "ur_part": _entries(G, p.ur_part),
                "obs_parts": {ev: _entries(G, part) for ev, part in p.obs_parts},
                "edges": {ev: node_id[t] for ev, t in edges_of(p).items()},
            }
            for p in pats
        ],
    }


def structure_to_dict(G: Automaton, structure: ControlStructure | None, horizon: int | None = None) -> dict:
    if structure is None:
        return {"kind": "control_structure", "horizon": horizon, "initials": [],
                "decision_nodes": [], "observation_nodes": []}
    nodes = _ordered_nodes(structure)
    return _graph_to_dict(
        G, "control_structure", structure.horizon, [structure.initial], nodes,
        lambda n: [structure.choice[n]], lambda p: structure.successors[p],
    )


def _ordered_nodes(structure: ControlStructure) -> list:
    """Decision nodes in breadth-first order from the initial node."""
    order = [structure.initial]
    i = 0
    while i < len(order):
        p = structure.choice[order[i]]
        for ev in p.events():
            t = structure.successors[p][ev]
            if t not in order:
                order.append(t)
        i += 1
    return order


def arena_to_dict(G: Automaton, arena: Arena, horizon: int) -> dict:
    return _graph_to_dict(
        G, "arena", horizon, arena.initials, list(arena.decision_nodes),
        lambda n: arena.decision_edges.get(n, []),
        lambda p: arena.observation_edges.get(p, {}),
    )


def structure_from_dict(G: Automaton, data: dict) -> ControlStructure | None:
    """Rebuild a control structure; ``None`` for an empty one."""
    if data.get("kind") != "control_structure":
        raise ValueError(f"expected a control_structure, got {data.get('kind')!r}")
    if not data["decision_nodes"]:
        return None
    nodes = {d["id"]: _info(G, d["entries"]) for d in data["decision_nodes"]}
    pats = {}
    succ = {}
    for o in data["observation_nodes"]:
        decision = frozenset(o["decision"])
        if not G.is_valid_decision(decision):
            raise ValueError(f"observation node {o['id']}: invalid control decision")
        parts = tuple(
            (ev, _info(G, o["obs_parts"][ev])) for ev in G.sort_events(o["obs_parts"])
        )
        p = Pattern(nodes[o["source"]], decision, _info(G, o["ur_part"]), parts)
        pats[o["id"]] = p
        succ[p] = {ev: nodes[t] for ev, t in o["edges"].items()}
    choice = {}
    for d in data["decision_nodes"]:
        if len(d["patterns"]) != 1:
            raise ValueError(f"decision node {d['id']} must have exactly one pattern")
        choice[nodes[d["id"]]] = pats[d["patterns"][0]]
    if len(data["initials"]) != 1:
        raise ValueError("a control structure has exactly one initial node")
    return ControlStructure(G, data["horizon"], nodes[data["initials"][0]], choice, succ)


def dumps(data: dict) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def load_structure(G: Automaton, path) -> ControlStructure | None:
    with open(path, encoding="utf-8") as fh:
        return structure_from_dict(G, json.load(fh))


# ---------------------------------------------------------------------------
# DOT


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(G: Automaton, data: dict, name: str | None = None) -> str:
    """Render a structure or arena dict.  Decision nodes are rounded boxes,
    observation nodes plain boxes; initial nodes get a bold border."""
    name = name or data.get("kind", "graph")
    lines = [f"digraph {name} {{"]
    if data["decision_nodes"]:
        lines.append("  rankdir=TB;")
        lines.append('  node [fontname="monospace"];')
    initials = set(data["initials"])

    def label(entries):
        return "{" + ", ".join(f"({x},{v})" for x, v in entries) + "}"

    for d in data["decision_nodes"]:
        style = "rounded,bold" if d["id"] in initials else "rounded"
        lines.append(f"  d{d['id']} [shape=box, style={_quote(style)}, label={_quote(label(d['entries']))}];")
    for o in data["observation_nodes"]:
        lines.append(f"  p{o['id']} [shape=box, label={_quote(label(o['ur_part']))}];")
    for d in data["decision_nodes"]:
        for pid in d["patterns"]:
            o = data["observation_nodes"][pid]
            lines.append(f"  d{d['id']} -> p{pid} [label={_quote(G.format_decision(o['decision']))}];")
    for o in data["observation_nodes"]:
        for ev in G.sort_events(o["edges"]):
            lines.append(f"  p{o['id']} -> d{o['edges'][ev]} [label={_quote(ev)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"

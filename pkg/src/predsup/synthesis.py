"""Supervisor synthesis as a safety game over information states.

``expand`` builds the arena of live, safe and consistent decision and
observation nodes, ``prune`` removes incomplete nodes until nothing changes,
and ``extract`` picks a deterministic control structure out of what is left.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .automaton import Automaton
from .infostate import (
    InfoState,
    Pattern,
    enumerate_patterns,
    feasible_vectors,
    format_infostate,
    format_pattern,
    is_live,
    is_safe,
)
from .prediction import PropertySpec, evaluate, iter_vectors, membership, u_leq, u_less

log = logging.getLogger(__name__)


class NodeCapExceeded(RuntimeError):
    def __init__(self, cap: int, decision_nodes: int, observation_nodes: int):
        self.cap = cap
        self.decision_nodes = decision_nodes
        self.observation_nodes = observation_nodes
        super().__init__(
            f"arena exceeded node cap {cap} "
            f"({decision_nodes} decision nodes, {observation_nodes} observation nodes)"
        )


class IncomparableError(ValueError):
    """Raised when ordering information states over different state sets."""


@dataclass
class Arena:
    """Bipartite game graph.

    ``decision_edges[i]`` lists the patterns reachable from decision node
    ``i`` (the control decision is stored on the pattern itself), and
    ``observation_edges[p]`` maps each observable event of ``p`` that leads
    to a safe information state onto that state.  Dicts double as ordered
    sets.
    """

    decision_nodes: dict = field(default_factory=dict)
    observation_nodes: dict = field(default_factory=dict)
    decision_edges: dict = field(default_factory=dict)
    observation_edges: dict = field(default_factory=dict)
    initials: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def sizes(self) -> dict:
        return {
            "decision_nodes": len(self.decision_nodes),
            "observation_nodes": len(self.observation_nodes),
            "decision_edges": sum(len(v) for v in self.decision_edges.values()),
            "observation_edges": sum(len(v) for v in self.observation_edges.values()),
            "initials": len(self.initials),
        }

    def decisions_at(self, node: InfoState) -> list[frozenset]:
        out = []
        for p in self.decision_edges.get(node, ()):
            if p.decision not in out:
                out.append(p.decision)
        return out

    def incomplete(self) -> tuple[set, set]:
        bad_d = {i for i in self.decision_nodes if not self.decision_edges.get(i)}
        bad_o = {
            p for p in self.observation_nodes
            if len(self.observation_edges.get(p, {})) != len(p.obs_parts)
        }
        return bad_d, bad_o


# ---------------------------------------------------------------------------
# step 1


def initial_candidates(G: Automaton, spec: PropertySpec) -> list[InfoState]:
    """Singleton information states at the initial plant state that are
    consistent at instant 0 and safe on their own."""
    head = membership({G.initial}, spec.critical)
    return [
        InfoState.of({G.initial: v})
        for v in iter_vectors(spec.horizon, head)
        if evaluate(spec, [v])
    ]


def expand(
    G: Automaton,
    spec: PropertySpec,
    node_cap: int | None = None,
    lookahead: bool = True,
) -> Arena:
    """Depth-first expansion from every initial candidate.

    With ``lookahead`` the vectors of observation parts are drawn from
    :func:`feasible_vectors` instead of from every vector with the right
    instant-0 mark.  Patterns skipped that way are exactly ones whose
    successors cannot survive pruning, so the pruned arena is unchanged while
    the expanded one stays small enough to build.
    """
    arena = Arena()
    arena.initials = initial_candidates(G, spec)
    decisions = G.control_decisions()
    feasible = feasible_vectors(G, spec) if lookahead else None
    stats = {"nodes_expanded": 0, "patterns_enumerated": 0}

    def check_cap():
        if node_cap is not None and len(arena.decision_nodes) + len(arena.observation_nodes) > node_cap:
            raise NodeCapExceeded(node_cap, len(arena.decision_nodes), len(arena.observation_nodes))

    def add_decision_node(node):
        arena.decision_nodes[node] = None
        check_cap()
        stack.append(node)

    stack: list[InfoState] = []
    for init in reversed(arena.initials):
        add_decision_node(init)

    while stack:
        node = stack.pop()
        stats["nodes_expanded"] += 1
        edges = arena.decision_edges.setdefault(node, [])
        for gamma in decisions:
            if not is_live(G, node, gamma):
                continue
            for pattern in enumerate_patterns(G, node, gamma, spec, feasible):
                stats["patterns_enumerated"] += 1
                edges.append(pattern)
                if pattern in arena.observation_nodes:
                    continue
                arena.observation_nodes[pattern] = None
                check_cap()
                succ = arena.observation_edges.setdefault(pattern, {})
                for ev, target in pattern.obs_parts:
                    if not is_safe(target, spec):
                        continue
                    succ[ev] = target
                    if target not in arena.decision_nodes:
                        add_decision_node(target)
    arena.stats = stats
    log.debug("expanded arena: %s", arena.sizes())
    return arena


# ---------------------------------------------------------------------------
# step 2


def prune(arena: Arena) -> Arena:
    """Greatest sub-arena without incomplete nodes.

    Removal proceeds in rounds: every node that is incomplete in the current
    graph is removed at once, which may make its predecessors incomplete in
    the next round.
    """
    dec_edges = {i: list(arena.decision_edges.get(i, ())) for i in arena.decision_nodes}
    obs_edges = {p: dict(arena.observation_edges.get(p, {})) for p in arena.observation_nodes}

    # reverse edges
    into_dec: dict[InfoState, list[tuple[Pattern, str]]] = {}
    for p, succ in obs_edges.items():
        for ev, i in succ.items():
            into_dec.setdefault(i, []).append((p, ev))
    into_obs: dict[Pattern, list[InfoState]] = {}
    for i, pats in dec_edges.items():
        for p in pats:
            into_obs.setdefault(p, []).append(i)

    alive_d = set(dec_edges)
    alive_o = set(obs_edges)
    bad_d = {i for i in alive_d if not dec_edges[i]}
    bad_o = {p for p in alive_o if len(obs_edges[p]) != len(p.obs_parts)}
    rounds = 0
    while bad_d or bad_o:
        rounds += 1
        alive_d -= bad_d
        alive_o -= bad_o
        next_d, next_o = set(), set()
        for p in bad_o:
            for i in into_obs.get(p, ()):
                if i in alive_d:
                    dec_edges[i] = [q for q in dec_edges[i] if q != p]
                    if not dec_edges[i]:
                        next_d.add(i)
        for i in bad_d:
            for p, ev in into_dec.get(i, ()):
                if p in alive_o:
                    obs_edges[p].pop(ev, None)
                    next_o.add(p)
        bad_d, bad_o = next_d, next_o

    # keep only what the surviving initial nodes can still reach
    reach_d: set = set()
    reach_o: set = set()
    stack = [i for i in arena.initials if i in alive_d]
    while stack:
        i = stack.pop()
        if i in reach_d:
            continue
        reach_d.add(i)
        for p in dec_edges[i]:
            if p in alive_o and p not in reach_o:
                reach_o.add(p)
                stack.extend(obs_edges[p].values())

    out = Arena()
    out.decision_nodes = {i: None for i in arena.decision_nodes if i in reach_d}
    out.observation_nodes = {p: None for p in arena.observation_nodes if p in reach_o}
    out.decision_edges = {
        i: [p for p in dec_edges[i] if p in alive_o] for i in out.decision_nodes
    }
    out.observation_edges = {p: dict(obs_edges[p]) for p in out.observation_nodes}
    out.initials = [i for i in arena.initials if i in alive_d]
    out.stats = dict(arena.stats, prune_rounds=rounds)
    return out


# ---------------------------------------------------------------------------
# orders


def _check_domains(a: InfoState, b: InfoState):
    if a.states() != b.states():
        raise IncomparableError("information states over different plant states are not ordered")


def state_order_leq(a: InfoState, b: InfoState) -> bool:
    _check_domains(a, b)
    return all(u_leq(v, w) for (_, v), (_, w) in zip(a, b))


def state_order_less(a: InfoState, b: InfoState) -> bool:
    return state_order_leq(a, b) and any(u_less(v, w) for (_, v), (_, w) in zip(a, b))


def pattern_order_leq(p: Pattern, q: Pattern) -> bool:
    if p.events() != q.events():
        raise IncomparableError("patterns with different observation events are not ordered")
    return state_order_leq(p.ur_part, q.ur_part) and all(
        state_order_leq(a, b) for (_, a), (_, b) in zip(p.obs_parts, q.obs_parts)
    )


def pattern_order_less(p: Pattern, q: Pattern) -> bool:
    return pattern_order_leq(p, q) and (
        state_order_less(p.ur_part, q.ur_part)
        or any(state_order_less(a, b) for (_, a), (_, b) in zip(p.obs_parts, q.obs_parts))
    )


def maximal_states(states: Sequence[InfoState]) -> list[InfoState]:
    """Elements not strictly below another element over the same plant states."""
    out = []
    for a in states:
        if not any(a.states() == b.states() and state_order_less(a, b) for b in states):
            out.append(a)
    return out


def _decision_key(decision: frozenset) -> list[str]:
    return sorted(decision)


# ---------------------------------------------------------------------------
# step 3


@dataclass
class ControlStructure:
    """Deterministic IS-based control structure.

    ``choice`` maps every decision node to its unique outgoing pattern (and
    thereby decision); ``successors`` maps every pattern to its observation
    successors.  Both dicts are in discovery order.  Not to be mutated once
    built.
    """

    automaton: Automaton
    horizon: int
    initial: InfoState
    choice: dict
    successors: dict

    @property
    def decision_nodes(self) -> list[InfoState]:
        return list(self.choice)

    @property
    def observation_nodes(self) -> list[Pattern]:
        return list(self.successors)

    # finite-memory supervisor interface: memory is the decision node

    @property
    def initial_memory(self) -> InfoState:
        return self.initial

    def decision(self, node: InfoState) -> frozenset:
        return self.choice[node].decision

    def step(self, node: InfoState, event: str) -> InfoState:
        return self.successors[self.choice[node]][event]

    def node_after(self, observation: Iterable[str]) -> InfoState:
        node = self.initial
        seen = []
        for ev in observation:
            try:
                node = self.step(node, ev)
            except KeyError:
                raise UnrealizableObservation(tuple(seen) + (ev,)) from None
            seen.append(ev)
        return node


class UnrealizableObservation(KeyError):
    def __init__(self, prefix: tuple[str, ...]):
        self.prefix = prefix
        super().__init__(f"observation {' '.join(prefix) or 'ε'} cannot occur under this supervisor")


def _pick_pattern(G: Automaton, patterns: list[Pattern], prefer: frozenset | None = None) -> Pattern:
    decisions = []
    for p in patterns:
        if p.decision not in decisions:
            decisions.append(p.decision)
    maximal = [d for d in decisions if not any(d < e for e in decisions)]
    if prefer is not None:
        if prefer not in maximal:
            raise ValueError(
                f"preferred decision {G.format_decision(prefer)} is not a locally maximal "
                f"choice here; available: {', '.join(G.format_decision(d) for d in maximal)}"
            )
        gamma = prefer
    else:
        gamma = min(maximal, key=_decision_key)
    same = [p for p in patterns if p.decision == gamma]
    top = [p for p in same if not any(pattern_order_less(p, q) for q in same)]
    return min(top, key=lambda p: format_pattern(G, p))


def extract(G: Automaton, arena: Arena, prefer: Iterable[str] | None = None) -> ControlStructure:
    """Deterministic structure from a pruned arena.

    At each decision node the chosen decision is one no other available
    decision strictly contains; among patterns under that decision a
    ``<_U``-maximal one is taken.  Ties go to the smallest sorted event-name
    list and then to the smallest text dump.  ``prefer`` pins the decision at
    the initial node.
    """
    if not arena.initials:
        raise ValueError("arena has no initial decision node")
    prefer = frozenset(prefer) if prefer is not None else None
    horizon = len(arena.initials[0].items[0][1]) - 1

    candidates = sorted(maximal_states(arena.initials), key=lambda i: format_infostate(G, i))
    initial = candidates[0]
    if prefer is not None:
        for cand in candidates:
            if prefer in arena.decisions_at(cand):
                initial = cand
                break

    choice: dict[InfoState, Pattern] = {}
    successors: dict[Pattern, dict[str, InfoState]] = {}
    stack = [initial]
    while stack:
        node = stack.pop()
        if node in choice:
            continue
        pattern = _pick_pattern(G, arena.decision_edges[node], prefer if node == initial else None)
        choice[node] = pattern
        if pattern in successors:
            continue
        succ = {}
        for ev in pattern.events():
            succ[ev] = arena.observation_edges[pattern][ev]
        successors[pattern] = succ
        for ev in reversed(pattern.events()):
            if succ[ev] not in choice:
                stack.append(succ[ev])
    return ControlStructure(G, horizon, initial, choice, successors)


def enumerate_structures(G: Automaton, arena: Arena, limit: int | None = None) -> Iterator[ControlStructure]:
    """Every deterministic structure obtainable from ``arena`` by resolving
    each reachable choice point (initial node, then one edge per decision
    node) in every possible way."""
    if not arena.initials:
        return
    horizon = len(arena.initials[0].items[0][1]) - 1
    count = 0

    def rec(choice: dict, pending: list):
        nonlocal count
        while pending and pending[0] in choice:
            pending = pending[1:]
        if not pending:
            yield dict(choice)
            return
        node = pending[0]
        for pattern in arena.decision_edges[node]:
            choice[node] = pattern
            nxt = [arena.observation_edges[pattern][ev] for ev in pattern.events()]
            yield from rec(choice, pending[1:] + nxt)
            del choice[node]

    for init in arena.initials:
        for choice in rec({}, [init]):
            successors = {}
            for p in choice.values():
                successors[p] = {ev: arena.observation_edges[p][ev] for ev in p.events()}
            yield ControlStructure(G, horizon, init, choice, successors)
            count += 1
            if limit is not None and count >= limit:
                return


class Supervisor:
    """Runs a control structure along an observation sequence."""

    def __init__(self, structure: ControlStructure):
        self.structure = structure
        self.current = structure.initial

    def reset(self):
        self.current = self.structure.initial

    @property
    def decision_now(self) -> frozenset:
        return self.structure.decision(self.current)

    def observe(self, event: str) -> InfoState:
        try:
            self.current = self.structure.step(self.current, event)
        except KeyError:
            raise UnrealizableObservation((event,)) from None
        return self.current

    def decide(self, observation: Iterable[str]) -> frozenset:
        return self.structure.decision(self.structure.node_after(observation))


# ---------------------------------------------------------------------------


@dataclass
class SynthesisResult:
    arena: Arena
    pruned: Arena
    structure: ControlStructure | None

    @property
    def solved(self) -> bool:
        return self.structure is not None

    def summary(self) -> dict:
        G = self.structure.automaton if self.structure else None
        out = {
            "solved": self.solved,
            "arena": self.arena.sizes(),
            "pruned_arena": self.pruned.sizes(),
            "stats": self.pruned.stats,
        }
        if self.structure is not None:
            out["root_decision"] = G.format_decision(self.structure.decision(self.structure.initial))
        return out


def synthesize(
    G: Automaton,
    spec: PropertySpec,
    node_cap: int | None = None,
    prefer: Iterable[str] | None = None,
    lookahead: bool = True,
) -> SynthesisResult:
    """Expand, prune and extract.  ``structure`` is None when no supervisor
    exists."""
    arena = expand(G, spec, node_cap, lookahead)
    pruned = prune(arena)
    structure = extract(G, pruned, prefer) if pruned.initials else None
    return SynthesisResult(arena, pruned, structure)

"""Independent reference implementations used only by the tests.

Each function here is written directly from a definition, with no shared
code path with the library beyond the plant model itself.
"""

from __future__ import annotations

import itertools
import random
from collections import deque

from predsup.automaton import Automaton, Event, observable_reach, unobservable_reach
from predsup.infostate import InfoState, Pattern, check_consistent, check_structure
from predsup.prediction import MARKS, Mark
from predsup.verify import check_property


def k_step_reach(G: Automaton, x: int, k: int) -> frozenset:
    """Plain graph reachability in exactly ``k`` steps, no supervisor."""
    layer = {x}
    for _ in range(k):
        layer = {G.transitions[(p, ev)] for p in layer for ev in G.event_names if (p, ev) in G.transitions}
    return frozenset(layer)


def mark_of(states, critical) -> Mark:
    states = set(states)
    inside = states & set(critical)
    if inside == states:
        return Mark.Y
    return Mark.N if not inside else Mark.U


def all_vectors(H):
    return [tuple(v) for v in itertools.product(MARKS, repeat=H + 1)]


def brute_force_patterns(G: Automaton, info: InfoState, decision, spec, budget: int = 200_000):
    """Every pattern obtained by assigning any vector to every ur/obs state
    and keeping the structurally valid, consistent ones.

    Returns ``None`` when the assignment space exceeds ``budget``.
    """
    decision = frozenset(decision)
    committed = info.as_dict()
    ur = sorted(unobservable_reach(G, committed, decision))
    free_ur = [x for x in ur if x not in committed]
    slots = []
    for ev in G.sort_events(G.observable & decision):
        for y in sorted(observable_reach(G, ur, ev)):
            slots.append((ev, y))
    vectors = all_vectors(spec.horizon)
    n = len(free_ur) + len(slots)
    if len(vectors) ** n > budget:
        return None
    out = set()
    for combo in itertools.product(vectors, repeat=n):
        ur_vecs = dict(committed)
        ur_vecs.update(zip(free_ur, combo[: len(free_ur)]))
        parts = {}
        for (ev, y), v in zip(slots, combo[len(free_ur):]):
            parts.setdefault(ev, {})[y] = v
        p = Pattern(
            info,
            decision,
            InfoState.of(ur_vecs),
            tuple((ev, InfoState.of(parts[ev])) for ev in G.sort_events(parts)),
        )
        if check_structure(G, p) is None and check_consistent(G, p, spec)[0]:
            out.add(p)
    return out


# ---------------------------------------------------------------------------
# supervisors whose memory is the current state estimate


class EstimateSupervisor:
    """Decision is a function of the set of plant states reachable right
    after the last observation."""

    def __init__(self, G: Automaton, table: dict):
        self.G = G
        self.table = table
        self.initial_memory = frozenset({G.initial})

    def decision(self, memory):
        return self.table[memory]

    def step(self, memory, event):
        return observable_reach(self.G, unobservable_reach(self.G, memory, self.table[memory]), event)


def _estimate_successors(G, memory, gamma):
    ur = unobservable_reach(G, memory, gamma)
    out = []
    for ev in G.sort_events(G.observable & gamma):
        nxt = observable_reach(G, ur, ev)
        if nxt:
            out.append(nxt)
    return ur, out


def search_estimate_supervisors(G: Automaton, spec, limit: int = 50_000):
    """Exhaustive search over estimate-memory supervisors.

    Returns ``(found, tried)`` where ``found`` is a satisfying supervisor or
    None, or ``(None, None)`` when more than ``limit`` complete candidates
    would be needed.
    """
    decisions = G.control_decisions()
    tried = 0

    def reachable_unassigned(table):
        start = frozenset({G.initial})
        seen = {start}
        queue = deque([start])
        while queue:
            m = queue.popleft()
            if m not in table:
                return m
            _, nxt = _estimate_successors(G, m, table[m])
            for n in nxt:
                if n not in seen:
                    seen.add(n)
                    queue.append(n)
        return None

    def rec(table):
        nonlocal tried
        m = reachable_unassigned(table)
        if m is None:
            tried += 1
            if tried > limit:
                raise _Budget
            sup = EstimateSupervisor(G, dict(table))
            return sup if check_property(G, sup, spec, depth=0).satisfied else None
        for gamma in decisions:
            ur, _ = _estimate_successors(G, m, gamma)
            if not all(any(ev in gamma for ev, _ in G.successors(x)) for x in ur):
                continue
            table[m] = gamma
            found = rec(table)
            del table[m]
            if found is not None:
                return found
        return None

    try:
        return rec({}), tried
    except _Budget:
        return None, None


class _Budget(Exception):
    pass


# ---------------------------------------------------------------------------
# tiny plant corpus


def tiny_plant(rng: random.Random, n_states: int) -> Automaton:
    """Two controllable events (random observability) and one
    uncontrollable observable event."""
    events = [
        Event("a", rng.random() < 0.5, True),
        Event("b", rng.random() < 0.5, True),
        Event("u", True, False),
    ]
    names = [str(i) for i in range(n_states)]
    trans = {}
    for x in range(n_states):
        for ev in events:
            if rng.random() < 0.5:
                trans[(x, ev.name)] = rng.randrange(n_states)
        if not any(k[0] == x for k in trans):
            trans[(x, rng.choice(events).name)] = rng.randrange(n_states)
    return Automaton(names, events, [(names[x], e, names[y]) for (x, e), y in sorted(trans.items())], "0")

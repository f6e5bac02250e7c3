"""Closed-loop oracle that works straight from the definitions.

Nothing here looks at information states or vectors stored by the
synthesis code.  A supervisor is any object with a finite memory:

* ``initial_memory``
* ``decision(memory) -> frozenset`` of enabled event names
* ``step(memory, event) -> memory`` for observable events

The closed loop is the product of the plant with that memory.  Prediction
vectors are computed from k-step reach sets of the product, and prediction
sets are gathered per observation by an observer over product states.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .automaton import Automaton
from .prediction import PropertySpec, evaluate, format_vector, membership


class UndefinedDecision(RuntimeError):
    """The supervisor has no memory update for an observation that can occur."""

    def __init__(self, string: tuple[str, ...]):
        self.string = string
        super().__init__(
            "supervisor undefined after realizable string " + (" ".join(string) or "ε")
        )


class AllEnabling:
    """The supervisor that never disables anything."""

    initial_memory = None

    def __init__(self, G: Automaton):
        self._all = G.alphabet

    def decision(self, memory) -> frozenset:
        return self._all

    def step(self, memory, event):
        return None


class ClosedLoop:
    """Deterministic product ``S/G``.

    ``labels[i]`` is ``(plant_state, memory)`` for product state ``i``;
    ``delta`` maps ``(i, event)`` to a product state.  Product state 0 is the
    initial one.
    """

    def __init__(self, plant: Automaton, labels: Sequence[tuple[int, Hashable]], delta: dict):
        self.plant = plant
        self.labels = list(labels)
        self.delta = dict(delta)
        order = plant.event_order
        self._succ: list[list[tuple[str, int]]] = [[] for _ in self.labels]
        for (i, ev), j in sorted(self.delta.items(), key=lambda kv: (kv[0][0], order[kv[0][1]])):
            self._succ[i].append((ev, j))

    initial = 0

    def plant_state(self, i: int) -> int:
        return self.labels[i][0]

    def successors(self, i: int) -> list[tuple[str, int]]:
        return self._succ[i]

    def run(self, string: Iterable[str]) -> int:
        i = self.initial
        done = []
        for ev in string:
            nxt = self.delta.get((i, ev))
            if nxt is None:
                raise ValueError(
                    "string " + " ".join(done + [ev]) + " is not in the closed-loop language"
                )
            done.append(ev)
            i = nxt
        return i

    def blocking_states(self) -> list[int]:
        return [i for i in range(len(self.labels)) if not self._succ[i]]

    def __len__(self):
        return len(self.labels)

    @classmethod
    def from_automaton(cls, plant: Automaton, sub: Automaton) -> "ClosedLoop":
        """Wrap a hand-drawn closed-loop automaton whose state names are plant
        state names (e.g. a figure of ``S/G``)."""
        labels = [(plant.index(name), name) for name in sub.states]
        for (i, ev), j in sub.transitions.items():
            x, y = labels[i][0], labels[j][0]
            if plant.step(x, ev) != y:
                raise ValueError(f"transition {sub.name(i)} -{ev}-> {sub.name(j)} is not a plant transition")
        order = list(range(len(labels)))
        order.remove(sub.initial)
        order.insert(0, sub.initial)
        pos = {old: new for new, old in enumerate(order)}
        return cls(
            plant,
            [labels[i] for i in order],
            {(pos[i], ev): pos[j] for (i, ev), j in sub.transitions.items()},
        )


def closed_loop(G: Automaton, sup) -> ClosedLoop:
    """Reachable part of the plant/supervisor product, breadth first in
    canonical event order."""
    start = (G.initial, sup.initial_memory)
    index = {start: 0}
    labels = [start]
    path = {0: ()}
    delta = {}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        x, m = labels[i]
        gamma = sup.decision(m)
        for ev, y in G.successors(x):
            if ev not in gamma:
                continue
            if ev in G.observable:
                try:
                    m2 = sup.step(m, ev)
                except KeyError:
                    raise UndefinedDecision(path[i] + (ev,)) from None
            else:
                m2 = m
            key = (y, m2)
            if key not in index:
                index[key] = len(labels)
                labels.append(key)
                path[index[key]] = path[i] + (ev,)
                queue.append(index[key])
            delta[(i, ev)] = index[key]
    return ClosedLoop(G, labels, delta)


# ---------------------------------------------------------------------------
# predictions


def reach_k(cl: ClosedLoop, s: Iterable[str], k: int) -> frozenset[int]:
    """Plant states reached by continuing ``s`` with exactly ``k`` events."""
    return _reach_from(cl, cl.run(s), k)


def _reach_from(cl: ClosedLoop, i: int, k: int) -> frozenset[int]:
    layer = {i}
    for _ in range(k):
        layer = {j for p in layer for _, j in cl.successors(p)}
    return frozenset(cl.plant_state(p) for p in layer)


def prediction_vector(cl: ClosedLoop, i: int, spec: PropertySpec) -> tuple:
    """Vector of product state ``i``; a blocked reach set yields ``None``."""
    out = []
    for k in range(spec.horizon + 1):
        reach = _reach_from(cl, i, k)
        out.append(membership(reach, spec.critical) if reach else None)
    return tuple(out)


def _observer_step(cl: ClosedLoop, states: frozenset, event: str) -> frozenset:
    """Product states right after ``event``, starting anywhere in the
    unobservable closure of ``states``."""
    G = cl.plant
    closure = set(states)
    stack = list(states)
    while stack:
        i = stack.pop()
        for ev, j in cl.successors(i):
            if ev in G.unobservable and j not in closure:
                closure.add(j)
                stack.append(j)
    return frozenset(
        j for i in closure for ev, j in cl.successors(i) if ev == event
    )


def _observations(cl: ClosedLoop, depth: int | None):
    """Yield ``(alpha, end_states)`` in shortlex order.

    ``end_states`` are the product states reached by strings that end in an
    observable event (or the empty string) and project to ``alpha``.  With
    ``depth=None`` each observer state is expanded only once, which is enough
    to visit every distinct prediction set.
    """
    G = cl.plant
    obs_events = G.sort_events(G.observable)
    start = frozenset({cl.initial})
    queue = deque([((), start)])
    seen = {start}
    while queue:
        alpha, states = queue.popleft()
        yield alpha, states
        if depth is not None and len(alpha) >= depth:
            continue
        for ev in obs_events:
            nxt = _observer_step(cl, states, ev)
            if not nxt:
                continue
            if depth is None:
                if nxt in seen:
                    continue
                seen.add(nxt)
            queue.append((alpha + (ev,), nxt))


def prediction_sets(cl: ClosedLoop, spec: PropertySpec, depth: int) -> dict[tuple, frozenset]:
    """``alpha -> Xi(alpha)`` for every realizable observation of length at
    most ``depth``."""
    cache: dict[int, tuple] = {}

    def vec_of(i):
        if i not in cache:
            cache[i] = prediction_vector(cl, i, spec)
        return cache[i]

    return {
        alpha: frozenset(vec_of(i) for i in states)
        for alpha, states in _observations(cl, depth)
    }


def state_estimates(cl: ClosedLoop, depth: int) -> dict[tuple, frozenset[int]]:
    """``alpha -> {delta(s) : s in O(alpha)}`` as plant states."""
    return {
        alpha: frozenset(cl.plant_state(i) for i in states)
        for alpha, states in _observations(cl, depth)
    }


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class Verdict:
    satisfied: bool
    property_holds: bool
    live: bool
    counterexample: tuple | None = None
    counterexample_set: frozenset | None = None
    blocking_string: tuple | None = None
    table: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def fmt_set(vs):
            return sorted(format_vector(v) for v in vs)

        return {
            "satisfied": self.satisfied,
            "property_holds": self.property_holds,
            "live": self.live,
            "counterexample": None if self.counterexample is None else list(self.counterexample),
            "counterexample_set": None if self.counterexample_set is None else fmt_set(self.counterexample_set),
            "blocking_string": None if self.blocking_string is None else list(self.blocking_string),
            "prediction_sets": [
                {"observation": list(alpha), "vectors": fmt_set(vs)}
                for alpha, vs in self.table.items()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def report(self) -> str:
        def word(alpha):
            return " ".join(alpha) if alpha else "ε"

        lines = ["PASS" if self.satisfied else "FAIL"]
        lines.append(f"live: {'yes' if self.live else 'no'}")
        if self.blocking_string is not None:
            lines.append(f"  blocked after: {word(self.blocking_string)}")
        lines.append(f"property: {'holds' if self.property_holds else 'violated'}")
        if self.counterexample is not None:
            vs = ", ".join(sorted(format_vector(v) for v in self.counterexample_set))
            lines.append(f"  counterexample: {word(self.counterexample)}  Ξ = {{{vs}}}")
        if self.table:
            lines.append("prediction sets:")
            for alpha, vs in self.table.items():
                lines.append(f"  {word(alpha):<16} {{{', '.join(sorted(format_vector(v) for v in vs))}}}")
        return "\n".join(lines)


def check_property(G: Automaton, sup, spec: PropertySpec, depth: int = 4) -> Verdict:
    """Exact check of the property and of closed-loop liveness.

    The verdict covers every observation (observer states are saturated);
    ``depth`` only bounds the prediction-set table kept for reporting.  The
    counterexample is the shortest failing observation, first in canonical
    event order among those.
    """
    cl = sup if isinstance(sup, ClosedLoop) else closed_loop(G, sup)

    blocking = None
    blocked = set(cl.blocking_states())
    if blocked:
        # breadth-first shortest string into a blocking state
        queue = deque([(cl.initial, ())])
        seen = {cl.initial}
        while queue:
            i, s = queue.popleft()
            if i in blocked:
                blocking = s
                break
            for ev, j in cl.successors(i):
                if j not in seen:
                    seen.add(j)
                    queue.append((j, s + (ev,)))

    cache: dict[int, tuple] = {}

    def vec_of(i):
        if i not in cache:
            cache[i] = prediction_vector(cl, i, spec)
        return cache[i]

    counter = None
    counter_set = None
    if not blocked:
        for alpha, states in _observations(cl, None):
            xi = frozenset(vec_of(i) for i in states)
            if not evaluate(spec, xi):
                counter, counter_set = alpha, xi
                break

    table = {}
    if not blocked:
        table = prediction_sets(cl, spec, depth)
    holds = not blocked and counter is None
    return Verdict(
        satisfied=holds,
        property_holds=holds,
        live=not blocked,
        counterexample=counter,
        counterexample_set=counter_set,
        blocking_string=blocking,
        table=table,
    )


def check_prop1(G: Automaton, structure, spec: PropertySpec, depth: int = 4):
    """Compare every decision node reached by an observation of length at
    most ``depth`` with the oracle estimate and prediction set.

    Returns ``(True, None)`` or ``(False, (alpha, what, expected, got))``.
    """
    cl = closed_loop(G, structure)
    cache: dict[int, tuple] = {}
    for alpha, states in _observations(cl, depth):
        node = structure.node_after(alpha)
        est = frozenset(cl.plant_state(i) for i in states)
        if node.states() != est:
            return False, (alpha, "states", est, node.states())
        for i in states:
            if i not in cache:
                cache[i] = prediction_vector(cl, i, spec)
        xi = frozenset(cache[i] for i in states)
        if node.vectors() != xi:
            return False, (alpha, "vectors", xi, node.vectors())
    return True, None


# ---------------------------------------------------------------------------
# languages

EQUAL = "equal"
SUBSET = "a⊂b"
SUPERSET = "b⊂a"
INCOMPARABLE = "incomparable"


def _included(a: ClosedLoop, b: ClosedLoop) -> bool:
    """L(a) ⊆ L(b) for prefix-closed languages of deterministic automata."""
    start = (a.initial, b.initial)
    seen = {start}
    stack = [start]
    while stack:
        i, j = stack.pop()
        for ev, i2 in a.successors(i):
            j2 = b.delta.get((j, ev))
            if j2 is None:
                return False
            if (i2, j2) not in seen:
                seen.add((i2, j2))
                stack.append((i2, j2))
    return True


def compare_languages(a: ClosedLoop, b: ClosedLoop) -> str:
    if a.plant is not b.plant and a.plant.transitions != b.plant.transitions:
        raise ValueError("closed loops over different plants")
    ab, ba = _included(a, b), _included(b, a)
    if ab and ba:
        return EQUAL
    if ab:
        return SUBSET
    if ba:
        return SUPERSET
    return INCOMPARABLE

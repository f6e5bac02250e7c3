"""Plant models: deterministic finite automata with observable/controllable
event partitions, plus the reachability primitives used by everything else.

States are declared by name in the model file and stored as dense integer
indices in declaration order.  That order (and the declaration order of
events) is the canonical order used for every tie-break downstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


class ModelError(ValueError):
    """A model file could not be parsed or violates a plant invariant."""

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Event:
    name: str
    observable: bool
    controllable: bool


class Automaton:
    """Deterministic, live finite automaton ``G = (X, Sigma, delta, x0)``.

    ``transitions`` maps ``(state_index, event_name)`` to a state index.
    Instances are immutable after construction.
    """

    def __init__(
        self,
        states: Sequence[str],
        events: Sequence[Event],
        transitions: Iterable[tuple[str, str, str]],
        initial: str,
    ):
        self.states: tuple[str, ...] = tuple(states)
        self.events: tuple[Event, ...] = tuple(events)
        self._state_index = {}
        for i, name in enumerate(self.states):
            if name in self._state_index:
                raise ModelError(f"duplicate state {name!r}", f"states[{i}]")
            self._state_index[name] = i
        self._event_by_name = {}
        for i, ev in enumerate(self.events):
            if ev.name in self._event_by_name:
                raise ModelError(f"duplicate event {ev.name!r}", f"events[{i}]")
            self._event_by_name[ev.name] = ev
        if initial not in self._state_index:
            raise ModelError(f"initial state {initial!r} is not declared", "initial")
        self.initial = self._state_index[initial]

        delta: dict[tuple[int, str], int] = {}
        for i, triple in enumerate(transitions):
            loc = f"transitions[{i}]"
            src, ev, dst = triple
            for s in (src, dst):
                if s not in self._state_index:
                    raise ModelError(f"dangling state {s!r}", loc)
            if ev not in self._event_by_name:
                raise ModelError(f"unknown event {ev!r}", loc)
            key = (self._state_index[src], ev)
            target = self._state_index[dst]
            if key in delta and delta[key] != target:
                raise ModelError(
                    f"nondeterministic transition: {src!r} --{ev}--> "
                    f"{self.states[delta[key]]!r} and {dst!r}",
                    loc,
                )
            delta[key] = target
        self.transitions: Mapping[tuple[int, str], int] = delta

        # successor lists in canonical event order
        order = {ev.name: i for i, ev in enumerate(self.events)}
        succ: list[list[tuple[str, int]]] = [[] for _ in self.states]
        for (x, ev), y in sorted(delta.items(), key=lambda kv: (kv[0][0], order[kv[0][1]])):
            succ[x].append((ev, y))
        self._succ = tuple(tuple(s) for s in succ)

        for x, out in enumerate(self._succ):
            if not out:
                raise ModelError(f"state {self.states[x]!r} has no outgoing transition (plant must be live)", "transitions")

        self.event_names = tuple(ev.name for ev in self.events)
        self.observable = frozenset(ev.name for ev in self.events if ev.observable)
        self.unobservable = frozenset(ev.name for ev in self.events if not ev.observable)
        self.controllable = frozenset(ev.name for ev in self.events if ev.controllable)
        self.uncontrollable = frozenset(ev.name for ev in self.events if not ev.controllable)
        self.event_order = order

    # -- naming helpers -------------------------------------------------

    def index(self, name: str) -> int:
        try:
            return self._state_index[name]
        except KeyError:
            raise KeyError(f"unknown state {name!r}") from None

    def indices(self, names: Iterable[str]) -> frozenset[int]:
        return frozenset(self.index(n) for n in names)

    def name(self, x: int) -> str:
        return self.states[x]

    def event(self, name: str) -> Event:
        try:
            return self._event_by_name[name]
        except KeyError:
            raise KeyError(f"unknown event {name!r}") from None

    def sort_events(self, names: Iterable[str]) -> list[str]:
        return sorted(names, key=self.event_order.__getitem__)

    @property
    def alphabet(self) -> frozenset[str]:
        return frozenset(self.event_names)

    def __repr__(self):
        return f"Automaton({len(self.states)} states, {len(self.events)} events, {len(self.transitions)} transitions)"

    # -- dynamics -------------------------------------------------------

    def successors(self, x: int) -> tuple[tuple[str, int], ...]:
        """``(event, target)`` pairs leaving ``x`` in canonical event order."""
        return self._succ[x]

    def step(self, x: int, event: str) -> int | None:
        return self.transitions.get((x, event))

    def run(self, events: Iterable[str], start: int | None = None) -> int | None:
        x = self.initial if start is None else start
        for ev in events:
            x = self.transitions.get((x, ev))
            if x is None:
                return None
        return x

    def is_valid_decision(self, decision: Iterable[str]) -> bool:
        d = frozenset(decision)
        return self.uncontrollable <= d <= self.alphabet

    def control_decisions(self) -> list[frozenset[str]]:
        """Every valid control decision, largest first.

        Decisions are supersets of the uncontrollable events; the order is
        by number of disabled events, then by the canonical order of the
        disabled events.
        """
        ctrl = self.sort_events(self.controllable)
        out = []
        for mask in range(1 << len(ctrl)):
            disabled = [e for i, e in enumerate(ctrl) if mask >> i & 1]
            out.append((len(disabled), [self.event_order[e] for e in disabled], self.alphabet - frozenset(disabled)))
        out.sort(key=lambda t: (t[0], t[1]))
        return [d for _, _, d in out]

    def format_decision(self, decision: Iterable[str]) -> str:
        """Render a decision as ``Σ`` or ``Σ∖{a,b}`` when that is shorter."""
        d = frozenset(decision)
        disabled = self.alphabet - d
        if not disabled:
            return "Σ"
        if len(disabled) <= len(d):
            return "Σ∖{" + ",".join(self.sort_events(disabled)) + "}"
        return "{" + ",".join(self.sort_events(d)) + "}"


# ---------------------------------------------------------------------------
# reachability primitives


def project(G: Automaton, string: Iterable[str]) -> tuple[str, ...]:
    """Natural projection: erase unobservable events, keep order."""
    out = []
    for ev in string:
        if G.event(ev).observable:
            out.append(ev)
    return tuple(out)


def unobservable_reach(G: Automaton, q: Iterable[int], decision: Iterable[str]) -> frozenset[int]:
    """States reachable from ``q`` through enabled unobservable events."""
    enabled = frozenset(decision) & G.unobservable
    seen = set(q)
    stack = list(seen)
    while stack:
        x = stack.pop()
        for ev, y in G.successors(x):
            if ev in enabled and y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(seen)


def observable_reach(G: Automaton, q: Iterable[int], event: str) -> frozenset[int]:
    """One-step successors of ``q`` under the observable ``event``."""
    if not G.event(event).observable:
        raise ValueError(f"event {event!r} is not observable")
    out = set()
    for x in q:
        y = G.transitions.get((x, event))
        if y is not None:
            out.add(y)
    return frozenset(out)


def enabled_events(G: Automaton, x: int, decision: Iterable[str]) -> frozenset[str]:
    d = frozenset(decision)
    return frozenset(ev for ev, _ in G.successors(x) if ev in d)


# ---------------------------------------------------------------------------
# model files


def parse_automaton(text: str) -> Automaton:
    """Parse a JSON model file.

    Expected keys: ``states`` (list of names), ``initial``, ``events`` (list
    of ``{"name", "observable", "controllable"}``) and ``transitions`` (list
    of ``[src, event, dst]``).
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(data, dict):
        raise ModelError("model must be a JSON object", "line 1")
    for key in ("states", "initial", "events", "transitions"):
        if key not in data:
            raise ModelError(f"missing key {key!r}", "model")

    states = data["states"]
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise ModelError("'states' must be a list of strings", "states")
    if not isinstance(data["initial"], str):
        raise ModelError("'initial' must be a string", "initial")

    events = []
    if not isinstance(data["events"], list):
        raise ModelError("'events' must be a list", "events")
    for i, ev in enumerate(data["events"]):
        loc = f"events[{i}]"
        if not isinstance(ev, dict) or not isinstance(ev.get("name"), str):
            raise ModelError("event must be an object with a string 'name'", loc)
        for flag in ("observable", "controllable"):
            if not isinstance(ev.get(flag), bool):
                raise ModelError(f"event flag {flag!r} must be a boolean", loc)
        events.append(Event(ev["name"], ev["observable"], ev["controllable"]))

    transitions = []
    if not isinstance(data["transitions"], list):
        raise ModelError("'transitions' must be a list", "transitions")
    for i, t in enumerate(data["transitions"]):
        if not (isinstance(t, list) and len(t) == 3 and all(isinstance(p, str) for p in t)):
            raise ModelError("transition must be a [src, event, dst] triple of strings", f"transitions[{i}]")
        transitions.append(tuple(t))

    return Automaton(states, events, transitions, data["initial"])


def automaton_to_dict(G: Automaton) -> dict:
    order = G.event_order
    trans = sorted(G.transitions.items(), key=lambda kv: (kv[0][0], order[kv[0][1]]))
    return {
        "states": list(G.states),
        "initial": G.name(G.initial),
        "events": [
            {"name": ev.name, "observable": ev.observable, "controllable": ev.controllable}
            for ev in G.events
        ],
        "transitions": [[G.name(x), ev, G.name(y)] for (x, ev), y in trans],
    }


def serialize_automaton(G: Automaton) -> str:
    return json.dumps(automaton_to_dict(G), indent=2) + "\n"


def load_automaton(path) -> Automaton:
    with open(path, encoding="utf-8") as fh:
        return parse_automaton(fh.read())

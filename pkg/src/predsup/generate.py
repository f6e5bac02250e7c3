"""Seeded random plants and properties for property-based checks."""

from __future__ import annotations

import random

from .automaton import Automaton, Event
from .prediction import PREDICATES, PropertySpec


def random_plant(
    rng: random.Random,
    n_states: int,
    events: list[Event],
    density: float = 0.4,
) -> Automaton:
    """Deterministic live plant over ``events``.

    Every state gets one guaranteed outgoing transition; each remaining
    (state, event) pair is filled with probability ``density``.
    """
    names = [str(i) for i in range(n_states)]
    trans = {}
    for x in range(n_states):
        ev = rng.choice(events).name
        trans[(x, ev)] = rng.randrange(n_states)
        for e in events:
            if (x, e.name) not in trans and rng.random() < density:
                trans[(x, e.name)] = rng.randrange(n_states)
    triples = [(names[x], ev, names[y]) for (x, ev), y in sorted(trans.items())]
    return Automaton(names, events, triples, "0")


def random_events(rng: random.Random, n_events: int) -> list[Event]:
    """At least one observable event; flags otherwise uniform."""
    out = []
    for i in range(n_events):
        observable = True if i == 0 else rng.random() < 0.5
        out.append(Event(f"e{i}", observable, rng.random() < 0.5))
    return out


def random_property(rng: random.Random, G: Automaton, horizon: int) -> PropertySpec:
    n = len(G.states)
    critical = frozenset(x for x in range(n) if rng.random() < 0.3) or frozenset({rng.randrange(n)})
    kind = rng.choice(PREDICATES)
    K = rng.randint(0, horizon)
    M = rng.randint(K, horizon)
    return PropertySpec(critical, horizon, kind, K, M)


def random_instance(rng: random.Random, max_states: int = 6, max_events: int = 4, max_horizon: int = 2):
    n = rng.randint(1, max_states)
    events = random_events(rng, rng.randint(1, max_events))
    G = random_plant(rng, n, events)
    return G, random_property(rng, G, rng.randint(0, max_horizon))

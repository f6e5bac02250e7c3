"""Information states with previewed prediction vectors and their
single-observation patterns.

An information state pairs each plant state with exactly one prediction
vector.  Under a control decision it unfolds into a pattern: the
unobservable closure (``ur_part``) and one successor information state per
observable event that can actually occur (``obs_parts``).  A pattern is
consistent when every vector in ``ur_part`` agrees with the current
membership of its state and, instant by instant, with the vectors of its
one-step successors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

from .automaton import Automaton, observable_reach, unobservable_reach
from .prediction import Mark, PropertySpec, combine, evaluate, format_vector, iter_vectors, membership


@dataclass(frozen=True, order=True)
class InfoState:
    """Immutable set of augmented states ``(x, v)``, one vector per state.

    ``items`` is kept sorted by state index so that equal information states
    compare and hash equal.
    """

    items: tuple

    @classmethod
    def of(cls, entries: Mapping[int, tuple] | Iterable[tuple[int, tuple]]) -> "InfoState":
        if isinstance(entries, Mapping):
            pairs = list(entries.items())
        else:
            pairs = list(entries)
        seen = {}
        for x, v in pairs:
            v = tuple(v)
            if x in seen and seen[x] != v:
                raise ValueError(f"state {x} carries two different vectors")
            seen[x] = v
        return cls(tuple(sorted(seen.items())))

    def states(self) -> frozenset[int]:
        return frozenset(x for x, _ in self.items)

    def vectors(self) -> frozenset[tuple]:
        return frozenset(v for _, v in self.items)

    def vector(self, x: int) -> tuple:
        for y, v in self.items:
            if y == x:
                return v
        raise KeyError(x)

    def as_dict(self) -> dict[int, tuple]:
        return dict(self.items)

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __contains__(self, pair):
        return pair in self.items

    def issubset(self, other: "InfoState") -> bool:
        return set(self.items) <= set(other.items)


@dataclass(frozen=True)
class Pattern:
    """Single-observation information pattern of ``source`` under ``decision``.

    ``obs_parts`` is a tuple of ``(event, InfoState)`` in canonical event
    order and only lists observable events whose observable reach is
    nonempty.
    """

    source: InfoState
    decision: frozenset
    ur_part: InfoState
    obs_parts: tuple

    def obs(self, event: str) -> InfoState:
        for ev, part in self.obs_parts:
            if ev == event:
                return part
        raise KeyError(event)

    def events(self) -> tuple[str, ...]:
        return tuple(ev for ev, _ in self.obs_parts)


class Violation(NamedTuple):
    state: int
    vector: tuple
    instant: int


# ---------------------------------------------------------------------------


def one_step_reach(G: Automaton, pattern: Pattern, state: int) -> set[tuple[int, tuple]]:
    """Augmented one-step successors of ``state`` inside ``pattern``."""
    ur = pattern.ur_part.as_dict()
    if state not in ur:
        raise KeyError(f"state {state} is not in the pattern's unobservable part")
    obs = {ev: part.as_dict() for ev, part in pattern.obs_parts}
    out = set()
    for ev, y in G.successors(state):
        if ev not in pattern.decision:
            continue
        if ev in G.unobservable:
            out.add((y, ur[y]))
        else:
            out.add((y, obs[ev][y]))
    return out


def check_structure(G: Automaton, pattern: Pattern) -> str | None:
    """State-level well-formedness of a pattern, or a description of the defect."""
    if not G.is_valid_decision(pattern.decision):
        return "invalid control decision"
    if not pattern.source.issubset(pattern.ur_part):
        return "source is not contained in the unobservable part"
    ur_states = pattern.ur_part.states()
    if ur_states != unobservable_reach(G, pattern.source.states(), pattern.decision):
        return "unobservable part does not match the unobservable reach"
    expected = {}
    for ev in G.sort_events(G.observable & pattern.decision):
        reach = observable_reach(G, ur_states, ev)
        if reach:
            expected[ev] = reach
    got = {ev: part.states() for ev, part in pattern.obs_parts}
    if got != expected:
        return "observation parts do not match the observable reach"
    return None


def find_inconsistency(G: Automaton, pattern: Pattern, spec: PropertySpec) -> Violation | None:
    """First augmented state of ``ur_part`` breaking the consistency rules."""
    for x, v in pattern.ur_part:
        if v[0] is not membership({x}, spec.critical):
            return Violation(x, v, 0)
        succ = one_step_reach(G, pattern, x)
        for k in range(1, spec.horizon + 1):
            if v[k] is not combine(w[k - 1] for _, w in succ):
                return Violation(x, v, k)
    return None


def check_consistent(G: Automaton, pattern: Pattern, spec: PropertySpec) -> tuple[bool, Violation | None]:
    bad = find_inconsistency(G, pattern, spec)
    return bad is None, bad


def is_live(G: Automaton, info: InfoState | Iterable[int], decision: Iterable[str]) -> bool:
    """Every state in the unobservable reach keeps some enabled event."""
    decision = frozenset(decision)
    states = info.states() if isinstance(info, InfoState) else info
    return all(
        any(ev in decision for ev, _ in G.successors(x))
        for x in unobservable_reach(G, states, decision)
    )


def is_safe(info: InfoState, spec: PropertySpec) -> bool:
    return evaluate(spec, info.vectors())


def feasible_vectors(G: Automaton, spec: PropertySpec) -> dict[int, frozenset]:
    """Per plant state, the vectors that admit some consistent continuation.

    Greatest fixpoint: a vector ``v`` stays feasible for ``x`` if entry 0 is
    the membership of ``x`` and some valid decision enables at least one
    event at ``x`` such that feasible successor vectors reproduce
    ``v[1:]``.  Each successor may pick its vector independently, so this
    over-approximates what information states can realize; it never drops
    a vector that occurs in a node surviving the prune step.
    """
    H = spec.horizon
    feasible = {
        x: frozenset(iter_vectors(H, membership({x}, spec.critical)))
        for x in range(len(G.states))
    }
    local_choices = {}
    for x in range(len(G.states)):
        out = G.successors(x)
        forced = [y for ev, y in out if ev in G.uncontrollable]
        optional = [y for ev, y in out if ev in G.controllable]
        choices = []
        for mask in range(1 << len(optional)):
            targets = forced + [y for i, y in enumerate(optional) if mask >> i & 1]
            if targets:
                choices.append(targets)
        local_choices[x] = choices

    changed = True
    while changed:
        changed = False
        for x in range(len(G.states)):
            tails = set()
            for targets in local_choices[x]:
                # per instant, the set of marks successors can show
                partial = {()}
                for y in targets:
                    partial = {
                        tuple(a | {w[k]} for k, a in enumerate(acc)) if acc
                        else tuple(frozenset({w[k]}) for k in range(H))
                        for acc in partial
                        for w in feasible[y]
                    }
                for acc in partial:
                    tails.add(tuple(combine(a) for a in acc))
            keep = frozenset(v for v in feasible[x] if v[1:] in tails)
            if keep != feasible[x]:
                feasible[x] = keep
                changed = True
    return feasible


def enumerate_patterns(
    G: Automaton,
    info: InfoState,
    decision: Iterable[str],
    spec: PropertySpec,
    feasible: Mapping[int, Iterable[tuple]] | None = None,
) -> list[Pattern]:
    """All consistent patterns of ``info`` under ``decision``.

    Vectors of the observation parts are enumerated with their instant-0
    mark fixed to the state's own membership (and, when ``feasible`` is
    given, restricted to ``feasible[y]``); the unobservable part is then
    determined instant by instant, since entry ``k`` only depends on
    entries ``k-1`` of successors.  An assignment is kept when it reproduces
    the vectors already committed in ``info``.  Marks are tried in the order
    N, U, Y and states in canonical order, so the result order is
    reproducible.  A non-live ``info`` has no consistent pattern.
    """
    decision = frozenset(decision)
    H = spec.horizon
    crit = spec.critical
    committed = info.as_dict()

    ur = sorted(unobservable_reach(G, committed, decision))
    obs_events = []
    slots: list[tuple[str, int]] = []
    for ev in G.sort_events(G.observable & decision):
        reach = observable_reach(G, ur, ev)
        if reach:
            obs_events.append(ev)
            slots.extend((ev, y) for y in sorted(reach))

    ur_pos = {x: i for i, x in enumerate(ur)}
    slot_pos = {s: i for i, s in enumerate(slots)}
    # successor references: (True, i) -> ur index, (False, j) -> slot index
    refs: list[list[tuple[bool, int]]] = []
    for x in ur:
        r = []
        for ev, y in G.successors(x):
            if ev not in decision:
                continue
            if ev in G.unobservable:
                r.append((True, ur_pos[y]))
            else:
                r.append((False, slot_pos[(ev, y)]))
        if not r:
            return []
        refs.append(r)

    # per slot: prefix -> marks allowed next
    options: list[dict[tuple, list[Mark]]] = []
    for _, y in slots:
        head = membership({y}, crit)
        domain = feasible[y] if feasible is not None else iter_vectors(H, head)
        table: dict[tuple, set] = {}
        for v in domain:
            for k in range(1, H + 1):
                table.setdefault(v[:k], set()).add(v[k])
        if feasible is not None and not any(v[0] is head for v in feasible[y]):
            return []
        options.append({pre: sorted(ms) for pre, ms in table.items()})

    pinned = [(ur_pos[x], v) for x, v in committed.items()]

    ur_cols = [tuple(membership({x}, crit) for x in ur)]
    obs_cols = [tuple(membership({y}, crit) for _, y in slots)]
    if any(v[0] is not ur_cols[0][i] for i, v in pinned):
        return []

    results: list[Pattern] = []

    def emit():
        ur_vecs = {x: tuple(col[i] for col in ur_cols) for i, x in enumerate(ur)}
        parts = []
        for ev in obs_events:
            entries = {
                y: tuple(col[j] for col in obs_cols)
                for j, (e, y) in enumerate(slots)
                if e == ev
            }
            parts.append((ev, InfoState.of(entries)))
        results.append(Pattern(info, decision, InfoState.of(ur_vecs), tuple(parts)))

    def extend(k: int):
        # ur_cols and obs_cols hold instants 0..k-1; fix ur instant k
        if k > H:
            emit()
            return
        prev_u, prev_o = ur_cols[k - 1], obs_cols[k - 1]
        col = tuple(
            combine(prev_u[j] if is_ur else prev_o[j] for is_ur, j in r) for r in refs
        )
        if any(v[k] is not col[i] for i, v in pinned):
            return
        ur_cols.append(col)
        allowed = []
        for j in range(len(slots)):
            prefix = tuple(c[j] for c in obs_cols)
            allowed.append(options[j].get(prefix, ()))
        for choice in itertools.product(*allowed):
            obs_cols.append(choice)
            extend(k + 1)
            obs_cols.pop()
        ur_cols.pop()

    extend(1)
    return results


# ---------------------------------------------------------------------------
# text dumps


def format_infostate(G: Automaton, info: InfoState) -> str:
    return "{" + ", ".join(f"({G.name(x)},{format_vector(v)})" for x, v in info) + "}"


def format_pattern(G: Automaton, pattern: Pattern) -> str:
    lines = [
        f"source   {format_infostate(G, pattern.source)}",
        f"decision {G.format_decision(pattern.decision)}",
        f"ur       {format_infostate(G, pattern.ur_part)}",
    ]
    for ev, part in pattern.obs_parts:
        lines.append(f"obs {ev:<4} {format_infostate(G, part)}")
    return "\n".join(lines)


"""Prediction-based supervisor synthesis for partially observed plants.

Typical use::

    from predsup import load_automaton, load_property, synthesize, check_property

    G = load_automaton("plant.json")
    spec = load_property(G, "property.json")
    result = synthesize(G, spec)
    if result.solved:
        print(check_property(G, result.structure, spec).report())
"""

from .automaton import (
    Automaton,
    Event,
    ModelError,
    enabled_events,
    load_automaton,
    observable_reach,
    parse_automaton,
    project,
    serialize_automaton,
    unobservable_reach,
)
from .infostate import (
    InfoState,
    Pattern,
    check_consistent,
    enumerate_patterns,
    feasible_vectors,
    is_live,
    is_safe,
    one_step_reach,
)
from .prediction import Mark, PropertySpec, evaluate, load_property, membership, vec
from .synthesis import (
    Arena,
    ControlStructure,
    NodeCapExceeded,
    Supervisor,
    expand,
    extract,
    initial_candidates,
    prune,
    synthesize,
)
from .verify import (
    AllEnabling,
    ClosedLoop,
    check_prop1,
    check_property,
    closed_loop,
    compare_languages,
    prediction_sets,
    reach_k,
)

__all__ = [
    "AllEnabling", "Arena", "Automaton", "ClosedLoop", "ControlStructure", "Event",
    "InfoState", "Mark", "ModelError", "NodeCapExceeded", "Pattern", "PropertySpec",
    "Supervisor", "check_consistent", "check_prop1", "check_property", "closed_loop",
    "compare_languages", "enabled_events", "enumerate_patterns", "evaluate", "expand",
    "extract", "feasible_vectors", "initial_candidates", "is_live", "is_safe",
    "load_automaton", "load_property", "membership", "observable_reach",
    "one_step_reach", "parse_automaton", "prediction_sets", "project", "prune",
    "reach_k", "serialize_automaton", "synthesize", "unobservable_reach", "vec",
]

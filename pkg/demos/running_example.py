"""Synthesize both supervisors for the bundled eight-state plant.

The plant hides a secret state (7) behind unobservable moves. An intruder
who sees only o1/o2 must never be sure the plant is, or will be within two
steps, in the secret state. Run with ``python3 demos/running_example.py``.
"""

from importlib.resources import files

from predsup import check_property, closed_loop, compare_languages, load_automaton, load_property, synthesize
from predsup.infostate import format_pattern

DATA = files("predsup") / "data"

G = load_automaton(DATA / "fig1.json")
spec = load_property(G, DATA / "fig1_property.json")

result = synthesize(G, spec)
print("arena:", result.arena.sizes(), "after pruning:", result.pruned.sizes())
root = result.pruned.initials[0]
print("decisions kept at the root:", [G.format_decision(d) for d in result.pruned.decisions_at(root)])

# Both root decisions are locally maximal; steer extraction to each in turn.
structures = {}
for label, prefer in (("S1", G.alphabet - {"a"}), ("S2", G.alphabet - {"b", "c"})):
    s = synthesize(G, spec, prefer=prefer).structure
    structures[label] = s
    print(f"\n{label}: {len(s.choice)} decision nodes")
    for pattern in s.choice.values():
        print(format_pattern(G, pattern))
        print()
    print(check_property(G, s, spec).report())

rel = compare_languages(closed_loop(G, structures["S1"]), closed_loop(G, structures["S2"]))
print("\nS1 vs S2 closed-loop languages:", rel)

"""Why the plant needs a supervisor at all.

Without control, observing o2 tells the intruder the plant will be in the
secret state one step later. The verifier finds that observation and prints
every prediction set it computed on the way.
"""

from importlib.resources import files

from predsup import AllEnabling, check_property, closed_loop, load_automaton, load_property, reach_k

DATA = files("predsup") / "data"

G = load_automaton(DATA / "fig1.json")
spec = load_property(G, DATA / "fig1_property.json")

cl = closed_loop(G, AllEnabling(G))
for s, k in ((["a", "b", "o1"], 2), (["c", "o1"], 1)):
    states = sorted(G.name(x) for x in reach_k(cl, s, k))
    print(f"states {k} steps after {' '.join(s)}: {states}")

verdict = check_property(G, AllEnabling(G), spec, depth=2)
print()
print(verdict.report())

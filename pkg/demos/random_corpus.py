"""Synthesize and independently re-verify supervisors for random plants.

Prints one line per plant and a tally at the end. Usage:

    python3 demos/random_corpus.py [count] [seed]
"""

import random
import sys
import time

from predsup import NodeCapExceeded, check_prop1, check_property, synthesize
from predsup.generate import random_instance

count = int(sys.argv[1]) if len(sys.argv) > 1 else 50
seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0
rng = random.Random(seed)

tally = {"solved": 0, "no solution": 0, "capped": 0, "oracle disagreement": 0}
start = time.perf_counter()
for i in range(count):
    G, spec = random_instance(rng)
    try:
        r = synthesize(G, spec, node_cap=20_000)
    except NodeCapExceeded as exc:
        tally["capped"] += 1
        print(f"{i:3d}  {len(G.states)} states  capped ({exc})")
        continue
    if not r.solved:
        tally["no solution"] += 1
        print(f"{i:3d}  {len(G.states)} states  {spec.kind} H={spec.horizon}  no solution")
        continue
    tally["solved"] += 1
    agree, _ = check_prop1(G, r.structure, spec, 4)
    verdict = check_property(G, r.structure, spec, depth=0)
    if not (agree and verdict.satisfied):
        tally["oracle disagreement"] += 1
    print(f"{i:3d}  {len(G.states)} states  {spec.kind} H={spec.horizon}  "
          f"{len(r.structure.choice)} nodes  {'ok' if agree and verdict.satisfied else 'MISMATCH'}")

print(tally, f"{time.perf_counter() - start:.2f} s")

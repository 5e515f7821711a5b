"""One cost layer of a QAOA ansatz for a two-item knapsack.

Feasible assignments (2a + 3b <= 12) pick up a phase of -gamma * (3a + 5b);
infeasible ones are left alone.
"""
import math

from miniqmod.cli import CORPUS
from miniqmod.pipeline import compile_source
from miniqmod.sim import distribution, relative_phases, run

GAMMA = 0.1

entry = CORPUS["knapsack_qaoa"]
compiled = compile_source(entry.source(), entry.filename, {"gammas": [GAMMA], "betas": [0.0]},
                          {"NUM_LAYERS": 1})
state = run(compiled.circuit).state
v = compiled.circuit.outputs["v"].ids
phases = relative_phases(state, 0, v)

print(" a  b  feasible  phase    expected")
for b in range(4):
    for a in range(8):
        code = a | b << 3
        feasible = 2 * a + 3 * b <= 12
        want = (-GAMMA * (3 * a + 5 * b) if feasible else 0.0) % (2 * math.pi)
        print(f"{a:2d} {b:2d}  {str(feasible):8s}  {phases[code]:.4f}  {want:.4f}")

# the mixer is off (beta = 0), so the distribution stays uniform
dist = distribution(state)
print("distinct outcomes:", len(dist), "max p:", round(max(dist.values()), 6))

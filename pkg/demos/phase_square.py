"""Phase kickback of x**2 on a uniform 2-qubit register."""
import math

from miniqmod.cli import CORPUS, compile_entry
from miniqmod.sim import relative_phases, run

compiled = compile_entry(CORPUS["phase_square"])
x = compiled.circuit.outputs["x"].ids
state = run(compiled.circuit).state

print("gates:", [g.kind for g in compiled.circuit.gates])
for code, phi in relative_phases(state, 0, x).items():
    print(f"x={code}  phase={phi:.4f}  expected={(math.pi / 4 * code * code) % (2 * math.pi):.4f}")

"""Four-segment linear approximation of tanh on [0, 1) computed on a 5-bit register."""
import math

from miniqmod.cli import CORPUS, compile_entry
from miniqmod.sim import distribution, run

compiled = compile_entry(CORPUS["piecewise_tanh"])
state = run(compiled.circuit).state

worst = 0.0
print("   x       f_x      tanh(x)")
for (x, fx), _ in sorted(distribution(state, ["x", "f_x"]).items()):
    err = abs(float(fx) - math.tanh(float(x)))
    worst = max(worst, err)
    print(f"{float(x):.5f}  {float(fx):.5f}  {math.tanh(float(x)):.5f}")
print(f"worst error {worst:.5f}")

"""Amplitude-encode a Taylor approximation of tanh at x = 0.8125.

The polynomial is evaluated in 8-bit fixed point inside the circuit, so the
amplitude on |1> is a truncated value, not tanh(0.8125) itself.
"""
import math
import time

from miniqmod.cli import CORPUS, compile_entry
from miniqmod.ir import resource_report
from miniqmod.sim import marginal_amplitude, run, sample

t0 = time.perf_counter()
compiled = compile_entry(CORPUS["tanh_amp"])
state = run(compiled.circuit).state
print(f"compiled and simulated in {time.perf_counter() - t0:.1f}s")

ind = compiled.circuit.outputs["ind"].ids
amp = marginal_amplitude(state, ind, 1).real
x = 0.8125
taylor = x - x ** 3 / 3 + 2 * x ** 5 / 15
print(f"amplitude on |1>  {amp:.6f}")
print(f"exact Taylor      {taylor:.6f}")
print(f"tanh(x)           {math.tanh(x):.6f}")
print(f"P(ind=1)          {amp * amp:.6f}")

counts = sample(state, 65536, seed=1).counts("ind")
print("sampled:", dict(counts))
print("width:", resource_report(compiled.circuit).width)

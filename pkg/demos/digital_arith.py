"""Compile a small fixed-point expression and look at the values it produces."""
from miniqmod.ir import resource_report
from miniqmod.pipeline import compile_source
from miniqmod.sim import distribution, run

SOURCE = """
qfunc main(res: output qnum) {
  a: qnum[2];
  a |= 3;

  b: qnum[2, signed, 1];
  allocate(b);
  hadamard_transform(b);

  res |= 0.25*a*b + 1.5;
}
"""

if __name__ == "__main__":
    compiled = compile_source(SOURCE, "digital.qmod")
    res = compiled.circuit.outputs["res"]
    print("res format:", res.qtype)

    state = run(compiled.circuit).state
    for (value,), p in sorted(distribution(state, ["res"]).items()):
        print(f"  res = {value:<6} p = {p:.3f}")

    report = resource_report(compiled.decomposed())
    print("width", report.width, "depth", report.depth, "gates", dict(report.gate_counts))

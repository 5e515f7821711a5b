import math
import subprocess
import sys

import pytest

from miniqmod.cli import CORPUS, DegenerateSegment, linear_coefs, segment_coefs
from miniqmod.cli.main import EXIT_DIAGNOSTICS, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, main
from support import compiled, final_state


def cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def phase_table(text):
    rows = [line.split("\t") for line in text.strip().splitlines()[1:]]
    return {int(k): float(v) for k, v in rows}


def test_compile_bell(capsys):
    code, out, _ = cli(capsys, "compile", "bell")
    assert code == EXIT_OK
    assert out.startswith("OPENQASM 3.0;") and "cx q[0], q[1];" in out


def test_compile_file_with_bindings(tmp_path, capsys):
    path = tmp_path / "k.qmod"
    path.write_text(CORPUS["knapsack_qaoa"].source())
    code, out, _ = cli(capsys, "compile", str(path), "--arg", "gammas=[0.3]", "--arg", "betas=[0.2]",
                       "--const", "NUM_LAYERS=1")
    assert code == EXIT_OK and "rx(0.2)" in out


def test_output_file(tmp_path, capsys):
    dest = tmp_path / "bell.qasm"
    code, out, _ = cli(capsys, "compile", "bell", "-o", str(dest))
    assert code == EXIT_OK and out == ""
    assert dest.read_text().startswith("OPENQASM 3.0;")


def test_run_is_reproducible(capsys):
    first = cli(capsys, "run", "digital_arith", "--shots", "500", "--seed", "7")[1]
    second = cli(capsys, "run", "digital_arith", "--shots", "500", "--seed", "7")[1]
    assert first == second
    lines = first.splitlines()
    assert lines[:2] == ["# res", "value\tcount\tprob"]
    assert [row.split("\t")[0] for row in lines[2:]] == ["0.75", "1.125", "1.5", "1.875"]
    assert sum(int(row.split("\t")[1]) for row in lines[2:]) == 500


def test_phases_of_phase_square(capsys):
    code, out, _ = cli(capsys, "phases", "phase_square")
    assert code == EXIT_OK
    assert phase_table(out) == {0: 0.0, 1: 0.7854, 2: 3.1416, 3: 0.7854}


def test_phases_of_phase_flip(capsys):
    table = phase_table(cli(capsys, "phases", "phase_flip")[1])
    assert {k: v for k, v in table.items() if v} == {3: 3.1416}


def test_statevector_of_bell(capsys):
    out = cli(capsys, "statevector", "bell", "--backend", "dense")[1]
    rows = [line.split("\t") for line in out.strip().splitlines()]
    assert rows[0] == ["index", "res", "re", "im", "prob"]
    assert [r[0] for r in rows[1:]] == ["0", "3"]
    assert all(float(r[4]) == pytest.approx(0.5) for r in rows[1:])


def test_report(capsys):
    out = cli(capsys, "report", "bell")[1]
    assert "H" in out and "CX" in out and "width" in out


def test_syntax_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.qmod"
    path.write_text("qfunc main(x: output qbit) { allocate(x) }")
    code, _, err = cli(capsys, "compile", str(path))
    assert code == EXIT_DIAGNOSTICS and err.startswith(f"{path}:1:") and "error" in err


def test_type_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.qmod"
    path.write_text("qfunc main(r: output qnum) { r |= 1; r |= 2; }")
    code, _, err = cli(capsys, "compile", str(path))
    assert code == EXIT_DIAGNOSTICS and "already initialized" in err


def test_nonzero_release_exit_code(tmp_path, capsys):
    path = tmp_path / "leak.qmod"
    path.write_text("""
    qfunc leaky(x: qbit) { t: qbit; allocate(t); CX(x, t); }
    qfunc main(x: output qbit) { allocate(x); H(x); leaky(x); }
    """)
    code, _, err = cli(capsys, "run", str(path))
    assert code == EXIT_RUNTIME and "simulation error" in err


def test_width_limit_exit_code(capsys):
    assert cli(capsys, "run", "struct_sum", "--max-qubits", "4", "--backend", "dense")[0] == EXIT_RUNTIME


@pytest.mark.parametrize("argv", [
    ["run", "no_such_program"],
    ["run", "bell", "--shots", "0"],
    ["run", "bell", "--max-qubits", "25"],
    ["compile", "bell", "--arg", "oops"],
    ["frobnicate", "bell"],
    [],
])
def test_usage_errors(capsys, argv):
    assert cli(capsys, *argv)[0] == EXIT_USAGE


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "miniqmod.cli", "phases", "phase_flip"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "3.1416" in proc.stdout


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corpus_checks(name):
    CORPUS[name].check(compiled(name), final_state(name))


def test_linear_coefs_examples():
    a, b = linear_coefs(math.tanh, 0.0, 0.25)
    assert a == pytest.approx(math.tanh(0.25) / 0.25, abs=1e-12) and b == 0
    assert linear_coefs(lambda x: 0.5, 0.25, 0.5) == (0.0, 0.5)
    assert linear_coefs(lambda x: x, 0.5, 0.75) == (1.0, 0.0)
    with pytest.raises(DegenerateSegment):
        linear_coefs(math.tanh, 0.5, 0.5)


def test_chebyshev_nodes_reduce_error():
    grid = [i / 200 for i in range(201)]

    def worst(coef):
        a, b = coef
        return max(abs(math.tanh(x) - (a * x + b)) for x in grid)

    assert worst(linear_coefs(math.tanh, 0, 1, chebyshev=True)) < worst(linear_coefs(math.tanh, 0, 1))


def test_segment_coefs_cover_unit_interval():
    a, b = segment_coefs(math.tanh, 4)
    assert len(a) == len(b) == 4
    for i in range(4):
        lo, hi = i / 4, (i + 1) / 4
        assert a[i] * lo + b[i] == pytest.approx(math.tanh(lo))
        assert a[i] * hi + b[i] == pytest.approx(math.tanh(hi))

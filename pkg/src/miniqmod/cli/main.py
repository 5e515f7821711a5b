"""``miniqmod`` command-line driver.

Exit codes: 0 success, 1 compile diagnostics, 2 simulation error, 3 usage error.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..frontend import EvalError, LexError, ParseError, eval_classical, parse_expr
from ..ir import emit_qasm3, resource_report
from ..pipeline import Compiled, compile_source
from ..sema import SemaError
from ..sim import (DEFAULT_MAX_QUBITS, NotSeparable, SimulationError, ZeroReference, decode_value,
                   format_value, relative_phases, run, sample)
from ..types.interval import DEFAULT_MACHINE_PRECISION
from .corpus import CORPUS

EXIT_OK, EXIT_DIAGNOSTICS, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2, 3
COMMANDS = ("compile", "run", "statevector", "phases", "report")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str
    shots: int = 1024
    seed: Optional[int] = None
    machine_precision: int = DEFAULT_MACHINE_PRECISION
    max_qubits: int = DEFAULT_MAX_QUBITS
    args: dict = field(default_factory=dict)
    consts: dict = field(default_factory=dict)
    output: Optional[str] = None
    backend: str = "sparse"
    recycle: bool = True

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.shots < 1:
            raise UsageError("--shots must be at least 1")
        if self.machine_precision < 1:
            raise UsageError("--mp must be at least 1")
        if not 1 <= self.max_qubits <= DEFAULT_MAX_QUBITS:
            raise UsageError(f"--max-qubits must be between 1 and {DEFAULT_MAX_QUBITS}")


def parse_value(text: str):
    """A scalar classical expression (``0.1``, ``pi/4``) or a bracketed list of them."""
    text = text.strip()
    if text.startswith("[") and text.endswith("]"):
        inner = text[1:-1].strip()
        return [parse_value(t) for t in inner.split(",")] if inner else []
    try:
        return eval_classical(parse_expr(text), {})
    except (LexError, ParseError, EvalError) as exc:
        raise UsageError(f"cannot read value {text!r}: {exc}") from None


def parse_bindings(items: Sequence[str], flag: str) -> dict:
    out = {}
    for item in items or ():
        name, eq, value = item.partition("=")
        if not eq or not name.strip():
            raise UsageError(f"{flag} expects NAME=VALUE, got {item!r}")
        out[name.strip()] = parse_value(value)
    return out


def load_source(cfg: RunConfig) -> tuple[str, str]:
    """(source text, display filename); corpus defaults are merged into cfg."""
    if os.path.exists(cfg.input):
        with open(cfg.input, encoding="utf-8") as fh:
            return fh.read(), cfg.input
    entry = CORPUS.get(cfg.input)
    if entry is None:
        raise UsageError(f"{cfg.input!r} is neither a file nor a corpus program "
                         f"({', '.join(CORPUS)})")
    cfg.args = {**entry.args, **cfg.args}
    cfg.consts = {**entry.consts, **cfg.consts}
    return entry.source(), entry.filename


def compile_config(cfg: RunConfig, source: str, filename: str) -> Compiled:
    return compile_source(source, filename, cfg.args, cfg.consts, cfg.machine_precision, cfg.recycle)


def cmd_compile(cfg: RunConfig, compiled: Compiled) -> str:
    return emit_qasm3(compiled.decomposed())


def cmd_report(cfg: RunConfig, compiled: Compiled) -> str:
    return resource_report(compiled.decomposed()).to_text()


def _simulate(cfg: RunConfig, compiled: Compiled):
    return run(compiled.circuit, max_qubits=cfg.max_qubits, seed=cfg.seed, backend=cfg.backend).state


def cmd_run(cfg: RunConfig, compiled: Compiled) -> str:
    state = _simulate(cfg, compiled)
    result = sample(state, cfg.shots, cfg.seed)
    lines = []
    for name in result.names:
        lines.append(f"# {name}")
        lines.append("value\tcount\tprob")
        for v, n, p in result.table(name):
            lines.append(f"{format_value(v)}\t{n}\t{p:.6g}")
    return "\n".join(lines) + "\n"


def cmd_statevector(cfg: RunConfig, compiled: Compiled) -> str:
    state = _simulate(cfg, compiled)
    names = list(state.outputs)
    lines = ["index\t" + "\t".join(names) + "\tre\tim\tprob"]
    codes = [state.register_index(state.outputs[n].ids) for n in names]
    for k, amp in enumerate(state.amplitudes):
        amp = complex(amp)
        if abs(amp) <= 1e-12:
            continue
        vals = [format_value(decode_value(int(c[k]), state.outputs[n].qtype)) for c, n in zip(codes, names)]
        lines.append(f"{int(state.indices[k])}\t" + "\t".join(vals)
                     + f"\t{amp.real:.10f}\t{amp.imag:.10f}\t{abs(amp) ** 2:.10f}")
    return "\n".join(lines) + "\n"


def cmd_phases(cfg: RunConfig, compiled: Compiled) -> str:
    state = _simulate(cfg, compiled)
    ids = [q for reg in state.outputs.values() for q in reg.ids]
    phases = relative_phases(state, 0, ids)
    lines = ["index\tphase"]
    lines += [f"{k}\t{v:.4f}" for k, v in phases.items()]
    return "\n".join(lines) + "\n"


HANDLERS = {"compile": cmd_compile, "run": cmd_run, "statevector": cmd_statevector,
            "phases": cmd_phases, "report": cmd_report}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="miniqmod", description="Compile and simulate mini-Qmod programs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("input", help="a .qmod file or the name of a shipped corpus program")
        s.add_argument("--arg", action="append", default=[], metavar="NAME=VALUE",
                       help="bind a classical parameter of main (scalars or [v1,v2,...])")
        s.add_argument("--const", action="append", default=[], metavar="NAME=VALUE",
                       help="define a compile-time constant")
        s.add_argument("--mp", type=int, default=DEFAULT_MACHINE_PRECISION,
                       help="machine precision: fraction digits for constants")
        s.add_argument("--no-recycle", action="store_true", help="never reuse released qubits")
        s.add_argument("-o", "--output", help="write to this file instead of stdout")
        if name in ("run", "statevector", "phases"):
            s.add_argument("--shots", type=int, default=1024)
            s.add_argument("--seed", type=int, default=None)
            s.add_argument("--max-qubits", type=int, default=DEFAULT_MAX_QUBITS)
            s.add_argument("--backend", choices=("sparse", "dense"), default="sparse")
    return p


def config_from_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    return RunConfig(
        command=ns.command, input=ns.input,
        shots=getattr(ns, "shots", 1024), seed=getattr(ns, "seed", None),
        machine_precision=ns.mp, max_qubits=getattr(ns, "max_qubits", DEFAULT_MAX_QUBITS),
        args=parse_bindings(ns.arg, "--arg"), consts=parse_bindings(ns.const, "--const"),
        output=ns.output, backend=getattr(ns, "backend", "sparse"), recycle=not ns.no_recycle,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = config_from_args(argv)
        source, filename = load_source(cfg)
    except UsageError as exc:
        print(f"miniqmod: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        compiled = compile_config(cfg, source, filename)
    except (LexError, ParseError) as exc:
        print(f"{filename}:{exc.span}: error: {exc.message}", file=sys.stderr)
        return EXIT_DIAGNOSTICS
    except SemaError as exc:
        for d in exc.diagnostics:
            print(d, file=sys.stderr)
        return EXIT_DIAGNOSTICS
    for w in compiled.warnings:
        print(w, file=sys.stderr)
    try:
        text = HANDLERS[cfg.command](cfg, compiled)
    except (SimulationError, NotSeparable, ZeroReference) as exc:
        print(f"miniqmod: simulation error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Source text to circuit in one call."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .frontend import parse
from .ir import CircuitIR, decompose_multicontrol
from .sema import Diagnostic, TypedProgram, analyze
from .synth import synthesize
from .types.interval import DEFAULT_MACHINE_PRECISION


@dataclass
class Compiled:
    typed: TypedProgram
    circuit: CircuitIR
    warnings: list[Diagnostic] = field(default_factory=list)

    def decomposed(self, ancilla_policy: str = "reuse") -> CircuitIR:
        return decompose_multicontrol(self.circuit, ancilla_policy)


def compile_source(source: str, filename: str = "<input>", args: Optional[Mapping] = None,
                   consts: Optional[Mapping] = None,
                   machine_precision: int = DEFAULT_MACHINE_PRECISION,
                   recycle: bool = True) -> Compiled:
    """Parse, check and synthesize ``source``.

    Raises LexError/ParseError/SemaError with positioned diagnostics. The
    returned circuit may still contain multi-controlled gates; use
    :meth:`Compiled.decomposed` for a CCX/CX/CP-only version.
    """
    program = parse(source, filename)
    typed = analyze(program, args, consts, machine_precision)
    return Compiled(typed, synthesize(typed, recycle=recycle), list(typed.warnings))


def compile_file(path, **kw) -> Compiled:
    with open(path, encoding="utf-8") as fh:
        return compile_source(fh.read(), filename=str(path), **kw)

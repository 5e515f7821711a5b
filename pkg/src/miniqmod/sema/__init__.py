from typing import Mapping, Optional

from ..frontend import ast
from ..types.interval import DEFAULT_MACHINE_PRECISION
from .diagnostics import ERROR, WARNING, Diagnostic, SemaError
from .elaborate import BUILTIN_GATES, resolve_and_typecheck
from .flow import check_init_flow, check_within_apply
from .qtypes import QArray, QBit, QNum, QRecord, QType, close_type, leaf_layout, numeric_format
from .typed import (Cell, OutputVar, Ref, Slot, TAllocate, TAmplitude, TAssign, TCall, TControl,
                    TExpr, TGate, TInplace, TInvert, TPhase, TPower, TRelease, TStmt, TWithin,
                    TypedProgram, walk)


def analyze(program: ast.Program, args: Optional[Mapping] = None, consts: Optional[Mapping] = None,
            machine_precision: int = DEFAULT_MACHINE_PRECISION) -> TypedProgram:
    """Run elaboration and both flow checks; raise SemaError on any error."""
    typed = resolve_and_typecheck(program, args, consts, machine_precision)
    diags = list(typed.warnings) + check_init_flow(typed) + check_within_apply(typed)
    if any(d.is_error for d in diags):
        raise SemaError(diags)
    typed.warnings = diags
    return typed


__all__ = [
    "ERROR", "WARNING", "BUILTIN_GATES", "Cell", "Diagnostic", "OutputVar", "QArray", "QBit", "QNum",
    "QRecord", "QType", "Ref", "SemaError", "Slot", "TAllocate", "TAmplitude", "TAssign", "TCall",
    "TControl", "TExpr", "TGate", "TInplace", "TInvert", "TPhase", "TPower", "TRelease", "TStmt",
    "TWithin", "TypedProgram", "analyze", "check_init_flow", "check_within_apply", "close_type",
    "leaf_layout", "numeric_format", "resolve_and_typecheck", "walk",
]

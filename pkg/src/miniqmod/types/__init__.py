from .expr import Binary, Const, Expr, Unary, UnknownVariable, UnsupportedOperator, Var, desugar, variables
from .fixedpoint import (AlignmentPlan, FixedPointFormat, NotRepresentable, SizeMismatch, decode,
                         encode, min_fraction_digits, plan_alignment, round_down, snap)
from .interval import (BOOL_FORMAT, DEFAULT_MACHINE_PRECISION, Annotated, LossyConstantWarning,
                       NumInterval, annotate, common_format, domain_interval, evaluate,
                       infer_format, infer_interval)

__all__ = [
    "AlignmentPlan", "Annotated", "BOOL_FORMAT", "Binary", "Const", "DEFAULT_MACHINE_PRECISION",
    "Expr", "FixedPointFormat", "LossyConstantWarning", "NotRepresentable", "NumInterval",
    "SizeMismatch", "Unary", "UnknownVariable", "UnsupportedOperator", "Var", "annotate",
    "common_format", "decode", "desugar", "domain_interval", "encode", "evaluate", "infer_format",
    "infer_interval", "min_fraction_digits", "plan_alignment", "round_down", "snap", "variables",
]

from .amplitude import multiplexed_ry, rotation_angle
from .arith import ONE, Reg, add_into, controlled_add_into, sub_into, xor_into
from .expr import ExprSynth
from .fragment import Emitter, SynthError, adjoint, conjugate, control, to_physical
from .lower import Lowerer, synthesize
from .phase import NonPolynomial, PhasePolynomial, expr_to_phase_polynomial, synth_phase

__all__ = [
    "Emitter", "ExprSynth", "Lowerer", "NonPolynomial", "ONE", "PhasePolynomial", "Reg", "SynthError",
    "add_into", "adjoint", "conjugate", "control", "controlled_add_into", "expr_to_phase_polynomial",
    "multiplexed_ry", "rotation_angle", "sub_into", "synth_phase", "synthesize", "to_physical",
    "xor_into",
]

"""Shared test plumbing: expression harness, cached corpus runs, random trees."""
from __future__ import annotations

import random
import warnings
from fractions import Fraction
from functools import lru_cache

from miniqmod.cli.corpus import CORPUS, compile_entry
from miniqmod.ir import Alloc, CircuitIR, Gate
from miniqmod.sim import run
from miniqmod.synth import ExprSynth, Reg
from miniqmod.synth.fragment import Emitter, assemble, to_physical
from miniqmod.types import Binary, Const, FixedPointFormat, LossyConstantWarning, Unary, Var, annotate

DIGITAL_OPS = ["add", "sub", "mul", "lt", "le", "gt", "ge", "eq", "ne", "bitand", "bitor", "bitxor"]


@lru_cache(maxsize=None)
def compiled(name, recycle=True):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return compile_entry(CORPUS[name], recycle=recycle)


@lru_cache(maxsize=None)
def final_state(name, recycle=True):
    return run(compiled(name, recycle).circuit).state


def expression_circuit(node, formats, superpose=True):
    """Circuit computing ``node`` out of place; inputs optionally put in uniform superposition.

    Returns (circuit, {var: physical ids}, result ids).
    """
    em = Emitter()
    ids = {k: tuple(em.fresh(f.size)) for k, f in formats.items()}
    env = {k: Reg(ids[k], formats[k]) for k in formats}
    frag, reg = ExprSynth(em, env).compute(node)
    events = [em.alloc(ids[k])[0] for k in formats]
    if superpose:
        events += [em.gate("H", (q,))[0] for k in formats for q in ids[k]]
    events += [e for e, _ in frag]
    outs = {"__r": (reg.ids, None), **{k: (ids[k], None) for k in formats}}
    phys, _, pouts = to_physical(events, True, (), outs)
    c = assemble(phys, [], pouts)
    return c, {k: pouts[k][0] for k in formats}, pouts["__r"][0]


def random_format(rng, max_size=3):
    n = rng.randint(1, max_size)
    signed = n >= 2 and rng.random() < 0.4
    frac = rng.randint(0, n - 1 if signed else n)
    return FixedPointFormat(n, signed, frac)


def random_tree(rng, names, depth, ops=DIGITAL_OPS, allow_unary=True):
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.25:
            return Const(Fraction(rng.randint(-6, 6), rng.choice([1, 2, 4])))
        return Var(rng.choice(names))
    if allow_unary and rng.random() < 0.15:
        return Unary(rng.choice(["neg", "bitnot"]), random_tree(rng, names, depth - 1, ops, allow_unary))
    return Binary(rng.choice(ops), random_tree(rng, names, depth - 1, ops, allow_unary),
                  random_tree(rng, names, depth - 1, ops, allow_unary))


def random_annotated(seed, max_vars=2, max_size=3, depth=3, ops=DIGITAL_OPS, mp=4, allow_unary=True,
                     max_qubits=None):
    """A non-constant annotated tree over at most ``max_qubits`` input qubits.

    Returns (raw tree, variable formats, annotated tree).
    """
    rng = random.Random(seed)
    while True:
        names = ["a", "b", "c"][:rng.randint(1, max_vars)]
        formats = {k: random_format(rng, max_size) for k in names}
        if max_qubits is not None and sum(f.size for f in formats.values()) > max_qubits:
            continue
        tree = random_tree(rng, names, depth, ops, allow_unary)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", LossyConstantWarning)
                node = annotate(tree, formats, mp)
        except Exception:
            continue
        if not node.is_const:
            return tree, formats, node


def prefix_circuit(c: CircuitIR, live_ids, events) -> CircuitIR:
    """``events`` preceded by an allocation of ``live_ids`` (in that order)."""
    return CircuitIR([Alloc(tuple(live_ids)), *events], dict(c.outputs))


def basis_run(c, ids, code, **kw):
    init = {q: (code >> j) & 1 for j, q in enumerate(ids)}
    return run(c, initial=init, check_hygiene=False, **kw).state


def gate_list(kinds_and_qubits):
    return [Gate(k, q, p) for k, q, p in kinds_and_qubits]

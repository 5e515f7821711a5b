"""Circuit IR: an ordered event list over virtual qubit ids."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Union

from ..frontend.lexer import Span
from .gates import Gate


class InvalidCount(ValueError):
    pass


class PoolError(RuntimeError):
    pass


class InvalidCircuit(ValueError):
    pass


@dataclass(frozen=True)
class Alloc:
    ids: tuple[int, ...]
    span: Optional[Span] = field(default=None, compare=False, repr=False)
    origin: str = field(default="", compare=False, repr=False)

    def remap(self, mapping) -> "Alloc":
        return Alloc(tuple(mapping.get(q, q) for q in self.ids), self.span, self.origin)


@dataclass(frozen=True)
class Release:
    ids: tuple[int, ...]
    span: Optional[Span] = field(default=None, compare=False, repr=False)
    origin: str = field(default="", compare=False, repr=False)

    def remap(self, mapping) -> "Release":
        return Release(tuple(mapping.get(q, q) for q in self.ids), self.span, self.origin)


Event = Union[Gate, Alloc, Release]


class QubitPool:
    """Clean-qubit allocator. Released ids are reused last-in first-out.

    With ``recycle=False`` every allocation gets fresh ids.
    """

    def __init__(self, recycle: bool = True, first_id: int = 0):
        self.recycle = recycle
        self.free: list[int] = []
        self.next_fresh = first_id
        self.live: set[int] = set()

    def alloc(self, n: int) -> list[int]:
        if n < 1:
            raise InvalidCount(f"cannot allocate {n} qubits")
        ids = []
        for _ in range(n):
            if self.recycle and self.free:
                q = self.free.pop()
            else:
                q = self.next_fresh
                self.next_fresh += 1
            ids.append(q)
        self.live.update(ids)
        return ids

    def release(self, ids) -> None:
        for q in ids:
            if q not in self.live:
                raise PoolError(f"qubit {q} released while not live")
            self.live.remove(q)
            self.free.append(q)

    def snapshot(self):
        return (list(self.free), self.next_fresh, set(self.live))

    def restore(self, snap) -> None:
        free, nxt, live = snap
        self.free, self.next_fresh, self.live = list(free), nxt, set(live)


@dataclass(frozen=True)
class OutputRegister:
    name: str
    ids: tuple[int, ...]
    qtype: Any  # sema QType; kept untyped to avoid an import cycle

    @property
    def size(self) -> int:
        return len(self.ids)


@dataclass(frozen=True)
class Checkpoint:
    """Event index after a top-level statement and the ids allowed to be live there."""
    index: int
    live: frozenset
    span: Optional[Span] = None


@dataclass
class CircuitIR:
    events: list[Event] = field(default_factory=list)
    outputs: dict[str, OutputRegister] = field(default_factory=dict)
    checkpoints: list[Checkpoint] = field(default_factory=list)

    @property
    def gates(self) -> list[Gate]:
        return [e for e in self.events if isinstance(e, Gate)]

    @property
    def width(self) -> int:
        live, peak = set(), 0
        for e in self.events:
            if isinstance(e, Alloc):
                live.update(e.ids)
                peak = max(peak, len(live))
            elif isinstance(e, Release):
                live.difference_update(e.ids)
        return peak

    @property
    def num_ids(self) -> int:
        ids = self.all_ids()
        return max(ids) + 1 if ids else 0

    def all_ids(self) -> set[int]:
        out = set()
        for e in self.events:
            out.update(e.qubits if isinstance(e, Gate) else e.ids)
        return out

    def live_at_end(self) -> set[int]:
        live = set()
        for e in self.events:
            if isinstance(e, Alloc):
                live.update(e.ids)
            elif isinstance(e, Release):
                live.difference_update(e.ids)
        return live

    def copy(self) -> "CircuitIR":
        return CircuitIR(list(self.events), dict(self.outputs), list(self.checkpoints))


def validate(c: CircuitIR, allow_unallocated: bool = False) -> None:
    """Check operand liveness and alloc/release pairing; raise InvalidCircuit.

    ``allow_unallocated`` treats ids never allocated in ``c`` as live inputs,
    which is how fragments built over an enclosing circuit's qubits are checked.
    """
    live: set[int] = set()
    if allow_unallocated:
        live = c.all_ids() - {q for e in c.events if isinstance(e, Alloc) for q in e.ids}
    for i, e in enumerate(c.events):
        if isinstance(e, Alloc):
            for q in e.ids:
                if q in live:
                    raise InvalidCircuit(f"event {i}: qubit {q} allocated while live")
                live.add(q)
        elif isinstance(e, Release):
            for q in e.ids:
                if q not in live:
                    raise InvalidCircuit(f"event {i}: qubit {q} released while not live")
                live.remove(q)
        elif isinstance(e, Gate):
            for q in e.qubits:
                if q not in live:
                    raise InvalidCircuit(f"event {i}: {e} uses qubit {q} which is not live")
        else:
            raise InvalidCircuit(f"event {i}: unknown event {e!r}")
    for name, reg in c.outputs.items():
        for q in reg.ids:
            if q not in live:
                raise InvalidCircuit(f"output '{name}' qubit {q} is not live at the end")

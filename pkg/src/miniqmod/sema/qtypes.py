"""Concrete quantum types after classical sizes have been evaluated.

A type with a ``None`` size component is *open*: its size is fixed when the
object it describes is initialized (allocation, assignment or an output
argument). Bits are laid out LSB-first; records concatenate their fields in
declaration order and arrays their elements in index order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from ..types.fixedpoint import FixedPointFormat


@dataclass(frozen=True)
class QBit:
    @property
    def size(self) -> int:
        return 1

    @property
    def is_open(self) -> bool:
        return False

    def __str__(self):
        return "qbit"


@dataclass(frozen=True)
class QNum:
    fmt: Optional[FixedPointFormat] = None

    @property
    def size(self) -> Optional[int]:
        return None if self.fmt is None else self.fmt.size

    @property
    def is_open(self) -> bool:
        return self.fmt is None

    def __str__(self):
        if self.fmt is None:
            return "qnum"
        return str(self.fmt)


@dataclass(frozen=True)
class QArray:
    element: "QType"
    length: Optional[int] = None

    @property
    def size(self) -> Optional[int]:
        if self.length is None or self.element.size is None:
            return None
        return self.length * self.element.size

    @property
    def is_open(self) -> bool:
        return self.length is None or self.element.is_open

    def __str__(self):
        if self.length is None:
            return f"qarray[{self.element}]"
        return f"qarray[{self.element}, {self.length}]"


@dataclass(frozen=True)
class QRecord:
    name: str
    fields: tuple[tuple[str, "QType"], ...]

    @property
    def size(self) -> int:
        return sum(t.size for _, t in self.fields)

    @property
    def is_open(self) -> bool:
        return False

    def field(self, name: str) -> tuple[int, "QType"]:
        """Bit offset and type of a field."""
        offset = 0
        for fname, ftype in self.fields:
            if fname == name:
                return offset, ftype
            offset += ftype.size
        raise KeyError(name)

    def __str__(self):
        return self.name


QType = Union[QBit, QNum, QArray, QRecord]

BIT_FORMAT = FixedPointFormat(1, False, 0)


def numeric_format(t: QType) -> Optional[FixedPointFormat]:
    """Format used when ``t`` appears inside an arithmetic expression."""
    if isinstance(t, QBit):
        return BIT_FORMAT
    if isinstance(t, QNum):
        return t.fmt
    return None


def close_type(declared: QType, size: int, storage: Optional[QType] = None) -> Optional[QType]:
    """Complete an open declared type so that it covers ``size`` bits.

    ``storage`` is the type the object was initialized with; an open ``qnum``
    adopts its numeric format when it has one. Returns None when ``size`` is
    incompatible with ``declared``.
    """
    if not declared.is_open:
        return declared if declared.size == size else None
    if isinstance(declared, QNum):
        if isinstance(storage, QNum) and storage.fmt is not None and storage.fmt.size == size:
            return storage
        return QNum(FixedPointFormat(size, False, 0))
    if isinstance(declared, QArray):
        elem = declared.element
        if declared.length is not None:
            if size % declared.length:
                return None
            elem = close_type(elem, size // declared.length)
            return None if elem is None else QArray(elem, declared.length)
        if elem.is_open:
            return None
        if size % elem.size:
            return None
        return QArray(elem, size // elem.size)
    return None


def leaf_layout(t: QType, offset: int = 0) -> list[tuple[int, QType]]:
    """Offsets of the scalar leaves (qbit/qnum) of a closed type."""
    if isinstance(t, (QBit, QNum)):
        return [(offset, t)]
    out = []
    if isinstance(t, QArray):
        for i in range(t.length):
            out.extend(leaf_layout(t.element, offset + i * t.element.size))
    else:
        for _, ft in t.fields:
            out.extend(leaf_layout(ft, offset))
            offset += ft.size
    return out

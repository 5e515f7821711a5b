from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..frontend.lexer import Span

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    span: Span
    hint: Optional[str] = None
    filename: str = "<input>"

    @property
    def is_error(self) -> bool:
        return self.severity == ERROR

    def __str__(self):
        text = f"{self.filename}:{self.span.line}:{self.span.col}: {self.severity}: {self.message}"
        if self.hint:
            text += f"\n  hint: {self.hint}"
        return text


class SemaError(Exception):
    """Raised when analysis produced at least one error diagnostic."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics if d.is_error))

    @property
    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.is_error]

"""Source printer. Output reparses to a structurally identical tree."""
from __future__ import annotations

from . import ast

_SYM = {
    "add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "**",
    "lt": "<", "le": "<=", "gt": ">", "ge": ">=", "eq": "==", "ne": "!=",
    "and": "and", "or": "or", "bitand": "&", "bitor": "|", "bitxor": "^",
    "shl": "<<", "shr": ">>",
}
_UNARY = {"neg": "-", "bitnot": "~", "not": "not "}


def format_expr(e) -> str:
    if isinstance(e, ast.Num):
        if e.text:
            return e.text
        v = e.value
        return str(v.numerator) if v.denominator == 1 else f"({v.numerator} / {v.denominator})"
    if isinstance(e, ast.Name):
        return e.id
    if isinstance(e, ast.Attr):
        return f"{format_expr(e.base)}.{e.name}"
    if isinstance(e, ast.Index):
        return f"{format_expr(e.base)}[{format_expr(e.index)}]"
    if isinstance(e, ast.UnaryOp):
        return f"{_UNARY[e.op]}({format_expr(e.operand)})"
    if isinstance(e, ast.BinOp):
        return f"({format_expr(e.left)} {_SYM[e.op]} {format_expr(e.right)})"
    if isinstance(e, ast.CallExpr):
        return f"{e.func}({', '.join(format_expr(a) for a in e.args)})"
    raise TypeError(f"not an expression: {e!r}")


def format_type(t) -> str:
    if isinstance(t, ast.QBitType):
        return "qbit"
    if isinstance(t, ast.QNumType):
        if t.size is None:
            return "qnum"
        if t.signed is None:
            return f"qnum[{format_expr(t.size)}]"
        sign = "signed" if t.signed else "unsigned"
        return f"qnum[{format_expr(t.size)}, {sign}, {format_expr(t.fraction_digits)}]"
    if isinstance(t, ast.QArrayType):
        if t.length is None:
            return f"qarray[{format_type(t.element)}]"
        return f"qarray[{format_type(t.element)}, {format_expr(t.length)}]"
    if isinstance(t, ast.NamedType):
        return t.name
    if isinstance(t, ast.IntType):
        return "int"
    if isinstance(t, ast.RealType):
        return "real"
    if isinstance(t, ast.CArrayType):
        if t.length is None:
            return f"array[{format_type(t.element)}]"
        return f"array[{format_type(t.element)}, {format_expr(t.length)}]"
    if isinstance(t, ast.FuncType):
        return f"qfunc({', '.join(format_type(p) for p in t.params)})"
    raise TypeError(f"not a type: {t!r}")


def _block(stmts, indent: int) -> list[str]:
    out = []
    for s in stmts:
        out.extend(_stmt(s, indent))
    return out


def _braced(head: str, body, indent: int) -> list[str]:
    pad = "  " * indent
    return [f"{pad}{head}{{", *_block(body, indent + 1), f"{pad}}}"]


def _arg(a, indent: int) -> str:
    if isinstance(a, ast.Lambda):
        inner = "\n".join(_block(a.body, indent + 1))
        pad = "  " * indent
        body = f"{{\n{inner}\n{pad}}}" if inner else "{}"
        return f"|{', '.join(a.params)}| {body}"
    return format_expr(a)


def _stmt(s, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(s, ast.Decl):
        return [f"{pad}{s.name}: {format_type(s.type)};"]
    if isinstance(s, ast.Allocate):
        if s.size is not None:
            return [f"{pad}allocate({format_expr(s.size)}, {format_expr(s.target)});"]
        return [f"{pad}allocate({format_expr(s.target)});"]
    if isinstance(s, ast.Assign):
        return [f"{pad}{format_expr(s.target)} {s.op} {format_expr(s.value)};"]
    if isinstance(s, ast.Phase):
        return [f"{pad}phase({format_expr(s.expr)}, {format_expr(s.angle)});"]
    if isinstance(s, ast.AssignAmplitude):
        return [f"{pad}assign_amplitude({format_expr(s.expr)}, {format_expr(s.target)});"]
    if isinstance(s, ast.Control):
        return _braced(f"control ({format_expr(s.condition)}) ", s.body, indent)
    if isinstance(s, ast.Repeat):
        return _braced(f"repeat ({s.var}, {format_expr(s.count)}) ", s.body, indent)
    if isinstance(s, ast.WithinApply):
        within = _braced("within ", s.within, indent)
        apply = _braced("apply ", s.apply, indent)
        return within[:-1] + [within[-1] + " " + apply[0].lstrip()] + apply[1:]
    if isinstance(s, ast.Invert):
        return _braced("invert ", s.body, indent)
    if isinstance(s, ast.Power):
        return _braced(f"power ({format_expr(s.count)}) ", s.body, indent)
    if isinstance(s, ast.Call):
        return [f"{pad}{s.func}({', '.join(_arg(a, indent) for a in s.args)});"]
    raise TypeError(f"not a statement: {s!r}")


def format_program(program: ast.Program) -> str:
    chunks = []
    for item in program.items:
        if isinstance(item, ast.RecordDef):
            fields = [f"  {f.name}: {format_type(f.type)};" for f in item.fields]
            chunks.append("\n".join([f"qstruct {item.name} {{", *fields, "}"]))
        else:
            params = []
            for p in item.params:
                out = "output " if p.is_output else ""
                params.append(f"{p.name}: {out}{format_type(p.type)}")
            lines = [f"qfunc {item.name}({', '.join(params)}) {{", *_block(item.body, 1), "}"]
            chunks.append("\n".join(lines))
    return "\n\n".join(chunks) + "\n"

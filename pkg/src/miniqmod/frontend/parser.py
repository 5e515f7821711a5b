"""Recursive-descent parser for the external Qmod dialect."""
from __future__ import annotations

from typing import Union

from . import ast
from .lexer import Span, Token, tokenize

MAX_NESTING = 40

_RELATIONAL = {"<": "lt", "<=": "le", ">": "gt", ">=": "ge", "==": "eq", "!=": "ne"}
_ASSIGN_OPS = ("|=", "^=", "+=")


class ParseError(Exception):
    def __init__(self, message: str, span: Span, expected: str = "", found: str = ""):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span
        self.expected = expected
        self.found = found


class Parser:
    def __init__(self, tokens: list[Token], filename: str = "<input>"):
        self.tokens = tokens
        self.pos = 0
        self.filename = filename
        self.depth = 0

    # ---- token helpers ----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def error(self, expected: str) -> ParseError:
        found = self.tok.describe()
        return ParseError(f"expected {expected}, found {found}", self.tok.span, expected, found)

    def expect_op(self, text: str) -> Token:
        if not self.tok.is_op(text):
            raise self.error(f"'{text}'")
        return self.advance()

    def expect_kw(self, text: str) -> Token:
        if not self.tok.is_kw(text):
            raise self.error(f"'{text}'")
        return self.advance()

    def expect_ident(self) -> Token:
        if self.tok.kind != "ident":
            raise self.error("identifier")
        return self.advance()

    def accept_op(self, text: str) -> bool:
        if self.tok.is_op(text):
            self.advance()
            return True
        return False

    def nest(self):
        self.depth += 1
        if self.depth > MAX_NESTING:
            raise ParseError("nesting too deep", self.tok.span, "shallower nesting", self.tok.describe())

    def unnest(self):
        self.depth -= 1

    def span_from(self, start: Span) -> Span:
        prev = self.tokens[self.pos - 1] if self.pos else self.tok
        return Span(start.line, start.col, prev.span.end_line, prev.span.end_col)

    # ---- top level --------------------------------------------------------

    def parse_program(self) -> ast.Program:
        items = []
        while self.tok.kind != "eof":
            if self.tok.is_kw("qstruct"):
                items.append(self.parse_record())
            elif self.tok.is_kw("qfunc"):
                items.append(self.parse_func())
            else:
                raise self.error("'qfunc' or 'qstruct'")
        return ast.Program(items, filename=self.filename)

    def parse_record(self) -> ast.RecordDef:
        start = self.expect_kw("qstruct").span
        name = self.expect_ident().text
        self.expect_op("{")
        fields = []
        while not self.tok.is_op("}"):
            ftok = self.expect_ident()
            self.expect_op(":")
            ftype = self.parse_qtype()
            self.expect_op(";")
            fields.append(ast.FieldDef(ftok.text, ftype, span=ftok.span))
        self.expect_op("}")
        return ast.RecordDef(name, fields, span=self.span_from(start))

    def parse_func(self) -> ast.FuncDef:
        start = self.expect_kw("qfunc").span
        name = self.expect_ident().text
        self.expect_op("(")
        params = []
        if not self.tok.is_op(")"):
            params.append(self.parse_param())
            while self.accept_op(","):
                params.append(self.parse_param())
        self.expect_op(")")
        body = self.parse_block()
        return ast.FuncDef(name, params, body, span=self.span_from(start))

    def parse_param(self) -> ast.Param:
        tok = self.expect_ident()
        self.expect_op(":")
        is_output = False
        if self.tok.is_kw("output"):
            self.advance()
            is_output = True
        if self.tok.is_kw("qfunc"):
            ptype = self.parse_fn_type()
        elif self.tok.kind == "kw" and self.tok.text in ("int", "real", "array"):
            ptype = self.parse_ctype()
        else:
            ptype = self.parse_qtype()
        return ast.Param(tok.text, ptype, is_output, span=self.span_from(tok.span))

    # ---- types ------------------------------------------------------------

    def parse_fn_type(self) -> ast.FuncType:
        start = self.expect_kw("qfunc").span
        self.expect_op("(")
        params = []
        if not self.tok.is_op(")"):
            params.append(self.parse_qtype())
            while self.accept_op(","):
                params.append(self.parse_qtype())
        self.expect_op(")")
        return ast.FuncType(params, span=self.span_from(start))

    def parse_qtype(self):
        self.nest()
        try:
            t = self.tok
            if t.is_kw("qbit"):
                self.advance()
                return ast.QBitType(span=t.span)
            if t.is_kw("qnum"):
                self.advance()
                if not self.accept_op("["):
                    return ast.QNumType(span=t.span)
                size = self.parse_expr()
                signed = frac = None
                if self.accept_op(","):
                    if self.tok.is_kw("signed") or self.tok.is_kw("unsigned"):
                        signed = self.advance().text == "signed"
                    else:
                        raise self.error("'signed' or 'unsigned'")
                    self.expect_op(",")
                    frac = self.parse_expr()
                self.expect_op("]")
                return ast.QNumType(size, signed, frac, span=self.span_from(t.span))
            if t.is_kw("qarray"):
                self.advance()
                self.expect_op("[")
                elem = self.parse_qtype()
                length = self.parse_expr() if self.accept_op(",") else None
                self.expect_op("]")
                return ast.QArrayType(elem, length, span=self.span_from(t.span))
            if t.kind == "ident":
                self.advance()
                return ast.NamedType(t.text, span=t.span)
            raise self.error("quantum type")
        finally:
            self.unnest()

    def parse_ctype(self):
        self.nest()
        try:
            t = self.tok
            if t.is_kw("int"):
                self.advance()
                return ast.IntType(span=t.span)
            if t.is_kw("real"):
                self.advance()
                return ast.RealType(span=t.span)
            if t.is_kw("array"):
                self.advance()
                self.expect_op("[")
                elem = self.parse_ctype()
                length = self.parse_expr() if self.accept_op(",") else None
                self.expect_op("]")
                return ast.CArrayType(elem, length, span=self.span_from(t.span))
            raise self.error("classical type")
        finally:
            self.unnest()

    # ---- statements -------------------------------------------------------

    def parse_block(self) -> list:
        self.expect_op("{")
        self.nest()
        stmts = []
        while not self.tok.is_op("}"):
            if self.tok.kind == "eof":
                raise self.error("'}'")
            stmts.append(self.parse_stmt())
        self.unnest()
        self.expect_op("}")
        return stmts

    def parse_stmt(self):
        t = self.tok
        start = t.span
        if t.kind == "ident" and self.peek().is_op(":"):
            self.advance()
            self.advance()
            qtype = self.parse_qtype()
            self.expect_op(";")
            return ast.Decl(t.text, qtype, span=self.span_from(start))
        if t.kind == "ident" and self.peek().is_op("("):
            self.advance()
            args = self.parse_call_args()
            self.expect_op(";")
            return ast.Call(t.text, args, span=self.span_from(start))
        if t.is_kw("allocate"):
            self.advance()
            self.expect_op("(")
            first = self.parse_expr()
            size = None
            if self.accept_op(","):
                size, first = first, self.parse_path()
            elif not ast.is_path(first):
                raise ParseError("allocate target must be a variable path", first.span, "path", "expression")
            self.expect_op(")")
            self.expect_op(";")
            return ast.Allocate(first, size, span=self.span_from(start))
        if t.is_kw("phase"):
            self.advance()
            self.expect_op("(")
            expr = self.parse_expr()
            self.expect_op(",")
            angle = self.parse_expr()
            self.expect_op(")")
            self.expect_op(";")
            return ast.Phase(expr, angle, span=self.span_from(start))
        if t.is_kw("assign_amplitude"):
            self.advance()
            self.expect_op("(")
            expr = self.parse_expr()
            self.expect_op(",")
            target = self.parse_path()
            self.expect_op(")")
            self.expect_op(";")
            return ast.AssignAmplitude(expr, target, span=self.span_from(start))
        if t.is_kw("control"):
            self.advance()
            self.expect_op("(")
            cond = self.parse_expr()
            self.expect_op(")")
            return ast.Control(cond, self.parse_block(), span=self.span_from(start))
        if t.is_kw("repeat"):
            self.advance()
            self.expect_op("(")
            var = self.expect_ident().text
            self.expect_op(",")
            count = self.parse_expr()
            self.expect_op(")")
            return ast.Repeat(var, count, self.parse_block(), span=self.span_from(start))
        if t.is_kw("within"):
            self.advance()
            within = self.parse_block()
            self.expect_kw("apply")
            return ast.WithinApply(within, self.parse_block(), span=self.span_from(start))
        if t.is_kw("invert"):
            self.advance()
            return ast.Invert(self.parse_block(), span=self.span_from(start))
        if t.is_kw("power"):
            self.advance()
            self.expect_op("(")
            count = self.parse_expr()
            self.expect_op(")")
            return ast.Power(count, self.parse_block(), span=self.span_from(start))
        if t.kind == "ident":
            target = self.parse_path()
            if self.tok.kind == "op" and self.tok.text in _ASSIGN_OPS:
                op = self.advance().text
                value = self.parse_expr()
                self.expect_op(";")
                return ast.Assign(op, target, value, span=self.span_from(start))
            raise self.error("'|=', '^=' or '+='")
        raise self.error("statement")

    def parse_call_args(self) -> list:
        self.expect_op("(")
        args = []
        if not self.tok.is_op(")"):
            args.append(self.parse_arg())
            while self.accept_op(","):
                args.append(self.parse_arg())
        self.expect_op(")")
        return args

    def parse_arg(self):
        if self.tok.is_op("|"):
            start = self.advance().span
            params = []
            if not self.tok.is_op("|"):
                params.append(self.expect_ident().text)
                while self.accept_op(","):
                    params.append(self.expect_ident().text)
            self.expect_op("|")
            body = self.parse_block()
            return ast.Lambda(params, body, span=self.span_from(start))
        return self.parse_expr()

    def parse_path(self):
        tok = self.expect_ident()
        node = ast.Name(tok.text, span=tok.span)
        while True:
            if self.tok.is_op("."):
                self.advance()
                name = self.expect_ident().text
                node = ast.Attr(node, name, span=self.span_from(tok.span))
            elif self.tok.is_op("["):
                self.advance()
                idx = self.parse_expr()
                self.expect_op("]")
                node = ast.Index(node, idx, span=self.span_from(tok.span))
            else:
                return node

    # ---- expressions ------------------------------------------------------

    def parse_expr(self):
        self.nest()
        try:
            return self._logical_or()
        finally:
            self.unnest()

    def _binary_level(self, next_level, ops: dict, keyword: bool = False):
        left = next_level()
        while True:
            t = self.tok
            hit = (t.kind == "kw" if keyword else t.kind == "op") and t.text in ops
            if not hit:
                return left
            self.advance()
            right = next_level()
            left = ast.BinOp(ops[t.text], left, right, span=left.span.to(right.span))

    def _logical_or(self):
        return self._binary_level(self._logical_and, {"or": "or"}, keyword=True)

    def _logical_and(self):
        return self._binary_level(self._bitor, {"and": "and"}, keyword=True)

    def _bitor(self):
        return self._binary_level(self._bitxor, {"|": "bitor"})

    def _bitxor(self):
        return self._binary_level(self._bitand, {"^": "bitxor"})

    def _bitand(self):
        return self._binary_level(self._relational, {"&": "bitand"})

    def _relational(self):
        return self._binary_level(self._shift, _RELATIONAL)

    def _shift(self):
        return self._binary_level(self._additive, {"<<": "shl", ">>": "shr"})

    def _additive(self):
        return self._binary_level(self._multiplicative, {"+": "add", "-": "sub"})

    def _multiplicative(self):
        return self._binary_level(self._power, {"*": "mul", "/": "div"})

    def _power(self):
        base = self._unary()
        if self.tok.is_op("**"):
            self.advance()
            self.nest()
            try:
                exponent = self._power()
            finally:
                self.unnest()
            return ast.BinOp("pow", base, exponent, span=base.span.to(exponent.span))
        return base

    def _unary(self):
        t = self.tok
        op = None
        if t.is_op("-"):
            op = "neg"
        elif t.is_op("~"):
            op = "bitnot"
        elif t.is_kw("not"):
            op = "not"
        elif t.is_op("+"):
            op = "pos"
        if op is None:
            return self._postfix()
        self.advance()
        self.nest()
        try:
            operand = self._unary()
        finally:
            self.unnest()
        if op == "pos":
            return operand
        return ast.UnaryOp(op, operand, span=t.span.to(operand.span))

    def _postfix(self):
        node = self._primary()
        while True:
            if self.tok.is_op("."):
                self.advance()
                name = self.expect_ident().text
                node = ast.Attr(node, name, span=self.span_from(node.span))
            elif self.tok.is_op("["):
                self.advance()
                idx = self.parse_expr()
                self.expect_op("]")
                node = ast.Index(node, idx, span=self.span_from(node.span))
            else:
                return node

    def _primary(self):
        t = self.tok
        if t.kind == "number":
            self.advance()
            return ast.Num(t.value, t.text, span=t.span)
        callable_kw = t.is_kw("int") and self.peek().is_op("(")
        if t.kind == "ident" or callable_kw:
            self.advance()
            if self.tok.is_op("("):
                self.advance()
                args = []
                if not self.tok.is_op(")"):
                    args.append(self.parse_expr())
                    while self.accept_op(","):
                        args.append(self.parse_expr())
                self.expect_op(")")
                return ast.CallExpr(t.text, args, span=self.span_from(t.span))
            return ast.Name(t.text, span=t.span)
        if t.is_op("("):
            self.advance()
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        raise self.error("expression")


def parse(tokens: Union[list[Token], str, bytes], filename: str = "<input>") -> ast.Program:
    if not isinstance(tokens, list):
        tokens = tokenize(tokens)
    return Parser(tokens, filename).parse_program()


def parse_expr(source: str):
    p = Parser(tokenize(source))
    e = p.parse_expr()
    if p.tok.kind != "eof":
        raise p.error("end of expression")
    return e

from . import ast
from .classical import EvalError, eval_classical
from .lexer import LexError, Span, Token, tokenize
from .parser import ParseError, parse, parse_expr
from .printer import format_expr, format_program, format_type

__all__ = ["ast", "EvalError", "LexError", "ParseError", "Span", "Token", "eval_classical",
           "format_expr", "format_program", "format_type", "parse", "parse_expr", "tokenize"]

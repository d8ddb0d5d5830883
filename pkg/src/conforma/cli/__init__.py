"""Command-line front end and the expression language it reads."""

from .expr import EvalError, ParseError, compile_expr, differentiate, eval_expr, parse_expr
from .main import run

"""Compile user expressions from run configurations into numpy callables.

Grammar: numbers, ``+ - * / ^``, parentheses, ``sin cos exp``, the constants
``pi`` and ``E``, the variables ``x y t u`` and declared parameters.
"""

from tokenize import TokenError
from typing import Dict, Iterable, Optional

import numpy as np
import sympy
from sympy.core.function import AppliedUndef
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from core.errors import ConfigError

ALLOWED_FUNCTIONS = {"sin": sympy.sin, "cos": sympy.cos, "exp": sympy.exp}
CONSTANTS = {"pi": sympy.pi, "E": sympy.E}
ALLOWED_VARIABLES = ("x", "y", "t", "u")
TRANSFORMATIONS = standard_transformations + (convert_xor,)

# Names the parser itself emits for literals and auto-created symbols.
_PARSER_GLOBALS = {
    "Integer": sympy.Integer,
    "Float": sympy.Float,
    "Rational": sympy.Rational,
    "Symbol": sympy.Symbol,
    "Function": sympy.Function,
}


class CompiledExpression:
    """A parsed expression together with a vectorized numpy evaluator."""

    def __init__(self, source: str, expr: sympy.Expr, variables: Iterable[str]):
        self.source = source
        self.expr = expr
        self.variables = tuple(variables)
        self._symbols = [sympy.Symbol(name) for name in self.variables]
        self._fn = sympy.lambdify(self._symbols, expr, modules="numpy")

    def __call__(self, *args) -> np.ndarray:
        arrays = [np.asarray(a, dtype=float) for a in args]
        shape = np.broadcast(*arrays).shape if arrays else ()
        return np.broadcast_to(np.asarray(self._fn(*arrays), dtype=float), shape)

    def derivative(self, variable: str) -> "CompiledExpression":
        expr = sympy.diff(self.expr, sympy.Symbol(variable))
        return CompiledExpression(f"d({self.source})/d{variable}", expr, self.variables)

    def __repr__(self) -> str:
        return f"CompiledExpression({self.source!r})"


def compile_expression(
    source: str,
    variables: Iterable[str] = ("x",),
    parameters: Optional[Dict[str, float]] = None,
) -> CompiledExpression:
    """Parse ``source`` and check that it only uses the allowed names.

    Raises:
        ConfigError: syntax errors, unknown symbols or unknown functions.
    """
    variables = tuple(variables)
    for name in variables:
        if name not in ALLOWED_VARIABLES:
            raise ConfigError(f"unsupported variable {name!r}")
    parameters = dict(parameters or {})
    clash = set(parameters) & (set(ALLOWED_VARIABLES) | set(ALLOWED_FUNCTIONS) | set(CONSTANTS))
    if clash:
        raise ConfigError(f"parameter names shadow reserved names: {sorted(clash)}")

    local_dict = {name: sympy.Symbol(name) for name in variables}
    local_dict.update({name: sympy.Float(value) for name, value in parameters.items()})
    local_dict.update(ALLOWED_FUNCTIONS)
    local_dict.update(CONSTANTS)
    try:
        expr = parse_expr(
            str(source),
            local_dict=local_dict,
            global_dict=dict(_PARSER_GLOBALS),
            transformations=TRANSFORMATIONS,
        )
    except (SyntaxError, TokenError, TypeError, ValueError, sympy.SympifyError) as exc:
        raise ConfigError(f"cannot parse expression {source!r}: {exc}") from exc

    if not isinstance(expr, sympy.Expr):
        raise ConfigError(f"expression {source!r} is not arithmetic")
    unknown_functions = {type(f).__name__ for f in expr.atoms(AppliedUndef)}
    if unknown_functions:
        raise ConfigError(f"unknown functions in {source!r}: {sorted(unknown_functions)}")
    allowed = {sympy.Symbol(name) for name in variables}
    unknown_symbols = {str(s) for s in expr.free_symbols - allowed}
    if unknown_symbols:
        raise ConfigError(f"unknown symbols in {source!r}: {sorted(unknown_symbols)}")
    return CompiledExpression(str(source), expr, variables)

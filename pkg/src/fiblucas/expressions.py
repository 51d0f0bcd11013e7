"""Parse small real-number expressions into certified sources.

Used for user-supplied τ and μ, e.g. ``log(alpha)/log(5)`` or
``sqrt(log(alpha)**2 + pi**2)``.  Pure rational expressions come back as
:class:`~fractions.Fraction` so the reduction can take its rational path.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Callable, Union

from .certified import CertifiedReal, abs_beta, alpha, pi, sqrt5
from .errors import ConfigError, Undecided

Source = Union[Fraction, Callable[[int], CertifiedReal]]

_CONSTANTS = {
    "alpha": alpha,
    "beta_abs": abs_beta,
    "sqrt5": sqrt5,
    "pi": pi,
    "e": lambda prec: CertifiedReal.exact(1, prec).exp(),
}
_FUNCTIONS = {"log", "sqrt", "exp", "abs"}


def parse_real(text: str) -> Source:
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse expression {text!r}: {exc.msg}") from None
    node = tree.body
    if _is_rational(node):
        return _rational(node)
    try:
        _evaluate(node, 64)  # surface unknown names and bad syntax now
    except Undecided:
        pass
    return lambda prec: _evaluate(node, prec)


def _is_rational(node) -> bool:
    if isinstance(node, ast.Constant):
        return True
    if isinstance(node, ast.UnaryOp):
        return _is_rational(node.operand)
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            return _is_rational(node.left) and _is_rational(node.right)
        return _is_rational(node.left) and _is_rational(node.right)
    return False


def _number(node) -> Fraction:
    value = node.value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"unsupported literal {value!r}")
    # decimal literals are taken exactly as written
    return Fraction(ast.unparse(node)) if isinstance(value, float) else Fraction(value)


def _rational(node) -> Fraction:
    if isinstance(node, ast.Constant):
        return _number(node)
    if isinstance(node, ast.UnaryOp):
        if not isinstance(node.op, (ast.USub, ast.UAdd)):
            raise ConfigError(f"unsupported operator {type(node.op).__name__}")
        v = _rational(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    left = _rational(node.left)
    if isinstance(node.op, ast.Pow):
        exp = _rational(node.right)
        if exp.denominator != 1:
            raise ConfigError("only integer powers are supported")
        try:
            return left ** int(exp)
        except ZeroDivisionError:
            raise ConfigError("zero raised to a negative power") from None
    right = _rational(node.right)
    ops = {ast.Add: lambda a, b: a + b, ast.Sub: lambda a, b: a - b,
           ast.Mult: lambda a, b: a * b, ast.Div: lambda a, b: a / b}
    try:
        return ops[type(node.op)](left, right)
    except KeyError:
        raise ConfigError(f"unsupported operator {type(node.op).__name__}") from None
    except ZeroDivisionError:
        raise ConfigError("division by zero in expression") from None


def _evaluate(node, prec: int) -> CertifiedReal:
    if isinstance(node, ast.Constant):
        return CertifiedReal.exact(_number(node), prec)
    if isinstance(node, ast.Name):
        if node.id not in _CONSTANTS:
            raise ConfigError(f"unknown name {node.id!r}; known: {', '.join(sorted(_CONSTANTS))}")
        return _CONSTANTS[node.id](prec)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _evaluate(node.operand, prec)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        left = _evaluate(node.left, prec)
        if isinstance(node.op, ast.Pow):
            if not _is_rational(node.right) or _rational(node.right).denominator != 1:
                raise ConfigError("only integer powers are supported")
            return left ** int(_rational(node.right))
        right = _evaluate(node.right, prec)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            return left / right
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCTIONS:
        if len(node.args) != 1 or node.keywords:
            raise ConfigError(f"{node.func.id} takes one argument")
        arg = _evaluate(node.args[0], prec)
        return abs(arg) if node.func.id == "abs" else getattr(arg, node.func.id)()
    raise ConfigError(f"unsupported expression element {ast.unparse(node)!r}")

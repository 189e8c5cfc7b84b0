r"""Text formats: vector-field expressions and structure definition files.

Vector-field grammar (EBNF)::

    field    = [sign] term { sign term } ;
    sign     = "+" | "-" ;
    term     = factor { "*" factor } ;        (* exactly one partial per term *)
    factor   = rational | monomial | partial ;
    rational = integer [ "/" integer ] ;
    monomial = variable [ "^" integer ] ;
    partial  = "d" variable ;
    variable = "x" | "y" | "z" | "w" | "x" integer ;

Examples: ``dx``, ``x^2*dy``, ``dy - x*dz``, ``3/2*x*y*dz``.

Structure definition files are plain text ``key = value`` lines (``#`` comments)::

    dimension = 3
    fields = dx ; dy - x*dz
    measure = 1
    domain.x = dirichlet(-1, 1)
    domain.y = periodic(2*pi)
    domain.z = twisted(2*pi, z += 1*y)

Domain bounds accept the closed arithmetic forms ``pi``, ``sqrt(...)``,
numbers, ``+ - * /`` and parentheses.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .poly import Polynomial
from .fields import VectorField


class ExpressionError(ValueError):
    """Syntax error carrying the offending position in the source text."""

    def __init__(self, message: str, text: str, pos: int):
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text!r}")


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z]\w*)|(?P<op>[\^*/+\-()]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == m.start():
            if text[pos:].strip() == "":
                break
            raise ExpressionError("unexpected character", text, pos)
        if m.group("num"):
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.group("name"):
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    return tokens


def _variable_index(name: str, dim: int, text: str, pos: int) -> int:
    short = {"x": 0, "y": 1, "z": 2, "w": 3}
    if name in short:
        idx = short[name]
    elif re.fullmatch(r"x\d+", name):
        idx = int(name[1:]) - 1
    else:
        raise ExpressionError(f"unknown variable {name!r}", text, pos)
    if not 0 <= idx < dim:
        raise ExpressionError(f"variable {name!r} out of range for dimension {dim}", text, pos)
    return idx


def parse_vector_field(text: str, dimension: int) -> VectorField:
    """Parse the documented grammar into an exact VectorField."""
    tokens = _tokenize(text)
    if not tokens:
        raise ExpressionError("empty expression", text, 0)
    components = [Polynomial.zero(dimension) for _ in range(dimension)]
    i = 0
    n = len(tokens)
    first = True
    while i < n:
        sign = Fraction(1)
        kind, val, pos = tokens[i]
        if kind == "op" and val in "+-":
            sign = Fraction(-1) if val == "-" else Fraction(1)
            i += 1
        elif not first:
            raise ExpressionError("expected '+' or '-' between terms", text, pos)
        first = False
        coeff = sign
        exps = [0] * dimension
        partial_axis = None
        expect_factor = True
        while i < n:
            kind, val, pos = tokens[i]
            if kind == "op" and val in "+-" and not expect_factor:
                break
            if not expect_factor:
                if kind == "op" and val == "*":
                    i += 1
                    expect_factor = True
                    continue
                raise ExpressionError("expected '*' or end of term", text, pos)
            if kind == "num":
                if "." in val or "e" in val or "E" in val:
                    raise ExpressionError("exact rational coefficients required (p/q)", text, pos)
                num = Fraction(int(val))
                i += 1
                if i < n and tokens[i][:2] == ("op", "/"):
                    if i + 1 >= n or tokens[i + 1][0] != "num":
                        raise ExpressionError("expected integer after '/'", text, pos)
                    num /= int(tokens[i + 1][1])
                    i += 2
                coeff *= num
            elif kind == "name" and val.startswith("d") and (
                val[1:] in ("x", "y", "z", "w") or re.fullmatch(r"dx\d+", val)
            ):
                if partial_axis is not None:
                    raise ExpressionError("two partials in one term", text, pos)
                partial_axis = _variable_index(val[1:], dimension, text, pos + 1)
                i += 1
            elif kind == "name":
                axis = _variable_index(val, dimension, text, pos)
                power = 1
                i += 1
                if i < n and tokens[i][:2] == ("op", "^"):
                    if i + 1 >= n or tokens[i + 1][0] != "num":
                        bad = tokens[i + 1][2] if i + 1 < n else len(text)
                        raise ExpressionError("expected integer exponent after '^'", text, bad)
                    power = int(tokens[i + 1][1])
                    i += 2
                exps[axis] += power
            else:
                raise ExpressionError("expected coefficient, monomial or partial", text, pos)
            expect_factor = False
        if partial_axis is None:
            raise ExpressionError("term has no partial (d<var>) factor", text, pos)
        components[partial_axis] = components[partial_axis] + Polynomial.monomial(
            dimension, exps, coeff
        )
    return VectorField(components)


def parse_polynomial(text: str, dimension: int) -> Polynomial:
    """Parse a polynomial (the field grammar without partials)."""
    tokens = _tokenize(text)
    if not tokens:
        raise ExpressionError("empty expression", text, 0)
    poly = Polynomial.zero(dimension)
    i = 0
    n = len(tokens)
    first = True
    while i < n:
        sign = Fraction(1)
        kind, val, pos = tokens[i]
        if kind == "op" and val in "+-":
            sign = Fraction(-1) if val == "-" else Fraction(1)
            i += 1
        elif not first:
            raise ExpressionError("expected '+' or '-' between terms", text, pos)
        first = False
        coeff = sign
        exps = [0] * dimension
        expect_factor = True
        while i < n:
            kind, val, pos = tokens[i]
            if kind == "op" and val in "+-" and not expect_factor:
                break
            if not expect_factor:
                if kind == "op" and val == "*":
                    i += 1
                    expect_factor = True
                    continue
                raise ExpressionError("expected '*' or end of term", text, pos)
            if kind == "num":
                if "." in val or "e" in val or "E" in val:
                    raise ExpressionError("exact rational coefficients required (p/q)", text, pos)
                num = Fraction(int(val))
                i += 1
                if i < n and tokens[i][:2] == ("op", "/"):
                    if i + 1 >= n or tokens[i + 1][0] != "num":
                        raise ExpressionError("expected integer after '/'", text, pos)
                    num /= int(tokens[i + 1][1])
                    i += 2
                coeff *= num
            elif kind == "name":
                axis = _variable_index(val, dimension, text, pos)
                power = 1
                i += 1
                if i < n and tokens[i][:2] == ("op", "^"):
                    if i + 1 >= n or tokens[i + 1][0] != "num":
                        bad = tokens[i + 1][2] if i + 1 < n else len(text)
                        raise ExpressionError("expected integer exponent after '^'", text, bad)
                    power = int(tokens[i + 1][1])
                    i += 2
                exps[axis] += power
            else:
                raise ExpressionError("expected coefficient or monomial", text, pos)
            expect_factor = False
        poly = poly + Polynomial.monomial(dimension, exps, coeff)
    return poly


# -- numeric bound expressions (sqrt, pi) -------------------------------------


def eval_numeric(text: str) -> float:
    """Evaluate closed arithmetic: numbers, pi, sqrt(), + - * /, parentheses."""
    tokens = _tokenize(text)
    pos = 0

    def expr():
        nonlocal pos
        v = term()
        while pos < len(tokens) and tokens[pos][:2] in (("op", "+"), ("op", "-")):
            op = tokens[pos][1]
            pos += 1
            rhs = term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term():
        nonlocal pos
        v = factor()
        while pos < len(tokens) and tokens[pos][:2] in (("op", "*"), ("op", "/")):
            op = tokens[pos][1]
            pos += 1
            rhs = factor()
            v = v * rhs if op == "*" else v / rhs
        return v

    def factor():
        nonlocal pos
        if pos >= len(tokens):
            raise ExpressionError("unexpected end of expression", text, len(text))
        kind, val, p = tokens[pos]
        if kind == "op" and val == "-":
            pos += 1
            return -factor()
        if kind == "num":
            pos += 1
            if pos < len(tokens) and tokens[pos][:2] == ("op", "."):  # pragma: no cover
                raise ExpressionError("decimal point not supported; use fractions", text, p)
            return float(val)
        if kind == "name" and val == "pi":
            pos += 1
            return math.pi
        if kind == "name" and val == "sqrt":
            pos += 1
            if pos >= len(tokens) or tokens[pos][:2] != ("op", "("):
                raise ExpressionError("expected '(' after sqrt", text, p)
            pos += 1
            v = expr()
            if pos >= len(tokens) or tokens[pos][:2] != ("op", ")"):
                raise ExpressionError("expected ')'", text, p)
            pos += 1
            return math.sqrt(v)
        if kind == "op" and val == "(":
            pos += 1
            v = expr()
            if pos >= len(tokens) or tokens[pos][:2] != ("op", ")"):
                raise ExpressionError("expected ')'", text, p)
            pos += 1
            return v
        raise ExpressionError(f"unexpected token {val!r}", text, p)

    v = expr()
    if pos != len(tokens):
        raise ExpressionError("trailing input", text, tokens[pos][2])
    return v

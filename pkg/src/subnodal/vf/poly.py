"""Exact multivariate polynomials over the rationals.

Terms are stored as a map from exponent multi-indices to ``fractions.Fraction``
coefficients; zero coefficients are never stored. All arithmetic is exact,
which is what makes brackets, flags and graded decompositions trustworthy.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

Exponent = tuple[int, ...]

VAR_NAMES_SHORT = ("x", "y", "z", "w")


def var_name(i: int, dim: int) -> str:
    if dim <= len(VAR_NAMES_SHORT):
        return VAR_NAMES_SHORT[i]
    return f"x{i + 1}"


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"exact coefficient expected (int/Fraction/str), got {type(c).__name__}")


class Polynomial:
    """Immutable polynomial in ``dim`` variables with rational coefficients."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[Exponent, Fraction] | None = None):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = dim
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for a, c in terms.items():
                if len(a) != dim:
                    raise ValueError(f"exponent {a} has wrong arity for dim {dim}")
                if any(e < 0 for e in a):
                    raise ValueError(f"negative exponent in {a}")
                c = _as_fraction(c)
                if c != 0:
                    clean[tuple(int(e) for e in a)] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, dim: int) -> "Polynomial":
        return cls(dim)

    @classmethod
    def constant(cls, dim: int, c) -> "Polynomial":
        return cls(dim, {(0,) * dim: _as_fraction(c)})

    @classmethod
    def variable(cls, i: int, dim: int) -> "Polynomial":
        a = [0] * dim
        a[i] = 1
        return cls(dim, {tuple(a): Fraction(1)})

    @classmethod
    def monomial(cls, dim: int, exponent: Iterable[int], c=1) -> "Polynomial":
        return cls(dim, {tuple(exponent): _as_fraction(c)})

    # -- predicates --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(a) == 0 for a in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.dim, Fraction(0))

    def total_degree(self) -> int:
        return max((sum(a) for a in self.terms), default=0)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "Polynomial"):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, Fraction(0)) + c
        return Polynomial(self.dim, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, Fraction(0)) - c
        return Polynomial(self.dim, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.dim, {a: -c for a, c in self.terms.items()})

    def scale(self, c) -> "Polynomial":
        c = _as_fraction(c)
        return Polynomial(self.dim, {a: c * v for a, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                key = tuple(i + j for i, j in zip(a, b))
                out[key] = out.get(key, Fraction(0)) + ca * cb
        return Polynomial(self.dim, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(self.dim, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def diff(self, axis: int) -> "Polynomial":
        out: dict[Exponent, Fraction] = {}
        for a, c in self.terms.items():
            if a[axis] == 0:
                continue
            b = list(a)
            b[axis] -= 1
            key = tuple(b)
            out[key] = out.get(key, Fraction(0)) + c * a[axis]
        return Polynomial(self.dim, out)

    def divide_exact(self, other: "Polynomial") -> "Polynomial":
        """Exact division; raises ValueError when the quotient is not polynomial."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if other.is_constant():
            return self.scale(Fraction(1) / other.constant_value())
        # Multivariate long division by a single divisor, lex order.
        lead = max(other.terms)  # lex-largest exponent
        lc = other.terms[lead]
        rem = dict(self.terms)
        quot: dict[Exponent, Fraction] = {}
        while rem:
            a = max(rem)
            c = rem[a]
            diff = tuple(i - j for i, j in zip(a, lead))
            if any(d < 0 for d in diff):
                raise ValueError("non-polynomial quotient")
            q = c / lc
            quot[diff] = quot.get(diff, Fraction(0)) + q
            for b, cb in other.terms.items():
                key = tuple(i + j for i, j in zip(diff, b))
                nv = rem.get(key, Fraction(0)) - q * cb
                if nv == 0:
                    rem.pop(key, None)
                else:
                    rem[key] = nv
        return Polynomial(self.dim, quot)

    # -- substitution / evaluation ------------------------------------------
    def compose(self, args: list["Polynomial"], max_degree: int | None = None) -> "Polynomial":
        """Substitute ``args[i]`` for variable ``i``; optional total-degree cutoff."""
        if len(args) != self.dim:
            raise ValueError("wrong number of substitution arguments")
        dim_out = args[0].dim
        out = Polynomial.zero(dim_out)
        pow_cache: list[dict[int, Polynomial]] = [dict() for _ in range(self.dim)]
        for a, c in self.terms.items():
            term = Polynomial.constant(dim_out, c)
            for i, e in enumerate(a):
                if e == 0:
                    continue
                if e not in pow_cache[i]:
                    pow_cache[i][e] = args[i] ** e
                term = term * pow_cache[i][e]
                if max_degree is not None:
                    term = term.truncate(max_degree)
            out = out + term
        if max_degree is not None:
            out = out.truncate(max_degree)
        return out

    def truncate(self, max_total_degree: int) -> "Polynomial":
        return Polynomial(
            self.dim, {a: c for a, c in self.terms.items() if sum(a) <= max_total_degree}
        )

    def eval_exact(self, point) -> Fraction:
        pt = [_as_fraction(v) if not isinstance(v, Fraction) else v for v in point]
        total = Fraction(0)
        for a, c in self.terms.items():
            v = c
            for i, e in enumerate(a):
                if e:
                    v *= pt[i] ** e
            total += v
        return total

    def eval_float(self, point) -> float:
        total = 0.0
        for a, c in self.terms.items():
            v = float(c)
            for i, e in enumerate(a):
                if e:
                    v *= float(point[i]) ** e
            total += v
        return total

    def eval_array(self, coords: list[np.ndarray]) -> np.ndarray:
        """Evaluate on broadcastable coordinate arrays (float path)."""
        shape = np.broadcast(*coords).shape if len(coords) > 1 else np.asarray(coords[0]).shape
        total = np.zeros(shape)
        for a, c in self.terms.items():
            v = np.full(shape, float(c))
            for i, e in enumerate(a):
                if e:
                    v = v * np.asarray(coords[i], dtype=float) ** e
            total += v
        return total

    def variables_used(self) -> set[int]:
        used: set[int] = set()
        for a in self.terms:
            for i, e in enumerate(a):
                if e:
                    used.add(i)
        return used

    # -- printing ------------------------------------------------------------
    def format(self, names: tuple[str, ...] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or tuple(var_name(i, self.dim) for i in range(self.dim))
        parts = []
        for a in sorted(self.terms, reverse=True):
            c = self.terms[a]
            factors = []
            for i, e in enumerate(a):
                if e == 1:
                    factors.append(names[i])
                elif e > 1:
                    factors.append(f"{names[i]}^{e}")
            body = "*".join(factors)
            mag = abs(c)
            if not body:
                piece = str(mag)
            elif mag == 1:
                piece = body
            else:
                piece = f"{mag}*{body}"
            parts.append(("- " if c < 0 else "+ ") + piece)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self):
        return f"Polynomial({self.dim}, {self.format()})"

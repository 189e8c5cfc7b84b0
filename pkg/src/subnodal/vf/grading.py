"""Anisotropic dilations and graded decompositions of vector fields.

A monomial term x^a d/dx_j has weighted degree <w,a> - w_j; the dilation with
weights w scales it by eps^(<w,a>-w_j). The degree -1 part of a field written
in privileged coordinates is its nilpotent approximation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import Polynomial
from .fields import VectorField


def term_weighted_degree(exponent: tuple[int, ...], axis: int, weights) -> int:
    return sum(w * e for w, e in zip(weights, exponent)) - weights[axis]


@dataclass(frozen=True)
class GradedDecomposition:
    """Split of a field into delta_eps-homogeneous components by weighted degree."""

    weights: tuple[int, ...]
    components: dict[int, VectorField]
    dim: int

    def reconstruct(self) -> VectorField:
        total = VectorField.zero(self.dim)
        for V in self.components.values():
            total = total + V
        return total

    @property
    def nilpotent_part(self) -> VectorField:
        """Degree -1 component (the hat field)."""
        return self.components.get(-1, VectorField.zero(self.dim))

    @property
    def degrees_below_minus_one(self) -> tuple[int, ...]:
        """Nonempty signals non-privileged coordinates for distribution fields."""
        return tuple(sorted(k for k in self.components if k < -1))

    def remainder_part(self) -> VectorField:
        """Sum of components of degree >= 0 (the eps-remainder, kept implicit)."""
        total = VectorField.zero(self.dim)
        for k, V in self.components.items():
            if k >= 0:
                total = total + V
        return total


def graded_decomposition(X: VectorField, weights) -> GradedDecomposition:
    w = tuple(int(v) for v in weights)
    if len(w) != X.dim or any(v < 1 for v in w):
        raise ValueError("weights must be positive integers, one per axis")
    buckets: dict[int, list[Polynomial]] = {}
    for axis, poly in enumerate(X.components):
        for a, c in poly.terms.items():
            k = term_weighted_degree(a, axis, w)
            comp = buckets.setdefault(k, [Polynomial.zero(X.dim) for _ in range(X.dim)])
            comp[axis] = comp[axis] + Polynomial.monomial(X.dim, a, c)
    components = {k: VectorField(parts) for k, parts in buckets.items()}
    return GradedDecomposition(weights=w, components=components, dim=X.dim)


def dilate_field(X: VectorField, weights, eps) -> VectorField:
    """Pullback of X under the dilation delta_eps; exact for rational eps != 0."""
    eps = Fraction(eps) if not isinstance(eps, Fraction) else eps
    if eps == 0:
        raise ValueError("eps must be nonzero")
    dec = graded_decomposition(X, weights)
    total = VectorField.zero(X.dim)
    for k, V in dec.components.items():
        total = total + V.scale(eps**k)
    return total


def nilpotent_approximation(X: VectorField, weights) -> VectorField:
    return graded_decomposition(X, weights).nilpotent_part


@dataclass(frozen=True)
class SymbolicDilation:
    """Dilation pullback with the scale left symbolic: sum_k eps^k * components[k]."""

    weights: tuple[int, ...]
    components: dict[int, VectorField]

    def at(self, eps) -> VectorField:
        total = VectorField.zero(next(iter(self.components.values())).dim)
        eps = Fraction(eps)
        for k, V in self.components.items():
            total = total + V.scale(eps**k)
        return total

    def format(self) -> str:
        parts = []
        for k in sorted(self.components):
            piece = self.components[k].format()
            if k == 0:
                parts.append(piece)
            else:
                parts.append(f"eps^{k}*({piece})")
        return " + ".join(parts) if parts else "0"


def dilate_field_symbolic(X: VectorField, weights) -> SymbolicDilation:
    """delta_eps pullback of X with eps kept symbolic (one term per degree)."""
    dec = graded_decomposition(X, weights)
    return SymbolicDilation(weights=dec.weights, components=dict(dec.components))

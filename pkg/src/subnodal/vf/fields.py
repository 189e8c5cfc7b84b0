"""Polynomial-coefficient vector fields: brackets, divergence, evaluation."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .poly import Polynomial, var_name


class VectorField:
    """Vector field sum_j components[j] * d/dx_j with exact polynomial coefficients."""

    __slots__ = ("dim", "components")

    def __init__(self, components: list[Polynomial] | tuple[Polynomial, ...]):
        comps = tuple(components)
        if not comps:
            raise ValueError("empty component list")
        dim = comps[0].dim
        if len(comps) != dim:
            raise ValueError(f"{len(comps)} components for dimension {dim}")
        if any(p.dim != dim for p in comps):
            raise ValueError("component dimension mismatch")
        self.dim = dim
        self.components = comps

    # -- constructors --------------------------------------------------------
    @classmethod
    def zero(cls, dim: int) -> "VectorField":
        return cls([Polynomial.zero(dim) for _ in range(dim)])

    @classmethod
    def coordinate(cls, axis: int, dim: int) -> "VectorField":
        comps = [Polynomial.zero(dim) for _ in range(dim)]
        comps[axis] = Polynomial.constant(dim, 1)
        return cls(comps)

    # -- algebra ---------------------------------------------------------------
    def _check(self, other: "VectorField"):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "VectorField":
        return VectorField([-a for a in self.components])

    def scale(self, c) -> "VectorField":
        return VectorField([p.scale(c) for p in self.components])

    def mul_poly(self, f: Polynomial) -> "VectorField":
        return VectorField([f * p for p in self.components])

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.components)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, VectorField)
            and self.dim == other.dim
            and self.components == other.components
        )

    def __hash__(self):
        return hash((self.dim, self.components))

    def apply(self, f: Polynomial) -> Polynomial:
        """Directional derivative Xf = sum_j a_j df/dx_j (exact)."""
        if f.dim != self.dim:
            raise ValueError("polynomial dimension mismatch")
        out = Polynomial.zero(self.dim)
        for j, a in enumerate(self.components):
            if not a.is_zero():
                out = out + a * f.diff(j)
        return out

    def evaluate_exact(self, point) -> list[Fraction]:
        return [p.eval_exact(point) for p in self.components]

    def evaluate_float(self, point) -> np.ndarray:
        return np.array([p.eval_float(point) for p in self.components])

    def evaluate_array(self, coords: list[np.ndarray]) -> np.ndarray:
        """Shape (len(points), dim) evaluation over broadcastable coordinates."""
        cols = [p.eval_array(coords) for p in self.components]
        return np.stack([np.asarray(c, dtype=float) for c in cols], axis=-1)

    def variables_used(self) -> set[int]:
        used: set[int] = set()
        for p in self.components:
            used |= p.variables_used()
        return used

    def format(self, names: tuple[str, ...] | None = None) -> str:
        names = names or tuple(var_name(i, self.dim) for i in range(self.dim))
        parts = []
        for j, p in enumerate(self.components):
            if p.is_zero():
                continue
            for a in sorted(p.terms, reverse=True):
                c = p.terms[a]
                factors = []
                for i, e in enumerate(a):
                    if e == 1:
                        factors.append(names[i])
                    elif e > 1:
                        factors.append(f"{names[i]}^{e}")
                body = "*".join(factors)
                mag = abs(c)
                if mag != 1 or not body:
                    body = f"{mag}*{body}" if body else str(mag)
                piece = f"{body}*d{names[j]}" if body != "1" else f"d{names[j]}"
                if body == "1":
                    piece = f"d{names[j]}"
                parts.append(("- " if c < 0 else "+ ") + piece)
        if not parts:
            return "0"
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self):
        return f"VectorField({self.format()})"


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X,Y] = X∘Y − Y∘X as a first-order operator; exact, bilinear, antisymmetric."""
    if X.dim != Y.dim:
        raise ValueError(f"dimension mismatch: {X.dim} vs {Y.dim}")
    comps = []
    for j in range(X.dim):
        comps.append(X.apply(Y.components[j]) - Y.apply(X.components[j]))
    return VectorField(comps)


def divergence(X: VectorField, measure) -> Polynomial:
    """div_mu(X) = (1/rho) sum_j d(rho X_j)/dx_j, exact.

    ``measure`` is the density polynomial rho, or a structure carrying one.
    Raises ValueError if rho does not divide the numerator exactly (the
    in-scope structures all use constant densities, where this never happens).
    """
    measure_density = getattr(measure, "measure_density", measure)
    if measure_density.dim != X.dim:
        raise ValueError("density dimension mismatch")
    if measure_density.is_zero():
        raise ValueError("measure density must be positive, got 0")
    num = Polynomial.zero(X.dim)
    for j, a in enumerate(X.components):
        num = num + (measure_density * a).diff(j)
    try:
        return num.divide_exact(measure_density)
    except ValueError as exc:
        raise ValueError(f"non-polynomial divergence quotient: {exc}") from exc

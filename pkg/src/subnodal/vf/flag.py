"""Bracket flag, growth vector, weights, Hoermander checks, non-holonomic orders."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .poly import Polynomial
from .fields import VectorField, lie_bracket
from .structure import SRStructure

PIVOT_RTOL = 1e-10  # relative pivot tolerance for float-point rank
REGULARITY_RADIUS = Fraction(1, 100)  # axis stencil radius for sampled regularity


@dataclass(frozen=True)
class FlagData:
    """Growth vector, step, weights and homogeneous dimension at a point.

    ``regular`` is decided by comparing growth vectors on a 2N-point axis
    stencil around the base point (sampled regularity: an open-neighborhood
    property cannot be decided from finitely many samples).
    ``hormander_confirmed`` is False when the flag did not reach full rank by
    ``depth_max`` (explicit status, not an exception).
    """

    growth_vector: tuple[int, ...]
    step: int
    weights: tuple[int, ...]
    homogeneous_dimension: int
    regular: bool
    hormander_confirmed: bool

    def __post_init__(self):
        if self.hormander_confirmed:
            gv = self.growth_vector
            if any(a > b for a, b in zip(gv, gv[1:])):
                raise ValueError("growth vector must be non-decreasing")
            if sum(self.weights) != self.homogeneous_dimension:
                raise ValueError("Q must equal the weight sum")


def weights_from_growth(growth: tuple[int, ...]) -> tuple[int, ...]:
    """w_i = j for n_{j-1} < i <= n_j."""
    weights = []
    prev = 0
    for j, nj in enumerate(growth, start=1):
        weights.extend([j] * (nj - prev))
        prev = nj
    return tuple(weights)


def bracket_layers(fields: tuple[VectorField, ...], depth_max: int) -> list[list[VectorField]]:
    """Layer j holds the brackets of word length j: D^{j+1} = D^j + [D, D^j]."""
    layers = [list(fields)]
    for _ in range(1, depth_max):
        new_layer = []
        for X in fields:
            for Y in layers[-1]:
                B = lie_bracket(X, Y)
                if not B.is_zero():
                    new_layer.append(B)
        layers.append(new_layer)
        if not new_layer:
            break
    return layers


def _rank_exact(rows: list[list[Fraction]]) -> int:
    mat = [list(r) for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, len(mat)):
            if mat[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        pivval = mat[row][col]
        for r in range(row + 1, len(mat)):
            if mat[r][col] != 0:
                f = mat[r][col] / pivval
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[row])]
        row += 1
        rank += 1
        if row == len(mat):
            break
    return rank


def _rank_float(rows: np.ndarray) -> int:
    if rows.size == 0:
        return 0
    s = np.linalg.svd(rows, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > PIVOT_RTOL * s[0]))


def _point_is_exact(q) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in q)


def growth_vector_at(
    S: SRStructure, q, depth_max: int, layers: list[list[VectorField]] | None = None
) -> tuple[tuple[int, ...], bool]:
    """Growth vector (n_1,...) at q plus a flag telling whether n_r = N was reached."""
    layers = layers if layers is not None else bracket_layers(S.fields, depth_max)
    exact = _point_is_exact(q)
    growth: list[int] = []
    vectors_exact: list[list[Fraction]] = []
    vectors_float: list[np.ndarray] = []
    complete = False
    for layer in layers:
        for X in layer:
            if exact:
                vectors_exact.append(X.evaluate_exact(q))
            else:
                vectors_float.append(X.evaluate_float(q))
        rank = (
            _rank_exact(vectors_exact)
            if exact
            else _rank_float(np.array(vectors_float, dtype=float))
        )
        growth.append(rank)
        if rank == S.dimension:
            complete = True
            break
    return tuple(growth), complete


def compute_flag(S: SRStructure, q, depth_max: int = 6, sample_radius=REGULARITY_RADIUS) -> FlagData:
    """Flag data at a point, with sampled regularity on a 2N-axis stencil."""
    if depth_max < 1:
        raise ValueError("depth_max must be >= 1")
    layers = bracket_layers(S.fields, depth_max)
    growth, complete = growth_vector_at(S, q, depth_max, layers)
    if not complete:
        return FlagData(
            growth_vector=growth,
            step=len(growth),
            weights=(),
            homogeneous_dimension=0,
            regular=False,
            hormander_confirmed=False,
        )
    weights = weights_from_growth(growth)
    Q = sum(weights)
    regular = True
    exact = _point_is_exact(q)
    radius = sample_radius if exact else float(sample_radius)
    for axis in range(S.dimension):
        for sgn in (1, -1):
            qq = list(q)
            qq[axis] = qq[axis] + sgn * radius
            g2, c2 = growth_vector_at(S, qq, depth_max, layers)
            if not c2 or g2 != growth:
                regular = False
                break
        if not regular:
            break
    return FlagData(
        growth_vector=growth,
        step=len(growth),
        weights=weights,
        homogeneous_dimension=Q,
        regular=regular,
        hormander_confirmed=True,
    )


@dataclass(frozen=True)
class HormanderReport:
    points: tuple[tuple, ...]
    flags: tuple[FlagData, ...]
    depth_max: int

    @property
    def all_pass(self) -> bool:
        return all(f.hormander_confirmed for f in self.flags)

    def summary(self) -> str:
        lines = [f"Hoermander check (depth_max={self.depth_max})"]
        for q, f in zip(self.points, self.flags):
            status = "pass" if f.hormander_confirmed else "FAIL"
            lines.append(f"  {tuple(float(v) for v in q)}: growth={f.growth_vector} {status}")
        lines.append("overall: " + ("pass" if self.all_pass else "FAIL"))
        return "\n".join(lines)


def check_hormander(S: SRStructure, points, depth_max: int = 6) -> HormanderReport:
    pts = tuple(tuple(q) for q in points)
    if not pts:
        raise ValueError("empty sample set")
    layers = bracket_layers(S.fields, depth_max)
    flags = []
    for q in pts:
        growth, complete = growth_vector_at(S, q, depth_max, layers)
        if complete:
            w = weights_from_growth(growth)
            flags.append(FlagData(growth, len(growth), w, sum(w), True, True))
        else:
            flags.append(FlagData(growth, len(growth), (), 0, False, False))
    return HormanderReport(pts, tuple(flags), depth_max)


def nonholonomic_order(S: SRStructure, f: Polynomial, q, p_max: int = 6):
    """Minimal word length p with (X_{i1}...X_{ip} f)(q) != 0; math.inf if none <= p_max.

    Breadth-first symbolic application; exact at rational points.
    """
    if p_max < 0:
        raise ValueError("p_max must be >= 0")
    exact = _point_is_exact(q)

    def nonzero(poly: Polynomial) -> bool:
        if exact:
            return poly.eval_exact(q) != 0
        return abs(poly.eval_float(q)) > 1e-12

    current = [f]
    if nonzero(f):
        return 0
    for p in range(1, p_max + 1):
        nxt = []
        for g in current:
            for X in S.fields:
                h = X.apply(g)
                if h.is_zero():
                    continue
                if nonzero(h):
                    return p
                nxt.append(h)
        current = nxt
        if not current:
            break
    return math.inf

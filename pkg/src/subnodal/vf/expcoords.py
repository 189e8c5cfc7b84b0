"""Privileged coordinates by exponential coordinates of the second kind.

The chart at q built from an adapted frame (Z_1,...,Z_N) is the inverse of

    (t_1,...,t_N) |-> exp(t_1 Z_1) ... exp(t_N Z_N)(q),

computed exactly: each flow is obtained by Picard iteration in the polynomial
ring (terminates because the in-scope frames are nilpotent within the
truncation degree), the composition is polynomial composition, and the inverse
is a formal series inverse truncated at the same degree. Exceeding the degree
cap raises instead of silently truncating, since a corrupted chart would
corrupt every non-holonomic order computed in it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import Polynomial
from .fields import VectorField
from .flag import bracket_layers, compute_flag, _rank_exact
from .structure import SRStructure


class FlowTruncationError(RuntimeError):
    """Flow or inverse series did not terminate within the configured degree."""


class FrameNotAdaptedError(ValueError):
    """The proposed frame fails the adaptedness rank test at the base point."""


def flow_polynomials(Z: VectorField, max_degree: int) -> list[Polynomial]:
    """Time-t flow of Z as polynomials in (p_1..p_N, t); exact Picard iteration."""
    N = Z.dim
    ring_dim = N + 1  # last variable is time
    t = Polynomial.variable(N, ring_dim)
    cur = [Polynomial.variable(j, ring_dim) for j in range(N)]
    z_lift = [
        Polynomial(ring_dim, {a + (0,): c for a, c in p.terms.items()}) for p in Z.components
    ]
    for _ in range(max_degree + 2):
        nxt = []
        for j in range(N):
            integrand = z_lift[j].compose(cur + [t])
            integral = Polynomial(
                ring_dim,
                {
                    a[:-1] + (a[-1] + 1,): c / (a[-1] + 1)
                    for a, c in integrand.terms.items()
                },
            )
            nxt.append(Polynomial.variable(j, ring_dim) + integral)
        if nxt == cur:
            return cur
        if any(p.total_degree() > max_degree for p in nxt):
            raise FlowTruncationError(
                f"flow series of {Z} exceeds degree {max_degree} without terminating"
            )
        cur = nxt
    raise FlowTruncationError(
        f"flow series of {Z} did not stabilize within degree {max_degree}"
    )


def check_frame_adapted(S: SRStructure, q, frame, weights, depth_max: int) -> None:
    """Adaptedness: frame spans T_qM and Z_i(q) lies in D^{w_i}_q."""
    if len(frame) != S.dimension:
        raise FrameNotAdaptedError(f"frame must have {S.dimension} fields")
    frame_vecs = [Z.evaluate_exact(q) for Z in frame]
    if _rank_exact(frame_vecs) != S.dimension:
        raise FrameNotAdaptedError("frame does not span the tangent space at q")
    layers = bracket_layers(S.fields, depth_max)
    basis: list[list[Fraction]] = []
    depth_rank: list[int] = []
    for layer in layers:
        for X in layer:
            basis.append(X.evaluate_exact(q))
        depth_rank.append(_rank_exact(basis) if basis else 0)
    max_depth = len(depth_rank)
    cumulative: list[list[Fraction]] = []
    for i, Z in enumerate(frame):
        w = weights[i]
        if w > max_depth:
            raise FrameNotAdaptedError(f"weight {w} exceeds available bracket depth")
        span_rows = []
        for layer in layers[:w]:
            for X in layer:
                span_rows.append(X.evaluate_exact(q))
        r0 = _rank_exact(span_rows) if span_rows else 0
        if _rank_exact(span_rows + [frame_vecs[i]]) != r0:
            raise FrameNotAdaptedError(
                f"frame field {i} is not in the depth-{w} distribution at q"
            )
        cumulative.append(frame_vecs[i])


@dataclass(frozen=True)
class Exp2Chart:
    """Privileged chart at q: forward map, chart (its inverse), pushed frame fields."""

    base_point: tuple[Fraction, ...]
    weights: tuple[int, ...]
    forward: tuple[Polynomial, ...]  # in chart variables
    chart: tuple[Polynomial, ...]  # in ambient variables, chart(q) = 0
    pushed_fields: tuple[VectorField, ...]
    max_degree: int


def privileged_coordinates_exp2(
    S: SRStructure,
    q,
    frame: list[VectorField] | tuple[VectorField, ...],
    max_degree: int | None = None,
    depth_max: int = 6,
) -> Exp2Chart:
    """Exact exponential coordinates of the second kind at a rational point q."""
    q = tuple(Fraction(v) for v in q)
    flag = compute_flag(S, q, depth_max=depth_max)
    if not flag.hormander_confirmed:
        raise ValueError("flag incomplete at q; cannot build privileged coordinates")
    weights = flag.weights
    if max_degree is None:
        max_degree = flag.step + 2
    check_frame_adapted(S, q, frame, weights, depth_max)

    N = S.dimension
    # forward: start at the constant map q, apply flows right to left
    cur = [Polynomial.constant(N, qi) for qi in q]
    for i in range(N - 1, -1, -1):
        flow = flow_polynomials(frame[i], max_degree)
        t_i = Polynomial.variable(i, N)
        cur = [fp.compose(cur + [t_i], max_degree=max_degree) for fp in flow]
    forward = tuple(cur)

    # linear part A[j][i] = d forward_j / d t_i at 0
    A = [[Fraction(0)] * N for _ in range(N)]
    for j in range(N):
        for a, c in forward[j].terms.items():
            if sum(a) == 1:
                A[j][a.index(1)] = c
    B = _invert_exact(A)

    # H(t) = B (forward(t) - q) = t + higher; series-invert H
    shifted = [forward[j] - Polynomial.constant(N, q[j]) for j in range(N)]
    H = [
        _matvec_poly(B, shifted, j)
        for j in range(N)
    ]
    nonlin = [H[j] - Polynomial.variable(j, N) for j in range(N)]
    phi = [Polynomial.variable(j, N) for j in range(N)]
    for _ in range(max_degree + 2):
        nxt = [
            Polynomial.variable(j, N) - nonlin[j].compose(phi, max_degree=max_degree)
            for j in range(N)
        ]
        if nxt == phi:
            break
        phi = nxt
    else:
        raise FlowTruncationError("inverse series did not stabilize within the degree cap")

    # chart(y) = phi(B (y - q)) in ambient variables
    u = [
        _matvec_poly(B, [Polynomial.variable(k, N) - Polynomial.constant(N, q[k]) for k in range(N)], j)
        for j in range(N)
    ]
    chart = tuple(p.compose(u, max_degree=max_degree) for p in phi)

    pushed = tuple(_pushforward(X, forward, chart, max_degree) for X in S.fields)
    return Exp2Chart(
        base_point=q,
        weights=weights,
        forward=forward,
        chart=chart,
        pushed_fields=pushed,
        max_degree=max_degree,
    )


def _invert_exact(A: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(A)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise FrameNotAdaptedError("frame Jacobian is singular at q")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _matvec_poly(B: list[list[Fraction]], polys: list[Polynomial], j: int) -> Polynomial:
    out = Polynomial.zero(polys[0].dim)
    for k, p in enumerate(polys):
        if B[j][k] != 0:
            out = out + p.scale(B[j][k])
    return out


def _pushforward(
    X: VectorField, forward: tuple[Polynomial, ...], chart: tuple[Polynomial, ...], max_degree: int
) -> VectorField:
    """(chart_* X)(u) = Dchart(F(u)) X(F(u)), truncated at the chart degree."""
    N = X.dim
    comps = []
    fwd = list(forward)
    for j in range(N):
        total = Polynomial.zero(N)
        for k in range(N):
            djk = chart[j].diff(k)
            if djk.is_zero() or X.components[k].is_zero():
                continue
            total = total + djk.compose(fwd, max_degree=max_degree) * X.components[k].compose(
                fwd, max_degree=max_degree
            )
        comps.append(total.truncate(max_degree))
    return VectorField(comps)

"""Pointwise control metric and local admissible-path edge costs."""

from __future__ import annotations

import math

import numpy as np

from ..vf.fields import lie_bracket
from ..vf.structure import SRStructure

DEFAULT_ETA = 1e-8


def control_metric_cost(S: SRStructure, q, v, eta: float = DEFAULT_ETA) -> float:
    """g_q(v) = min sum u_i^2 over v = sum u_i X_i(q); inf when v is off-distribution.

    The minimal-norm least-squares solution is accepted when its residual is
    at most eta*|v|.
    """
    A = np.stack([X.evaluate_float(q) for X in S.fields], axis=1)
    v = np.asarray(v, dtype=float)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return 0.0
    u, *_ = np.linalg.lstsq(A, v, rcond=None)
    res = np.linalg.norm(A @ u - v)
    if res > eta * nv:
        return math.inf
    return float(np.dot(u, u))


def bracket_fields(S: SRStructure):
    """Pairwise commutators [X_a, X_b], a < b (depth-2 closure generators)."""
    out = []
    m = len(S.fields)
    for a in range(m):
        for b in range(a + 1, m):
            B = lie_bracket(S.fields[a], S.fields[b])
            if not B.is_zero():
                out.append(B)
    return out


def path_cost_parts(
    S: SRStructure, mid, v, eta: float = DEFAULT_ETA, closure: bool = True
) -> tuple[float, float, float]:
    """(total, straight, loop) decomposition of the admissible edge cost.

    Pure branch: v = sum u_i X_i(mid) within eta -> cost |u|_2 (straight
    horizontal segment), loop part 0. Closure branch: the residual is
    generated by commutator loops, v = sum u_i X_i + sum w_j [X_a,X_b](mid),
    with an isoperimetric loop of length 2*sqrt(pi*|w_j|) per bracket. Totals
    are inf when neither branch matches within eta.
    """
    A = np.stack([X.evaluate_float(mid) for X in S.fields], axis=1)
    v = np.asarray(v, dtype=float)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return 0.0, 0.0, 0.0
    u, *_ = np.linalg.lstsq(A, v, rcond=None)
    if np.linalg.norm(A @ u - v) <= eta * nv:
        c = float(np.linalg.norm(u))
        return c, c, 0.0
    if not closure:
        return math.inf, math.inf, 0.0
    B = bracket_fields(S)
    if not B:
        return math.inf, math.inf, 0.0
    C = np.stack([X.evaluate_float(mid) for X in B], axis=1)
    K = np.concatenate([A, C], axis=1)
    uw, *_ = np.linalg.lstsq(K, v, rcond=None)
    if np.linalg.norm(K @ uw - v) > eta * nv:
        return math.inf, math.inf, 0.0
    m = A.shape[1]
    straight = float(np.linalg.norm(uw[:m]))
    loop = float(sum(2.0 * math.sqrt(math.pi * abs(w)) for w in uw[m:]))
    return straight + loop, straight, loop


def path_cost(S: SRStructure, mid, v, eta: float = DEFAULT_ETA, closure: bool = True) -> float:
    """Total admissible edge cost; see path_cost_parts."""
    return path_cost_parts(S, mid, v, eta=eta, closure=closure)[0]

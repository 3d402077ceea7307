"""Shifted orthonormal Legendre polynomials on [0, 1] and Gauss-Legendre rules.

The basis ``P_j`` satisfies ``int_0^1 P_i P_j = delta_ij`` with positive
leading coefficients, i.e. ``P_j(x) = sqrt(2j+1) L_j(2x - 1)`` where ``L_j``
is the classical Legendre polynomial.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_GAUSS_NODES = 64


def _classical(j, t):
    """Return ``(L_j(t), L_{j-1}(t))`` by the three-term recurrence (``L_{-1} = 0``)."""
    t = np.asarray(t, dtype=float)
    prev = np.zeros_like(t)
    cur = np.ones_like(t)
    for i in range(j):
        prev, cur = cur, ((2 * i + 1) * t * cur - i * prev) / (i + 1)
    return cur, prev


def eval_basis(j, c):
    """Evaluate the degree-``j`` orthonormal shifted Legendre polynomial at ``c``.

    Accepts scalars or arrays for ``c``.
    """
    if j < 0:
        raise ValueError(f"degree must be non-negative, got {j}")
    val, _ = _classical(j, 2.0 * np.asarray(c, dtype=float) - 1.0)
    out = np.sqrt(2 * j + 1) * val
    return float(out) if out.ndim == 0 else out


def eval_basis_integral(j, c):
    """Return ``int_0^c P_j(xi) dxi``.

    For ``j >= 1`` this uses

        int_0^c P_j = P_{j+1}(c) / (2 sqrt(4(j+1)^2 - 1)) - P_{j-1}(c) / (2 sqrt(4j^2 - 1)),

    which follows from ``(2j+1) L_j = L'_{j+1} - L'_{j-1}`` and vanishes at
    ``c = 0`` and ``c = 1``.
    """
    if j < 0:
        raise ValueError(f"degree must be non-negative, got {j}")
    c = np.asarray(c, dtype=float)
    if j == 0:
        out = c.copy()
    else:
        t = 2.0 * c - 1.0
        lj, ljm1 = _classical(j, t)
        ljp1 = ((2 * j + 1) * t * lj - j * ljm1) / (j + 1)
        # (L_{j+1} - L_{j-1}) / (2 (2j+1)) * sqrt(2j+1), written in the P_j scaling.
        out = (ljp1 - ljm1) / (2.0 * np.sqrt(2 * j + 1))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre rule on [0, 1]; exact for polynomials of degree ``<= 2k - 1``."""

    k: int
    nodes: np.ndarray
    weights: np.ndarray


@lru_cache(maxsize=None)
def gauss_rule(k):
    """``k``-point Gauss-Legendre rule on [0, 1].

    Nodes are found by Newton's method on ``L_k`` from Chebyshev guesses,
    weights from ``w = 1 / ((1 - t^2) L_k'(t)^2)`` (already halved for [0, 1]).
    """
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= MAX_GAUSS_NODES:
        raise ValueError(f"k must be an integer in [1, {MAX_GAUSS_NODES}], got {k!r}")
    k = int(k)
    i = np.arange(1, k + 1)
    # Chebyshev-like guesses, decreasing in t
    t = np.cos(np.pi * (i - 0.25) / (k + 0.5))
    for _ in range(100):
        lk, lkm1 = _classical(k, t)
        dlk = k * (lkm1 - t * lk) / (1.0 - t * t)
        dt = lk / dlk
        t = t - dt
        if np.max(np.abs(dt)) < 1e-15:
            break
    lk, lkm1 = _classical(k, t)
    dlk = k * (lkm1 - t * lk) / (1.0 - t * t)
    w = 1.0 / ((1.0 - t * t) * dlk * dlk)
    # t decreasing -> nodes increasing after the map x = (1 - t)/2; symmetrize
    x = 0.5 * (1.0 - t)
    x = 0.5 * (x + (1.0 - x[::-1]))
    w = 0.5 * (w + w[::-1])
    nodes = x
    weights = w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(k=k, nodes=nodes, weights=weights)


@dataclass(frozen=True)
class BasisTables:
    """Basis values and integrals sampled at the Gauss nodes.

    ``P[i, j] = P_j(c_i)``, ``I[i, j] = int_0^{c_i} P_j``, ``omega = b``.
    """

    k: int
    s: int
    rule: QuadratureRule
    P: np.ndarray
    I: np.ndarray
    omega: np.ndarray

    @property
    def nodes(self):
        return self.rule.nodes

    @property
    def weights(self):
        return self.rule.weights


@lru_cache(maxsize=None)
def build_tables(k, s):
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    if k < s:
        raise ValueError(f"need k >= s, got k={k}, s={s}")
    rule = gauss_rule(k)
    P = np.column_stack([eval_basis(j, rule.nodes) for j in range(s)])
    I = np.column_stack([eval_basis_integral(j, rule.nodes) for j in range(s)])
    for a in (P, I):
        a.setflags(write=False)
    return BasisTables(k=k, s=s, rule=rule, P=P, I=I, omega=rule.weights)

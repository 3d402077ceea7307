"""One step of the enhanced Poisson HBVM, EPHBVM(k, s).

The step looks for a degree-``s`` polynomial ``u`` on ``[0, h]`` whose
derivative is

    u'(ch) = sum_{i,j<s} P_i(c) rho_ij gamma_j - alpha (d0; 1),

with ``gamma_j``/``rho_ij`` the ``k``-point Gauss approximations of the
Fourier-Legendre coefficients of ``grad H`` and ``P_j B`` along ``u``. The
scalar ``alpha`` forces the omega-component of every step to be exactly
``h``, so after ``N`` steps of size ``hbar / N`` the trajectory sits at
omega = hbar, i.e. on the event set whenever ``H`` is conserved.

The stage equations (block dimension ``s`` in the unknown ``phi``) are solved
by plain fixed-point iteration.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGradient, NoConvergence
from .legendre import build_tables
from .poisson import AugmentedState

STALL_ITERS = 3
STALL_FACTOR = 100.0


@dataclass(frozen=True)
class MethodParams:
    s: int
    k: int
    h: float
    fp_tol: float = 1e-14
    fp_max_iter: int = 100

    def __post_init__(self):
        if self.s < 1:
            raise ValueError(f"s must be >= 1, got {self.s}")
        if self.k < self.s:
            raise ValueError(f"k must be >= s, got k={self.k}, s={self.s}")
        if not self.h > 0:
            raise ValueError(f"h must be positive, got {self.h}")
        if not self.fp_tol > 0 or self.fp_max_iter < 1:
            raise ValueError("fp_tol must be positive and fp_max_iter >= 1")


@dataclass
class StageSystem:
    """Iteration state of one step; arrays are ``(s, m)``, ``(k, m)`` and ``(s, s, m, m)``."""

    phi: np.ndarray
    alpha: float
    Y: np.ndarray
    d0hat: np.ndarray
    g0hat: np.ndarray
    gamma_hat: np.ndarray
    rho_hat: np.ndarray


@dataclass(frozen=True)
class StepResult:
    y1: AugmentedState
    alpha: float
    iterations: int
    fp_residual: float
    energy_residual: float
    omega_residual: float
    stages: StageSystem = None


def assemble_stages(tables, y0, h, phi, alpha, d0hat):
    """Stage values ``Y_i = y0 + h sum_j I[i, j] phi_j - alpha h c_i (d0hat; 1)``."""
    y0 = np.asarray(y0, dtype=float)
    corr = np.append(d0hat, 1.0)
    return y0[None, :] + h * (tables.I @ phi) - alpha * h * np.outer(tables.nodes, corr)


def _stage_fields(sys, Y):
    """``grad H`` and ``B`` at each stage row of ``Y``."""
    k, m = Y.shape
    grads = np.empty((k, m))
    Bs = np.empty((k, m, m))
    for l in range(k):
        grads[l] = sys.grad_H(Y[l])
        Bs[l] = sys.B(Y[l])
    return grads, Bs


def fourier_hat(sys, tables, Y):
    """Quadrature Fourier coefficients ``gamma_hat`` (s, m) and ``rho_hat`` (s, s, m, m)."""
    grads, Bs = _stage_fields(sys, Y)
    wP = tables.omega[:, None] * tables.P  # (k, s)
    gamma = wP.T @ grads
    rho = np.einsum("li,lj,lab->ijab", wP, tables.P, Bs)
    return gamma, rho


def g0_hat(p, rule, Y):
    """Return ``(g0hat, d0hat)`` with ``g0hat = sum_l b_l grad g(x_l)``, ``d0hat = g0hat/|g0hat|^2``."""
    g0 = np.zeros(Y.shape[1] - 1)
    for b, yl in zip(rule.weights, Y):
        g0 += b * np.asarray(p.grad_g(yl[:-1]), dtype=float)
    nrm2 = float(g0 @ g0)
    if not np.sqrt(nrm2) > p.delta_min:
        raise DegenerateGradient(f"|g0hat| = {np.sqrt(nrm2):.3e} <= delta_min")
    return g0, g0 / nrm2


def alpha_update(gamma_hat, rho_hat):
    # e_m^T sum_j rho_0j gamma_j - 1; the denominator d0^T g0 is 1 by construction
    return float(np.einsum("jb,jb->", rho_hat[0, :, -1, :], gamma_hat)) - 1.0


def _phi_from(gamma, rho):
    return np.einsum("ijab,jb->ia", rho, gamma)


def step(sys, p, params, y0, keep_stages=False):
    """Advance the augmented state ``y0`` by one EPHBVM(k, s) step of size ``params.h``.

    Raises NoConvergence when the fixed-point iteration exhausts
    ``params.fp_max_iter``.
    """
    y0 = np.asarray(y0, dtype=float)
    tables = build_tables(params.k, params.s)
    h = params.h
    m = y0.size
    phi = np.zeros((params.s, m))
    alpha = 0.0
    d0 = np.zeros(m - 1)
    resid = np.inf
    best, stalled = np.inf, 0
    for it in range(1, params.fp_max_iter + 1):
        Y = assemble_stages(tables, y0, h, phi, alpha, d0)
        g0, d0 = g0_hat(p, tables.rule, Y)
        gamma, rho = fourier_hat(sys, tables, Y)
        phi_new = _phi_from(gamma, rho)
        alpha_new = alpha_update(gamma, rho)
        # blocks share one scale: a small high-index block cannot be resolved
        # better than round-off in the dominant phi_0
        dphi = np.max(np.abs(phi_new - phi)) / (1.0 + np.max(np.abs(phi_new)))
        resid = max(float(dphi), abs(alpha_new - alpha))
        phi, alpha = phi_new, alpha_new
        if resid <= params.fp_tol:
            break
        if resid < best:
            best, stalled = resid, 0
        else:
            stalled += 1
        if stalled >= STALL_ITERS and best <= STALL_FACTOR * params.fp_tol:
            # limit cycle at round-off level
            break
    else:
        raise NoConvergence(params.fp_max_iter, resid)

    y1 = y0 + h * phi[0] - alpha * h * np.append(d0, 1.0)
    stages = None
    if keep_stages:
        stages = StageSystem(phi=phi, alpha=alpha, Y=Y, d0hat=d0, g0hat=g0, gamma_hat=gamma, rho_hat=rho)
    return StepResult(
        y1=AugmentedState.from_vector(y1),
        alpha=alpha,
        iterations=it,
        fp_residual=resid,
        energy_residual=abs(sys.H(y1)),
        omega_residual=abs(y1[-1] - (y0[-1] + h)),
        stages=stages,
    )

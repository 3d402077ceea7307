"""Drive the EPHBVM stepper over ``omega in [0, hbar]`` and study convergence."""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from .ephbvm import MethodParams, StepResult, step
from .errors import EventLocError, TransversalityViolation
from .poisson import AugmentedState, lift
from .problems import transversality, validate

EPS = np.finfo(float).eps


@dataclass
class EventResult:
    x_star: np.ndarray
    g_residual: float
    steps: int
    hbar: float
    s: int
    k: int
    trajectory: List[tuple] = field(repr=False)
    per_step: List[StepResult] = field(repr=False)
    stages: Optional[List[np.ndarray]] = field(default=None, repr=False)

    @property
    def alpha_max(self):
        return max(abs(r.alpha) for r in self.per_step)

    @property
    def energy_residual_max(self):
        return max(r.energy_residual for r in self.per_step)

    @property
    def omega_residual_max(self):
        return max(r.omega_residual for r in self.per_step)

    @property
    def iterations_max(self):
        return max(r.iterations for r in self.per_step)


def _grid(hbar, N):
    t = hbar * np.arange(N + 1) / N
    t[-1] = hbar
    return t


def locate(p, s, k, N, fp_tol=1e-14, fp_max_iter=100, keep_stages=False):
    """Integrate the lifted problem with ``N`` equal steps and return the event point.

    After each step the omega-component is set to its grid value (the last
    one is ``hbar`` exactly); the pre-snap deviation is kept in
    ``StepResult.omega_residual``.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    hbar = validate(p).hbar
    sys = lift(p, hbar)
    grid = _grid(hbar, N)
    params = MethodParams(s=s, k=k, h=hbar / N, fp_tol=fp_tol, fp_max_iter=fp_max_iter)

    y = sys.y0
    trajectory = [(0.0, AugmentedState.from_vector(y))]
    per_step = []
    stages = [] if keep_stages else None
    for i in range(N):
        try:
            res = step(sys, p, params, y, keep_stages=keep_stages)
        except EventLocError as exc:
            exc.step_index = i
            exc.args = (f"step {i}: {exc.args[0] if exc.args else exc}",)
            raise
        per_step.append(res)
        if keep_stages:
            stages.append(res.stages.Y)
        y = res.y1.y
        y[-1] = grid[i + 1]
        tv = transversality(p, y[:-1])
        if tv < p.delta_min:
            raise TransversalityViolation(tv, p.delta_min, f"endpoint of step {i}")
        trajectory.append((float(grid[i + 1]), AugmentedState.from_vector(y)))

    x_star = y[:-1].copy()
    return EventResult(
        x_star=x_star,
        g_residual=float(p.g(x_star)),
        steps=N,
        hbar=hbar,
        s=s,
        k=k,
        trajectory=trajectory,
        per_step=per_step,
        stages=stages,
    )


def default_reference_params(p, s, finest_N):
    s_ref = s + 2
    if p.poly_degree is not None:
        k_ref = max(s_ref, math.ceil(p.poly_degree * s_ref / 2))
    else:
        k_ref = s_ref + 4
    return s_ref, k_ref, 16 * finest_N


def reference_event(p, s_ref, k_ref, N_ref, **kw):
    """High-accuracy event point used as ground truth for error estimates."""
    return locate(p, s_ref, k_ref, N_ref, **kw).x_star


@dataclass
class ConvergenceRow:
    n: int
    h_n: float
    g_residual: float
    error: Optional[float]
    rate: Union[float, str]
    x_star: np.ndarray = field(repr=False, default=None)
    result: Optional[EventResult] = field(repr=False, default=None)

    def rate_str(self):
        return self.rate if isinstance(self.rate, str) else f"{self.rate:.1f}"


NO_VALUE = "---"
SATURATED = "***"


def _rates(errors, floors):
    rates = []
    for n, e in enumerate(errors):
        prev = errors[n - 1] if n > 0 else None
        if e is None or prev is None:
            rates.append(NO_VALUE)
        elif e <= floors[n] or prev <= floors[n - 1]:
            rates.append(SATURATED)
        else:
            rates.append(math.log2(prev / e))
    return rates


def convergence_study(p, s, k, n_max, error_mode="successive", saturation=4.0, reference=None, **kw):
    """Run ``locate`` on ``h_n = hbar / (10 * 2^n)`` for ``n = 0..n_max``.

    ``error_mode="successive"`` estimates ``e_n = |x_n - x_{n-1}|`` (no value
    for ``n = 0``); ``"reference"`` uses ``|x_n - x_ref|`` against
    ``reference`` or a :func:`reference_event` with default parameters.
    Rates become ``"***"`` once an error falls below
    ``saturation * eps * max(1, |x*|)``.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if error_mode not in ("successive", "reference"):
        raise ValueError(f"unknown error_mode {error_mode!r}")
    results = [locate(p, s, k, 10 * 2**n, **kw) for n in range(n_max + 1)]
    xs = [r.x_star for r in results]
    if error_mode == "successive":
        errors = [None] + [float(np.linalg.norm(xs[n] - xs[n - 1])) for n in range(1, n_max + 1)]
    else:
        if reference is None:
            reference = reference_event(p, *default_reference_params(p, s, 10 * 2**n_max), **kw)
        errors = [float(np.linalg.norm(x - reference)) for x in xs]
    floors = [saturation * EPS * max(1.0, float(np.linalg.norm(x))) for x in xs]
    rates = _rates(errors, floors)
    return [
        ConvergenceRow(n=n, h_n=r.hbar / r.steps, g_residual=r.g_residual, error=errors[n], rate=rates[n],
                       x_star=xs[n], result=r)
        for n, r in enumerate(results)
    ]

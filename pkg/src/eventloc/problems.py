"""Event-location problems: definition, validation and the built-in registry.

A problem is ``dx/dtau = f(x)``, ``x(0) = x0``, together with an event
function ``g`` whose zero set must be reached from ``g(x0) < 0`` while
``grad g(x)^T f(x) >= delta_min > 0`` along the way.
"""

import os
import runpy
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import GradientMismatch, NonNegativeStart, TransversalityViolation, UnknownProblem

Vec = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class EventProblem:
    f: Vec
    g: Callable[[np.ndarray], float]
    grad_g: Vec
    x0: np.ndarray
    poly_degree: Optional[int] = None
    delta_min: float = 1e-10
    name: str = "custom"
    # bounding box used when sampling the event surface for plotting
    plot_bounds: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        x0 = np.array(self.x0, dtype=float)
        x0.setflags(write=False)
        object.__setattr__(self, "x0", x0)
        if x0.ndim != 1 or x0.size == 0:
            raise ValueError("x0 must be a non-empty vector")
        if self.poly_degree is not None and self.poly_degree < 1:
            raise ValueError("poly_degree must be a positive integer")
        if self.delta_min <= 0:
            raise ValueError("delta_min must be positive")

    @property
    def dim(self):
        return self.x0.size


@dataclass(frozen=True)
class ProblemBarrier:
    hbar: float


def transversality(p, x):
    """Return ``grad g(x)^T f(x)``."""
    x = np.asarray(x, dtype=float)
    return float(np.dot(p.grad_g(x), p.f(x)))


def check_gradient(p, x, rtol=1e-6, h=1e-6, n_dirs=4, rng=None):
    """Compare ``grad_g`` against central differences along random unit directions."""
    rng = np.random.default_rng(0) if rng is None else rng
    x = np.asarray(x, dtype=float)
    grad = np.asarray(p.grad_g(x), dtype=float)
    for _ in range(n_dirs):
        d = rng.standard_normal(x.size)
        d /= np.linalg.norm(d)
        fd = (p.g(x + h * d) - p.g(x - h * d)) / (2 * h)
        an = float(grad @ d)
        if abs(fd - an) > rtol * max(1.0, abs(an), np.linalg.norm(grad)):
            raise GradientMismatch(
                f"directional derivative mismatch at {x}: analytic {an:.10g}, finite difference {fd:.10g}"
            )


def validate(p, n_samples=5, radius=1e-2, seed=0):
    """Check the problem's standing assumptions and return the barrier ``-g(x0)``."""
    x0 = p.x0
    g0 = float(p.g(x0))
    if not g0 < 0:
        raise NonNegativeStart(f"g(x0) = {g0!r} must be negative")
    tv = transversality(p, x0)
    if tv < p.delta_min:
        raise TransversalityViolation(tv, p.delta_min, "at x0")
    rng = np.random.default_rng(seed)
    check_gradient(p, x0, rng=rng)
    for _ in range(n_samples):
        check_gradient(p, x0 + radius * rng.standard_normal(x0.size), rng=rng)
    return ProblemBarrier(hbar=-g0)


# ---------------------------------------------------------------------------
# built-in problems

def _f_planar(x):
    return np.array([x[1], 1.0 / (1.2 - x[1]) - x[0]])


def _example1():
    return EventProblem(
        f=_f_planar,
        g=lambda x: x[0] + x[1] - 0.4,
        grad_g=lambda x: np.array([1.0, 1.0]),
        x0=np.array([-0.2, -0.2]),
        poly_degree=1,
        name="example1",
    )


def _example2():
    return EventProblem(
        f=_f_planar,
        g=lambda x: 20.0 * x[0] + x[1] - 20.0 * np.sin(x[0]) - 0.4,
        grad_g=lambda x: np.array([20.0 - 20.0 * np.cos(x[0]), 1.0]),
        x0=np.array([0.0, -0.2]),
        name="example2",
    )


def ex3_field(x):
    """Three-dimensional field of the third built-in example, in its original orientation."""
    return np.array([
        1.0 / (1.2 + np.sin(x[1])),
        1.0 / (1.2 - np.cos(x[0])),
        1.0 + np.cos(x @ x),
    ])


def ex3_event(x):
    """Polynomial event function ``1e-3 (x1^3 + 4 x2^7 + x3^5)``, original orientation."""
    return 1e-3 * (x[0] ** 3 + 4.0 * x[1] ** 7 + x[2] ** 5)


def ex3_event_grad(x):
    return 1e-3 * np.array([3.0 * x[0] ** 2, 28.0 * x[1] ** 6, 5.0 * x[2] ** 4])


def _example3():
    # ex3_event(x0) = +1.563 and ex3_field moves g upward, so the event set is
    # only reached backwards in time. Negating both f and g gives the same
    # trajectory curve and event set with g(x0) = -1.563 and grad g^T f > 0.
    return EventProblem(
        f=lambda x: -ex3_field(x),
        g=lambda x: -ex3_event(x),
        grad_g=lambda x: -ex3_event_grad(x),
        x0=np.array([3.0, 2.0, 4.0]),
        poly_degree=7,
        name="example3",
        plot_bounds=((-4.0, 4.0),) * 3,
    )


_REGISTRY = {
    "example1": _example1,
    "example2": _example2,
    "example3": _example3,
}


def names():
    return sorted(_REGISTRY)


def builtin(name):
    try:
        factory = _REGISTRY[name]
    except KeyError:
        raise UnknownProblem(f"unknown problem {name!r}; choose from {', '.join(names())}") from None
    return factory()


def load_file(path):
    """Build a problem from a Python file defining ``f``, ``g``, ``grad_g`` and ``x0``.

    Optional module-level names: ``poly_degree``, ``delta_min``, ``plot_bounds``.
    """
    ns = runpy.run_path(os.fspath(path))
    missing = [key for key in ("f", "g", "grad_g", "x0") if key not in ns]
    if missing:
        raise UnknownProblem(f"{path}: missing {', '.join(missing)}")
    extra = {key: ns[key] for key in ("poly_degree", "delta_min", "plot_bounds") if key in ns}
    name = os.path.splitext(os.path.basename(path))[0]
    return EventProblem(f=ns["f"], g=ns["g"], grad_g=ns["grad_g"], x0=np.asarray(ns["x0"], dtype=float),
                        name=name, **extra)


def resolve(name_or_path):
    """A built-in by name, or a problem file when the argument is an existing path."""
    if name_or_path not in _REGISTRY and os.path.isfile(name_or_path):
        return load_file(name_or_path)
    return builtin(name_or_path)

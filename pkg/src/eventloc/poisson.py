"""Poisson reformulation of an event-location problem.

With ``omega = g(x(tau)) + hbar`` as the new time, the augmented state
``y = (x; omega)`` obeys ``dy/domega = G(y) = B(y) grad H(y)`` where
``H(y) = g(x) - omega + hbar`` is conserved and ``B`` is the rank-two
skew-symmetric matrix ``(G grad_H^T - grad_H G^T) / |grad_H|^2``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import TransversalityViolation
from .problems import EventProblem


@dataclass(frozen=True)
class AugmentedState:
    x: np.ndarray
    omega: float

    @property
    def y(self):
        return np.append(self.x, self.omega)

    @classmethod
    def from_vector(cls, y):
        y = np.asarray(y, dtype=float)
        return cls(x=y[:-1].copy(), omega=float(y[-1]))


@dataclass(frozen=True)
class PoissonSystem:
    base: EventProblem
    hbar: float

    @property
    def n(self):
        return self.base.dim

    @property
    def m(self):
        return self.base.dim + 1

    @property
    def y0(self):
        return np.append(self.base.x0, 0.0)

    def G(self, y):
        x = y[:-1]
        fx = np.asarray(self.base.f(x), dtype=float)
        denom = float(np.dot(self.base.grad_g(x), fx))
        if not denom >= self.base.delta_min:
            raise TransversalityViolation(denom, self.base.delta_min, f"at x = {x}")
        return np.append(fx / denom, 1.0)

    def H(self, y):
        return float(self.base.g(y[:-1])) - y[-1] + self.hbar

    def grad_H(self, y):
        return np.append(self.base.grad_g(y[:-1]), -1.0)

    def B(self, y):
        gh = self.grad_H(y)
        gv = self.G(y)
        outer = np.outer(gv, gh)
        return (outer - outer.T) / (gh @ gh)


def lift(p, hbar):
    return PoissonSystem(base=p, hbar=float(hbar))

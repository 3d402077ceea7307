"""Sample the implicit event surface ``g = 0`` of a 3-d problem for external plotting."""

import numpy as np

from .errors import UnsupportedDimension


def _bisect(fun, a, b, fa, tol, max_iter=200):
    for _ in range(max_iter):
        mid = 0.5 * (a + b)
        fm = fun(mid)
        if abs(fm) <= tol or b - a <= 4 * np.finfo(float).eps * max(1.0, abs(mid)):
            return mid, fm
        if (fm < 0) == (fa < 0):
            a, fa = mid, fm
        else:
            b = mid
    return mid, fm


def emit_surface_samples(p, bounds=None, resolution=40, tol=1e-12):
    """Points on ``g = 0`` found by bisection along x3 over a ``resolution^2`` grid in (x1, x2).

    Returns an array with columns ``x1, x2, x3, g``.
    """
    if p.dim != 3:
        raise UnsupportedDimension(f"surface sampling needs a 3-dimensional problem, got n = {p.dim}")
    if bounds is None:
        bounds = p.plot_bounds or ((-4.0, 4.0),) * 3
    (a1, b1), (a2, b2), (a3, b3) = bounds
    x3 = np.linspace(a3, b3, resolution)
    rows = []
    for u in np.linspace(a1, b1, resolution):
        for v in np.linspace(a2, b2, resolution):
            vals = np.array([p.g(np.array([u, v, w])) for w in x3])
            for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
                w, gw = _bisect(lambda z: p.g(np.array([u, v, z])), x3[i], x3[i + 1], vals[i], tol)
                rows.append((u, v, w, gw))
            for i in np.nonzero(vals == 0.0)[0]:
                rows.append((u, v, x3[i], 0.0))
    return np.array(rows).reshape(-1, 4)


def write_surface_samples(path, samples):
    np.savetxt(path, samples, delimiter=",", header="x1,x2,x3,g", comments="", fmt="%.17g")

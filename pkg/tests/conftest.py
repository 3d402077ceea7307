import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from eventloc.problems import builtin, validate  # noqa: E402
from eventloc.poisson import lift  # noqa: E402

BUILTINS = ["example1", "example2", "example3"]


@pytest.fixture(params=BUILTINS)
def problem(request):
    return builtin(request.param)


@pytest.fixture
def system(problem):
    return lift(problem, validate(problem).hbar)


def random_states(p, n, rng, spread=0.3):
    """Augmented states near x0 where transversality holds."""
    from eventloc.problems import transversality

    out = []
    while len(out) < n:
        x = p.x0 + spread * rng.standard_normal(p.dim)
        if transversality(p, x) > 1e-3:
            out.append(np.append(x, rng.uniform(0, 1)))
    return out

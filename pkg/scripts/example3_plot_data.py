"""Write trajectory and event-surface samples for the 3-d example (for external plotting).

Usage: python scripts/example3_plot_data.py [outdir]
"""

import sys
from pathlib import Path

import numpy as np

from eventloc.cli import write_trajectory
from eventloc.locator import locate
from eventloc.problems import builtin, ex3_event
from eventloc.surface import emit_surface_samples, write_surface_samples

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
out.mkdir(parents=True, exist_ok=True)
p = builtin("example3")
fine = locate(p, 3, 11, 1000)
gauss = locate(p, 3, 3, 1000)
write_trajectory(out / "example3_trajectory.csv", p, fine)
write_surface_samples(out / "example3_surface.csv", emit_surface_samples(p, resolution=60))
print("x*      =", fine.x_star, " g(x*) =", f"{fine.g_residual:.2e}")
print("x~      =", gauss.x_star, " original-orientation g(x~) =", f"{ex3_event(gauss.x_star):.2e}")
print("|x~-x*| =", f"{np.linalg.norm(gauss.x_star - fine.x_star):.2e}")

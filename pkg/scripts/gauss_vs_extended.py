"""Event residuals on the smooth non-polynomial event problem at h = hbar/10."""

from eventloc.problems import builtin
from eventloc.locator import locate

p = builtin("example2")
print(f"{'s':>2} {'EPHBVM(s,s)':>13} {'EPHBVM(4,s)':>13}")
for s in (1, 2, 3):
    print(f"{s:>2} {locate(p, s, s, 10).g_residual:>13.4e} {locate(p, s, 4, 10).g_residual:>13.4e}")

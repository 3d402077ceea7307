"""Convergence study on the linear-event problem with EPHBVM(s,s), s = 1, 2, 3."""

from eventloc.problems import builtin
from eventloc.locator import convergence_study


def main(levels=6):
    p = builtin("example1")
    for s in (1, 2, 3):
        print(f"\ns = {s}")
        print(f"{'n':>3} {'h_n':>10} {'g(x_n*)':>11} {'e_n*':>10} {'rate':>5}")
        for r in convergence_study(p, s, s, levels - 1):
            err = "---" if r.error is None else f"{r.error:.2e}"
            print(f"{r.n:>3} {r.h_n:>10.3e} {r.g_residual:>11.2e} {err:>10} {r.rate_str():>5}")


if __name__ == "__main__":
    main()

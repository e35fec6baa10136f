#!/usr/bin/env python3
"""Small-time scaling of p_t(0) for the stable family.

Emits a CSV with the observed values, the fitted exponent, and the
regular-variation prediction for several stability indices.

Usage: python scripts/small_time_scaling.py [out.csv]
"""

import sys

from levydens.asymptotics import predict_pt0
from levydens.levy_core import builtin_model


def main() -> int:
    out = open(sys.argv[1], "w") if len(sys.argv) > 1 else sys.stdout
    out.write("alpha,dim,t,observed,predicted,t_exponent,rho_fit\n")
    for alpha in (0.75, 1.0, 1.5, 2.0):
        for dim in (1, 2):
            rep = predict_pt0(builtin_model("stable", alpha=alpha, dim=dim),
                              "t_to_0")
            pred = rep.predicted if rep.predicted is not None else [float("nan")] * len(rep.t_grid)
            for t, obs, p in zip(rep.t_grid, rep.observed, pred):
                out.write(f"{alpha},{dim},{float(t)!r},{float(obs)!r},"
                          f"{float(p)!r},{rep.t_exponent!r},{rep.rho_fit!r}\n")
    if out is not sys.stdout:
        out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())

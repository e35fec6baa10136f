#!/usr/bin/env python3
"""Tabulate transition densities for a few built-in models.

Writes one plot-ready CSV per model/time pair into the output directory:
columns x, p, plus a closed-form reference column when one exists.

Usage: python scripts/density_profiles.py [outdir]
"""

import pathlib
import sys

import numpy as np

from levydens.inversion import closed_form, invert_grid
from levydens.levy_core import builtin_model

CASES = [
    ("gaussian", 1.0, "gaussian"),
    ("cauchy", 1.0, "cauchy"),
    ("stable:alpha=1.5", 1.0, None),
    ("sym_gamma", 1.0, "laplace"),
    ("sym_gamma", 2.0, "sym_gamma_besselk"),
    ("tempered_stable", 1.0, None),
]


def main() -> int:
    outdir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "density_csv")
    outdir.mkdir(parents=True, exist_ok=True)
    xs = np.arange(-8.0, 8.0 + 1e-9, 0.02)
    for ref, t, oracle in CASES:
        name, _, paramstr = ref.partition(":")
        params = dict(kv.split("=") for kv in paramstr.split(",") if kv)
        model = builtin_model(name, **{k: float(v) for k, v in params.items()})
        field = invert_grid(model, t, xs)
        path = outdir / f"{ref.replace(':', '_').replace('=', '')}_t{t}.csv"
        with open(path, "w") as fh:
            fh.write(f"# model = {ref}\n# t = {t}\n")
            fh.write(f"# mass = {field.mass!r}\n")
            fh.write(f"# tail_bound = {field.tail_bound!r}\n")
            if oracle is None:
                fh.write("x,p\n")
                for x, p in zip(xs, field.values):
                    fh.write(f"{x!r},{p!r}\n")
            else:
                fh.write("x,p,reference\n")
                for x, p in zip(xs, field.values):
                    fh.write(f"{x!r},{p!r},{closed_form(oracle, t, x)!r}\n")
        print(f"wrote {path} (mass {field.mass:.6f})")
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Survey the built-in model library with the density-existence classifier.

Prints one JSON document per model: growth-functional verdicts and the
aggregated existence ladder at t in {0.5, 1, 2}.

Usage: python scripts/existence_survey.py
"""

import json
import sys

from levydens.diagnostics import classify, hw_functional, kallenberg_functional
from levydens.levy_core import builtin_model

MODELS = [
    "gaussian", "cauchy", "sym_gamma", "gamma", "tempered_stable",
    "truncated_stable", "exa2_logkernel", "exa3_atoms", "exa4_atoms",
    "exa5_atoms",
]


def main() -> int:
    for name in MODELS:
        model = builtin_model(name)
        doc = classify(model)
        doc["kallenberg"] = (kallenberg_functional(model).verdict
                             if model.measure.is_radial else "n/a")
        doc["hw_trailing_min"] = hw_functional(model).trailing_min
        json.dump(doc, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())

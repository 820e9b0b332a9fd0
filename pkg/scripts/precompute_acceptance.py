#!/usr/bin/env python3
"""Warm the acceptance-test cache (the two convergence suites take hours).

Usage: python scripts/precompute_acceptance.py [experiment ...]

With no arguments every experiment is produced in dependency-light-first
order.  Named experiments: order, cleaning, equilibrium, mirror, aux,
suite-pair, suite-25.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

import acceptance_support as acc


STEPS = {
    "order": acc.order_study,
    "cleaning": acc.cleaning_pulse_speed,
    "equilibrium": lambda: (acc.equilibrium_drift(64, 32),
                            acc.equilibrium_drift(128, 64)),
    "mirror": acc.mirror_norms,
    "aux": lambda: (
        acc.ensure_run("pair5_32x16", acc.suite_config_text("gem-pair-5", 32, 16)),
        acc.ensure_run("pair5_64x32_t5",
                       acc.suite_config_text("gem-pair-5", 64, 32, t_final=5.0)),
        acc.ensure_run("cleanoff_32x16",
                       acc.suite_config_text("gem-pair-1", 32, 16, t_final=20.0)
                       + "clean_B=false\n"),
    ),
    "suite-pair": lambda: acc.ensure_suite("gem-pair-1"),
    "suite-25": lambda: acc.ensure_suite("gem-25-5"),
}


def main():
    names = sys.argv[1:] or list(STEPS)
    for name in names:
        if name not in STEPS:
            sys.exit(f"unknown experiment {name!r}; choose from {', '.join(STEPS)}")
        acc.log(f"=== {name} ===")
        STEPS[name]()
    acc.log("acceptance cache ready")


if __name__ == "__main__":
    main()

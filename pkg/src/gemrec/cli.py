"""Command-line driver.

    simulate --config FILE [--preset NAME] [--outdir DIR]
    simulate suite --preset NAME --outdir DIR [--override key=value ...]

Exit codes: 0 success, 2 configuration error, 3 solver abort.
"""

from __future__ import annotations

import argparse
import sys

from .driver import convergence_suite, parse_config, run
from .errors import ConfigError


def _log(msg: str):
    print(msg, flush=True)


def _run_main(argv) -> int:
    ap = argparse.ArgumentParser(prog="simulate", description="Run one GEM simulation.")
    ap.add_argument("--config", help="key=value configuration file")
    ap.add_argument("--preset", help="preset name (overrides the config's preset key)")
    ap.add_argument("--outdir", help="output directory (overrides the config's outdir)")
    ap.add_argument("--quiet", action="store_true", help="suppress progress lines")
    args = ap.parse_args(argv)
    text = ""
    if args.config:
        try:
            with open(args.config) as fh:
                text = fh.read()
        except OSError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
    elif not args.preset:
        print("config error: need --config and/or --preset", file=sys.stderr)
        return 2
    try:
        cfg = parse_config(text, preset_override=args.preset, outdir_override=args.outdir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    manifest = run(cfg, log=None if args.quiet else _log)
    if manifest["status"] != "completed":
        print(f"solver abort: {manifest['abort']['error']}", file=sys.stderr)
        return 3
    return 0


def _suite_main(argv) -> int:
    ap = argparse.ArgumentParser(prog="simulate suite",
                                 description="Three-mesh convergence study.")
    ap.add_argument("--preset", required=True)
    ap.add_argument("--outdir", required=True)
    ap.add_argument("--override", action="append", default=[],
                    metavar="KEY=VALUE", help="config override applied to every mesh")
    ap.add_argument("--quiet", action="store_true")
    args = ap.parse_args(argv)
    overrides = {}
    for item in args.override:
        if "=" not in item:
            print(f"config error: bad --override {item!r}", file=sys.stderr)
            return 2
        k, v = item.split("=", 1)
        overrides[k.strip()] = v.strip()
    try:
        summary = convergence_suite(args.preset, args.outdir, overrides or None,
                                    log=None if args.quiet else _log)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if any(status != "completed" for status in summary["meshes"].values()):
        print(f"solver abort in suite: {summary['meshes']}", file=sys.stderr)
        return 3
    return 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "suite":
        return _suite_main(argv[1:])
    return _run_main(argv)


if __name__ == "__main__":
    sys.exit(main())

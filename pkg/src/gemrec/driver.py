"""Run configuration, the time loop, and the convergence-study batch mode.

Config files are flat key=value lines ("#" starts a comment).  Recognized
keys: preset, nx, ny, order, cfl, t_final, diag_interval, snapshot_times,
outdir, chi, light_speed, clean_B, clean_E, mass_ratio, temp_ratio, lambda,
B0, n0, psi0.  A preset supplies defaults; explicit keys override it.

Outputs per run: timeseries.csv (13 columns, 17-significant-digit floats,
flushed row by row so aborted runs keep partial data), snapshot files for
flux_function and B3 at the requested times, config_resolved.cfg (re-runnable
resolved configuration), and run_manifest.json (all resolved parameters,
code version, wall time, abort record if any).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .basis import Basis
from .dg import DGField, Solver, compute_dt, project
from .diagnostics import Recorder, snapshot_text
from .errors import ConfigError, InvalidStateError
from .gem import GemConfig, preset, initial_conserved
from .grid import BoundarySpec, Grid

SNAPSHOT_FIELDS = ("flux_function", "B3")
SUITE_MESHES = ((32, 16), (64, 32), (128, 64))

_GEM_KEYS = {
    "chi": ("chi", float),
    "light_speed": ("light_speed", float),
    "clean_B": ("clean_b", None),
    "clean_E": ("clean_e", None),
    "mass_ratio": ("mass_ratio", float),
    "temp_ratio": ("temp_ratio", float),
    "lambda": ("lam", float),
    "B0": ("b0", float),
    "n0": ("n0", float),
    "psi0": ("psi0", float),
}
_RUN_KEYS = ("preset", "nx", "ny", "order", "cfl", "t_final",
             "diag_interval", "snapshot_times", "outdir")


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved problem + numerics configuration for one run."""

    gem: GemConfig
    preset_name: str
    nx: int = 32
    ny: int = 16
    order: int = 2
    cfl: float = 0.15
    t_final: float = 40.0
    diag_interval: float = 0.1
    snapshot_times: tuple = (0.0, 10.0, 15.0, 20.0, 30.0, 40.0)
    outdir: str = "out"

    def __post_init__(self):
        if self.nx < 4 or self.ny < 4:
            raise ConfigError(f"mesh must be at least 4x4, got {self.nx}x{self.ny}")
        if self.order not in (1, 2, 3):
            raise ConfigError(f"order must be 1, 2, or 3, got {self.order}")
        if not 0.0 < self.cfl <= 0.5:
            raise ConfigError(f"cfl must be in (0, 0.5], got {self.cfl}")
        if not self.t_final > 0.0:
            raise ConfigError(f"t_final must be > 0, got {self.t_final}")
        if not self.diag_interval > 0.0:
            raise ConfigError(f"diag_interval must be > 0, got {self.diag_interval}")

    def as_dict(self) -> dict:
        g = self.gem
        return {
            "preset": self.preset_name,
            "nx": self.nx, "ny": self.ny, "order": self.order, "cfl": self.cfl,
            "t_final": self.t_final, "diag_interval": self.diag_interval,
            "snapshot_times": ",".join(f"{t:g}" for t in self.snapshot_times),
            "outdir": self.outdir,
            "chi": g.chi, "light_speed": g.light_speed,
            "clean_B": g.clean_b, "clean_E": g.clean_e,
            "mass_ratio": g.mass_ratio, "temp_ratio": g.temp_ratio,
            "lambda": g.lam, "B0": g.b0, "n0": g.n0, "psi0": g.psi0,
        }

    def config_text(self) -> str:
        lines = [f"{k}={str(v).lower() if isinstance(v, bool) else v}"
                 for k, v in self.as_dict().items()]
        return "\n".join(lines) + "\n"


def _parse_bool(raw: str) -> bool:
    if raw.lower() in ("true", "1", "yes", "on"):
        return True
    if raw.lower() in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def parse_config(text: str, preset_override: str | None = None,
                 outdir_override: str | None = None) -> RunConfig:
    """Parse key=value configuration text into a RunConfig.

    Errors (unknown key, unparsable value, constraint violation) name the
    offending line.  A --preset/--outdir given on the command line overrides
    the corresponding config keys.
    """
    pairs: dict[str, tuple[str, int, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _RUN_KEYS and key not in _GEM_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = (value, lineno, raw)

    def take(key, conv, default=None):
        if key not in pairs:
            return default
        value, lineno, raw = pairs.pop(key)
        try:
            return conv(value)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from exc

    preset_name = preset_override or take("preset", str)
    if preset_override and "preset" in pairs:
        pairs.pop("preset")
    if preset_name is None:
        raise ConfigError("no preset given (config key 'preset' or --preset flag)")
    try:
        gem_cfg = preset(preset_name)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    gem_updates = {}
    for key, (attr, conv) in _GEM_KEYS.items():
        if key not in pairs:
            continue
        value, lineno, raw = pairs.pop(key)
        try:
            gem_updates[attr] = _parse_bool(value) if conv is None else conv(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from exc
    try:
        gem_cfg = replace(gem_cfg, **gem_updates)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    def parse_times(raw: str) -> tuple:
        parts = [p for p in raw.split(",") if p.strip()]
        return tuple(sorted(float(p) for p in parts))

    kwargs = dict(
        nx=take("nx", int, 32), ny=take("ny", int, 16),
        order=take("order", int, 2), cfl=take("cfl", float, 0.15),
        t_final=take("t_final", float, 40.0),
        diag_interval=take("diag_interval", float, 0.1),
        snapshot_times=take("snapshot_times", parse_times,
                            (0.0, 10.0, 15.0, 20.0, 30.0, 40.0)),
        outdir=outdir_override or take("outdir", str, "out"),
    )
    if outdir_override and "outdir" in pairs:
        pairs.pop("outdir")
    return RunConfig(gem=gem_cfg, preset_name=preset_name, **kwargs)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _event_times(cfg: RunConfig) -> list[tuple[float, bool, bool]]:
    """(time, is_diag_sample, is_snapshot) targets in increasing order."""
    n_diag = int(round(cfg.t_final / cfg.diag_interval))
    diag = {round(k * cfg.diag_interval, 12): True for k in range(n_diag + 1)
            if k * cfg.diag_interval <= cfg.t_final + 1e-9}
    snaps = {round(t, 12) for t in cfg.snapshot_times if 0.0 <= t <= cfg.t_final + 1e-9}
    times = sorted(set(diag) | snaps)
    return [(t, t in diag, t in snaps) for t in times]


def run(cfg: RunConfig, log=None) -> dict:
    """Execute one simulation; returns the manifest dict (status, outputs).

    Deterministic: fixed iteration order, no randomness; identical config
    and build produce byte-identical timeseries.csv.
    """
    t_start = time.time()
    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    params = cfg.gem.model_params()
    grid = Grid.quarter_domain(cfg.nx, cfg.ny, cfg.gem.lx, cfg.gem.ly)
    basis = Basis(cfg.order)
    bc = BoundarySpec.gem_quarter()
    solver = Solver(grid, basis, params, bc)
    fld = project(initial_conserved(cfg.gem), grid, basis, params)
    recorder = Recorder(params, bc)

    (outdir / "config_resolved.cfg").write_text(cfg.config_text())
    manifest = {
        "package": "gemrec",
        "version": __version__,
        "config": cfg.as_dict(),
        "config_text": cfg.config_text(),
        "grid": {"nx": cfg.nx, "ny": cfg.ny,
                 "x_hi": grid.x_hi, "y_hi": grid.y_hi, "dx": grid.dx, "dy": grid.dy},
        "status": "running",
        "outputs": ["timeseries.csv", "config_resolved.cfg"],
    }

    def emit_snapshot(f: DGField, t: float):
        for name in SNAPSHOT_FIELDS:
            path = outdir / f"snapshot_{name}_t{t:g}.dat"
            path.write_text(snapshot_text(f, name, 1, params))
            manifest["outputs"].append(path.name)

    csv_path = outdir / "timeseries.csv"
    abort = None
    steps = 0
    with open(csv_path, "w") as csv:
        csv.write(",".join(
            ("t", "F_left", "F_recon", "E3_origin", "tracker", "cum_E3",
             "mass_i", "mass_e", "energy_total", "divB_L2", "divE_err_L2",
             "psi_L2", "Bz_max_abs")) + "\n")
        try:
            events = _event_times(cfg)
            U = fld.coeffs
            for t_target, is_diag, is_snap in events:
                while fld.time < t_target - 1e-12:
                    dt = compute_dt(fld, cfg.cfl, params)
                    dt = min(dt, t_target - fld.time)
                    U = solver.step(U, dt, reuse_out=True)
                    steps += 1
                    new_t = fld.time + dt
                    if t_target - new_t < 1e-12:
                        new_t = t_target
                    fld = DGField(U, grid, basis, new_t)
                if is_diag:
                    rec = recorder.record(fld)
                    csv.write(",".join(_fmt(v) for v in rec.values()) + "\n")
                    csv.flush()
                if is_snap:
                    emit_snapshot(fld, t_target)
                if log is not None and is_diag and (round(t_target) == t_target):
                    log(f"[{cfg.preset_name} {cfg.nx}x{cfg.ny}] t={t_target:g} "
                        f"steps={steps} wall={time.time() - t_start:.0f}s")
        except InvalidStateError as exc:
            abort = {"error": str(exc), "t": fld.time, "steps": steps}

    manifest["steps"] = steps
    manifest["wall_time_s"] = time.time() - t_start
    if abort is None:
        manifest["status"] = "completed"
    else:
        manifest["status"] = "aborted"
        manifest["abort"] = abort
    (outdir / "run_manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest


def convergence_suite(preset_name: str, outdir: str, overrides: dict | None = None,
                      meshes=SUITE_MESHES, log=None) -> dict:
    """Run the three-mesh convergence study and write a side-by-side summary.

    Per-mesh outputs land in <outdir>/<nx>x<ny>/; summary.csv lists F_recon
    at integer times for every mesh.  A failed mesh does not stop the
    remaining ones.
    """
    base = preset(preset_name)  # validate before any run
    root = Path(outdir)
    root.mkdir(parents=True, exist_ok=True)
    results = {}
    for nx, ny in meshes:
        sub = root / f"{nx}x{ny}"
        text = f"preset={preset_name}\nnx={nx}\nny={ny}\n"
        if overrides:
            text += "".join(f"{k}={v}\n" for k, v in overrides.items())
        cfg = parse_config(text, outdir_override=str(sub))
        manifest = run(cfg, log=log)
        results[f"{nx}x{ny}"] = manifest["status"]

    write_suite_summary(root, [f"{nx}x{ny}" for nx, ny in meshes])
    summary = {"preset": preset_name, "meshes": results}
    (root / "suite_manifest.json").write_text(json.dumps(summary, indent=2) + "\n")
    return summary


def write_suite_summary(root, names) -> None:
    """Assemble summary.csv (F_recon at integer times per mesh) from run dirs."""
    root = Path(root)
    series = {}
    for name in names:
        path = root / name / "timeseries.csv"
        if not path.exists():
            continue
        rows = path.read_text().strip().splitlines()
        header = rows[0].split(",")
        t_col, fr_col = header.index("t"), header.index("F_recon")
        series[name] = {
            round(float(r.split(",")[t_col])): float(r.split(",")[fr_col])
            for r in rows[1:]
            if abs(float(r.split(",")[t_col]) - round(float(r.split(",")[t_col]))) < 1e-9
        }
    if not series:
        return
    tmax = max(max(s) for s in series.values() if s)
    with open(root / "summary.csv", "w") as f:
        f.write("t," + ",".join(f"F_recon_{n}" for n in names) + "\n")
        for t in range(0, int(tmax) + 1):
            row = [str(t)]
            for name in names:
                v = series.get(name, {}).get(t)
                row.append(_fmt(v) if v is not None else "")
            f.write(",".join(row) + "\n")

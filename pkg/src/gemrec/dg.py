"""Runge-Kutta discontinuous Galerkin discretization on a uniform grid.

Thin orchestration over the compiled kernels: modal projection, RHS
assembly (volume quadrature + Rusanov interface fluxes + sources), the
componentwise moment limiter, SSP-RK3 time stepping, and point evaluation.

State positivity policy: a stage that produces a non-positive density or
pressure (at a quadrature point during assembly, or in a cell mean after
the update) aborts with a diagnostic instead of being silently repaired;
silent fixes would contaminate the resolution study this solver exists
to support.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .basis import Basis
from .errors import InvalidStateError
from .grid import BCKind, BoundarySpec, Grid, ghost_signs
from .model import NFIELD, ModelParams, max_wavespeed, physical_flux

_BAD_NAMES = {1: "rho_i", 2: "pressure_i", 3: "rho_e", 4: "pressure_e"}


@dataclass
class DGField:
    """Modal solution: coefficients (nx, ny, 18, n_modes) on a grid/basis."""

    coeffs: np.ndarray
    grid: Grid
    basis: Basis
    time: float = 0.0

    def copy(self) -> "DGField":
        return DGField(self.coeffs.copy(), self.grid, self.basis, self.time)

    def cell_means(self) -> np.ndarray:
        """Cell averages of all fields, shape (nx, ny, 18)."""
        return self.coeffs[:, :, :, 0] * self.basis.mean_factor


def quad_points(grid: Grid, basis: Basis) -> tuple[np.ndarray, np.ndarray]:
    """Physical coordinates of all volume quadrature points, (nx, ny, n_vol)."""
    xc = grid.x_lo + (np.arange(grid.nx) + 0.5) * grid.dx
    yc = grid.y_lo + (np.arange(grid.ny) + 0.5) * grid.dy
    x = xc[:, None, None] + 0.5 * grid.dx * basis.vol_xi[None, None, :]
    y = yc[None, :, None] + 0.5 * grid.dy * basis.vol_eta[None, None, :]
    return np.broadcast_to(x, (grid.nx, grid.ny, basis.n_vol)), \
        np.broadcast_to(y, (grid.nx, grid.ny, basis.n_vol))


def project(ic, grid: Grid, basis: Basis, params: ModelParams) -> DGField:
    """L2-project a pointwise conserved-state function onto the modal basis.

    ``ic(x, y)`` must accept broadcast arrays and return (..., 18).  Raises
    InvalidStateError if any quadrature-point state is inadmissible.
    """
    x, y = quad_points(grid, basis)
    vals = np.asarray(ic(x, y), dtype=np.float64)
    if vals.shape != (grid.nx, grid.ny, basis.n_vol, NFIELD):
        raise ValueError(f"initial condition returned shape {vals.shape}")
    for name, off in (("ion", 0), ("electron", 5)):
        rho = vals[..., off]
        mom = vals[..., off + 1 : off + 4]
        p = (2.0 / 3.0) * (vals[..., off + 4] - 0.5 * np.sum(mom * mom, axis=-1) / rho)
        if np.any(~(rho > 0.0)) or np.any(~(p > 0.0)):
            raise InvalidStateError(f"inadmissible {name} state in initial condition")
    coeffs = np.einsum("ijqf,mq,q->ijfm", vals, basis.phi_vol, basis.vol_w, optimize=True)
    return DGField(np.ascontiguousarray(coeffs), grid, basis, 0.0)


def evaluate_at(field: DGField, x: float, y: float) -> np.ndarray:
    """Evaluate the modal expansion at a point (18,).

    On shared cell boundaries the limit from the containing cell with the
    lowest index is used.
    """
    g = field.grid
    i, j = g.cell_of(x, y)
    xi = 2.0 * (x - (g.x_lo + (i + 0.5) * g.dx)) / g.dx
    eta = 2.0 * (y - (g.y_lo + (j + 0.5) * g.dy)) / g.dy
    modes = field.basis.eval_modes(xi, eta)
    return field.coeffs[i, j] @ modes


def evaluate_on_sample_grid(field: DGField, sample: int) -> np.ndarray:
    """Values at an (nx*sample) x (ny*sample) lattice of in-cell midpoints.

    Returns (nx*sample, ny*sample, 18); point (m, n) sits at
    x_lo + (m + 1/2) dx/sample.
    """
    if sample < 1:
        raise ValueError("sample resolution must be >= 1")
    b = field.basis
    offs = (2.0 * (np.arange(sample) + 0.5) / sample) - 1.0
    nx, ny = field.grid.nx, field.grid.ny
    out = np.empty((nx * sample, ny * sample, NFIELD))
    for a, xi in enumerate(offs):
        for bb, eta in enumerate(offs):
            modes = b.eval_modes(xi, eta)
            out[a::sample, bb::sample] = np.tensordot(field.coeffs, modes, axes=([3], [0]))
    return out


def rusanov_flux(left: np.ndarray, right: np.ndarray, n, params: ModelParams) -> np.ndarray:
    """Local Lax-Friedrichs flux: mean physical flux minus s/2 times the jump."""
    fl = physical_flux(left, n, params)
    fr = physical_flux(right, n, params)
    s = np.maximum(max_wavespeed(left, n, params), max_wavespeed(right, n, params))
    return 0.5 * (fl + fr) - 0.5 * np.asarray(s)[..., None] * (np.asarray(right) - np.asarray(left))


class Solver:
    """Preallocated buffers plus kernel plumbing for one (grid, basis, bc, params)."""

    def __init__(self, grid: Grid, basis: Basis, params: ModelParams, bc: BoundarySpec):
        self.grid, self.basis, self.params, self.bc = grid, basis, params, bc
        nx, ny = grid.nx, grid.ny
        nm, nqv, nqe = basis.n_modes, basis.n_vol, basis.n_edge
        self.nqe = nqe
        w = basis.vol_w[None, :]
        self.phi2 = np.ascontiguousarray(basis.phi_vol)
        self.wdxi2 = np.ascontiguousarray(basis.dphi_dxi * w)
        self.wdeta2 = np.ascontiguousarray(basis.dphi_deta * w)
        self.wphi2 = np.ascontiguousarray(basis.phi_vol * w)
        self.phie_all = np.ascontiguousarray(
            np.concatenate([basis.phi_edge[s] for s in range(4)], axis=1))
        self.limiter_alpha = np.ascontiguousarray(basis.moment_limiter_alpha)
        self.limit_fields = NFIELD
        self.phi_pts = np.ascontiguousarray(
            np.concatenate([basis.phi_vol] + [basis.phi_edge[s] for s in range(4)], axis=1))
        self.wphie2 = np.ascontiguousarray(basis.phi_edge * basis.edge_w[None, None, :])
        self.traces = np.empty((nx, ny, NFIELD, 4 * nqe))
        self.fxi = np.empty((nx + 1, ny, NFIELD, nqe))
        self.fyi = np.empty((nx, ny + 1, NFIELD, nqe))
        self.status = np.zeros(4, dtype=np.int64)
        self._stage = [np.empty((nx, ny, NFIELD, nm)) for _ in range(2)]
        self._rhs = np.empty((nx, ny, NFIELD, nm))
        self._out = [np.empty((nx, ny, NFIELD, nm)) for _ in range(2)]
        self._flip = 0
        self.limit_counter = np.zeros(1, dtype=np.int64)
        self.escalate_counter = np.zeros(1, dtype=np.int64)
        kinds = bc.sides
        self.bc_codes = tuple(0 if k == BCKind.PERIODIC else 1 for k in kinds)
        self.signs = tuple(ghost_signs(side, kinds[side]) for side in range(4))

    def _model_args(self):
        p = self.params
        return (p.light_speed, p.chi, p.ion.charge_to_mass, p.electron.charge_to_mass,
                p.clean_b, p.clean_e)

    def _raise_bad(self, where: str):
        st = self.status
        name = _BAD_NAMES.get(int(st[3]), "state")
        i, j = int(st[1]), int(st[2])
        self.status[:] = 0
        raise InvalidStateError(f"non-positive {name} in {where} at cell ({i}, {j})")

    def compute_rhs(self, coeffs: np.ndarray, out: np.ndarray) -> None:
        args = self._model_args()
        kernels.compute_traces(coeffs, self.phie_all, self.traces)
        kernels.interface_flux_x(self.traces, self.fxi, self.bc_codes[0], self.bc_codes[1],
                                 self.signs[0], self.signs[1], self.nqe, *args, self.status)
        if self.status[0]:
            self._raise_bad("x-interface trace")
        kernels.interface_flux_y(self.traces, self.fyi, self.bc_codes[2], self.bc_codes[3],
                                 self.signs[2], self.signs[3], self.nqe, *args, self.status)
        if self.status[0]:
            self._raise_bad("y-interface trace")
        kernels.volume_source_lift(coeffs, self.fxi, self.fyi, self.phi2, self.wdxi2,
                                   self.wdeta2, self.wphi2, self.wphie2,
                                   self.grid.dx, self.grid.dy, *args,
                                   out, self.status)
        if self.status[0]:
            self._raise_bad("volume quadrature")

    def limit(self, coeffs: np.ndarray) -> None:
        kernels.apply_moment_limiter(coeffs, self.limiter_alpha, self.limit_fields,
                                     self.bc_codes[0], self.bc_codes[1],
                                     self.bc_codes[2], self.bc_codes[3],
                                     self.limit_counter)
        kernels.enforce_admissible_moments(coeffs, self.phi_pts,
                                           self.basis.mode_linear_x,
                                           self.basis.mode_linear_y,
                                           self.escalate_counter)

    def _check_means(self, coeffs: np.ndarray, stage: int) -> None:
        kernels.check_mean_state(coeffs, self.status)
        if self.status[0]:
            st = self.status
            name = _BAD_NAMES.get(int(st[3]), "state")
            i, j = int(st[1]), int(st[2])
            self.status[:] = 0
            raise InvalidStateError(
                f"non-positive cell-mean {name} at cell ({i}, {j}) after RK stage {stage}")

    def step(self, coeffs: np.ndarray, dt: float, limiter: bool = True,
             reuse_out: bool = False) -> np.ndarray:
        """One SSP-RK3 step (Shu-Osher form); returns the updated coefficients.

        With ``reuse_out`` the result lives in one of two internal ping-pong
        buffers (valid until the second-next call); the time-loop driver uses
        this to avoid a 2 * nx * ny * 18 * n_modes allocation per step.
        """
        u1, u2 = self._stage
        rhs = self._rhs
        self.compute_rhs(coeffs, rhs)
        kernels.stage_combine(u1, coeffs, 1.0, coeffs, 0.0, rhs, dt)
        if limiter:
            self.limit(u1)
        self._check_means(u1, 1)
        self.compute_rhs(u1, rhs)
        kernels.stage_combine(u2, coeffs, 0.75, u1, 0.25, rhs, 0.25 * dt)
        if limiter:
            self.limit(u2)
        self._check_means(u2, 2)
        self.compute_rhs(u2, rhs)
        if reuse_out:
            out = self._out[self._flip]
            self._flip ^= 1
        else:
            out = np.empty_like(coeffs)
        third = 1.0 / 3.0
        kernels.stage_combine(out, coeffs, third, u2, 2.0 * third, rhs, 2.0 * third * dt)
        if limiter:
            self.limit(out)
        self._check_means(out, 3)
        return out


_solver_cache: dict = {}


def _get_solver(field: DGField, bc: BoundarySpec, params: ModelParams) -> Solver:
    key = (field.grid, field.basis.order, params, bc)
    solver = _solver_cache.get(key)
    if solver is None:
        if len(_solver_cache) > 8:
            _solver_cache.clear()
        solver = Solver(field.grid, field.basis, params, bc)
        _solver_cache[key] = solver
    return solver


def compute_rhs(field: DGField, bc: BoundarySpec, params: ModelParams) -> np.ndarray:
    """Semi-discrete time derivative of the modal coefficients."""
    solver = _get_solver(field, bc, params)
    out = np.empty_like(field.coeffs)
    solver.compute_rhs(field.coeffs, out)
    return out


def apply_limiter(field: DGField, bc: BoundarySpec) -> DGField:
    """Componentwise minmod moment limiter; never changes cell means."""
    out = field.copy()
    codes = tuple(0 if k == BCKind.PERIODIC else 1 for k in bc.sides)
    counter = np.zeros(1, dtype=np.int64)
    kernels.apply_moment_limiter(out.coeffs, field.basis.moment_limiter_alpha, NFIELD,
                                 codes[0], codes[1], codes[2], codes[3], counter)
    return out


def compute_dt(field: DGField, cfl: float, params: ModelParams) -> float:
    """CFL timestep: cfl * (dx dy/(dx+dy)) / (s_max (2k+1)), s_max over x and y."""
    if not 0.0 < cfl <= 1.0:
        raise ValueError(f"cfl must be in (0, 1], got {cfl}")
    means = field.cell_means()
    s = np.maximum(max_wavespeed(means, (1.0, 0.0), params),
                   max_wavespeed(means, (0.0, 1.0), params))
    g = field.grid
    h = (g.dx * g.dy) / (g.dx + g.dy)
    return cfl * h / (float(np.max(s)) * (2 * field.basis.order + 1))


def ssp_rk3_step(field: DGField, dt: float, bc: BoundarySpec, params: ModelParams,
                 limiter: bool = True) -> DGField:
    """Advance one step; the limiter runs after every stage unless disabled."""
    solver = _get_solver(field, bc, params)
    coeffs = solver.step(field.coeffs, dt, limiter=limiter)
    return DGField(coeffs, field.grid, field.basis, field.time + dt)

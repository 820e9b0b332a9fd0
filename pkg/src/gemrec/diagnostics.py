"""Reconnection observables, conservation monitors, and field snapshots.

The reconnected flux F_recon(t) = F_left(0) - F_left(t) measures the loss
of magnetic flux through the vertical axis into the first quadrant; its
rate equals -E3 at the X-point (the origin), which the probe samples
directly.  The inertial tracker -mti*mte*J3/rho at the origin is the
quantity the reconnected flux should follow when the inertial term
dominates the out-of-plane Ohm's law.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .basis import legendre_derivs, legendre_values
from .dg import DGField, evaluate_at, evaluate_on_sample_grid
from .errors import InvalidStateError
from .grid import BCKind, BoundarySpec, ghost_signs
from .model import (BX, BY, BZ, EX, EY, EZ, PSI, FIELD_NAMES, ModelParams,
                    current_density)

DERIVED_FIELDS = ("flux_function", "J3", "divB")


@dataclass
class TimeSeriesRecord:
    """One diagnostic sample; field order matches the CSV schema."""

    t: float
    F_left: float
    F_recon: float
    E3_origin: float
    tracker: float
    cum_E3: float
    mass_i: float
    mass_e: float
    energy_total: float
    divB_L2: float
    divE_err_L2: float
    psi_L2: float
    Bz_max_abs: float

    @classmethod
    def column_names(cls) -> tuple:
        return tuple(f.name for f in fields(cls))

    def values(self) -> tuple:
        return tuple(getattr(self, f.name) for f in fields(self.__class__))


def left_flux(field: DGField) -> float:
    """Line integral of B1 along x = x_lo from y_lo to y_hi of the DG trace."""
    g, b = field.grid, field.basis
    # B1 trace on the west edge of column 0 at the edge Gauss points
    west = field.coeffs[0, :, BX, :] @ b.phi_edge[0]  # (ny, n_edge)
    return float(np.sum(west @ b.edge_w) * 0.5 * g.dy)


def reconnected_flux(field: DGField, f_left_0: float) -> tuple[float, float]:
    """(F_left, F_recon) against the cached t=0 baseline."""
    fl = left_flux(field)
    return fl, f_left_0 - fl


def xpoint_probe(field: DGField, params: ModelParams) -> tuple[float, float, float, float]:
    """(E3, J3, rho, tracker) evaluated at the origin.

    rho is the total mass density entering the generalized Ohm's law;
    tracker = -mti*mte*J3/rho.
    """
    u = evaluate_at(field, 0.0, 0.0)
    e3 = float(u[EZ])
    j3 = float(current_density(u, params)[2])
    rho = float(u[0] + u[5])
    if rho <= 0.0:
        raise InvalidStateError(f"non-positive total density {rho} at the origin")
    tracker = -params.ion.mtilde * params.electron.mtilde * j3 / rho
    return e3, j3, rho, tracker


def rate_identity_residual(records) -> np.ndarray:
    """|dF_recon/dt + E3(0,0)| per interior sample, central differences.

    Finite-difference check of the proposition that the reconnection rate
    is -E3 at the X-point; a convergence-tested property, not an identity
    of the discrete scheme.
    """
    if len(records) < 3:
        raise ValueError("need at least 3 uniformly spaced samples")
    t = np.array([r.t for r in records])
    fr = np.array([r.F_recon for r in records])
    e3 = np.array([r.E3_origin for r in records])
    dt = np.diff(t)
    if not np.allclose(dt, dt[0], rtol=1e-9, atol=1e-12):
        raise ValueError("samples must be uniformly spaced")
    rate = (fr[2:] - fr[:-2]) / (t[2:] - t[:-2])
    return np.abs(rate + e3[1:-1])


def _div_quadrature(field: DGField, cx: np.ndarray, cy: np.ndarray) -> np.ndarray:
    """d_x(cx-field) + d_y(cy-field) at all volume quadrature points."""
    b, g = field.basis, field.grid
    dx_part = np.tensordot(cx, b.dphi_dxi, axes=([2], [0])) * (2.0 / g.dx)
    dy_part = np.tensordot(cy, b.dphi_deta, axes=([2], [0])) * (2.0 / g.dy)
    return dx_part + dy_part


def _jump_sq_integral(field: DGField, bc: BoundarySpec, fidx_x: int, fidx_y: int,
                      scale: float = 1.0) -> float:
    """Sum over faces of (1/h_f) * integral of the normal-component jump squared.

    Boundary faces use the ghost convention (periodic wrap or parity signs),
    so e.g. a normal B at a conducting wall registers as a jump.
    """
    b, g = field.basis, field.grid
    w = b.edge_w
    total = 0.0
    # x-faces: field fidx_x, west/east traces
    tw = field.coeffs[:, :, fidx_x, :] @ b.phi_edge[0]
    te = field.coeffs[:, :, fidx_x, :] @ b.phi_edge[1]
    jumps = tw[1:] - te[:-1]
    total += np.sum((jumps ** 2) @ w) * (0.5 * g.dy) / g.dx
    sw = ghost_signs(0, bc.west)[fidx_x]
    se = ghost_signs(1, bc.east)[fidx_x]
    if bc.west == BCKind.PERIODIC:
        jw = tw[0] - te[-1]
        total += np.sum((jw ** 2) @ w) * (0.5 * g.dy) / g.dx
    else:
        jw = tw[0] - sw * tw[0]
        je = se * te[-1] - te[-1]
        total += (np.sum((jw ** 2) @ w) + np.sum((je ** 2) @ w)) * (0.5 * g.dy) / g.dx
    # y-faces: field fidx_y, south/north traces
    ts = field.coeffs[:, :, fidx_y, :] @ b.phi_edge[2]
    tn = field.coeffs[:, :, fidx_y, :] @ b.phi_edge[3]
    jumps = ts[:, 1:] - tn[:, :-1]
    total += np.sum((jumps ** 2) @ w) * (0.5 * g.dx) / g.dy
    ss = ghost_signs(2, bc.south)[fidx_y]
    sn = ghost_signs(3, bc.north)[fidx_y]
    if bc.south == BCKind.PERIODIC:
        js = ts[:, 0] - tn[:, -1]
        total += np.sum((js ** 2) @ w) * (0.5 * g.dx) / g.dy
    else:
        js = ts[:, 0] - ss * ts[:, 0]
        jn = sn * tn[:, -1] - tn[:, -1]
        total += (np.sum((js ** 2) @ w) + np.sum((jn ** 2) @ w)) * (0.5 * g.dx) / g.dy
    return total * scale ** 2


@dataclass
class ConservationMonitors:
    mass_i: float
    mass_e: float
    energy_total: float
    divB_L2: float
    divE_err_L2: float
    psi_L2: float
    Bz_max_abs: float


def conservation_monitors(field: DGField, params: ModelParams,
                          bc: BoundarySpec | None = None) -> ConservationMonitors:
    """Domain-integrated invariants and constraint-error norms.

    energy_total integrates eng_i + eng_e + (|E|^2/c^2 + |B|^2)/2, which the
    model conserves up to boundary fluxes and numerical dissipation.  The
    divergence norms combine the per-cell polynomial divergence with the
    (1/h_f)-weighted interface jumps of the normal component; divE_err is
    measured in charge units, || eps div E - sigma ||.
    """
    if bc is None:
        bc = BoundarySpec.gem_quarter()
    g, b = field.grid, field.basis
    area = g.dx * g.dy
    means = field.cell_means()
    mass_i = float(np.sum(means[:, :, 0])) * area
    mass_e = float(np.sum(means[:, :, 5])) * area

    csq = params.light_speed ** 2
    coeffs = field.coeffs
    fluid = float(np.sum(means[:, :, 4]) + np.sum(means[:, :, 9])) * area
    em_b = 0.5 * float(np.sum(coeffs[:, :, BX : BZ + 1, :] ** 2)) * (area / 4.0)
    em_e = 0.5 * float(np.sum(coeffs[:, :, EX : EZ + 1, :] ** 2)) * (area / 4.0) / csq
    energy_total = fluid + em_b + em_e

    w2 = b.vol_w
    div_b = _div_quadrature(field, coeffs[:, :, BX, :], coeffs[:, :, BY, :])
    div_b_sq = float(np.sum((div_b ** 2) @ w2)) * (area / 4.0)
    div_b_sq += _jump_sq_integral(field, bc, BX, BY)
    sigma = (params.ion.charge_to_mass * (coeffs[:, :, 0, :] @ b.phi_vol)
             + params.electron.charge_to_mass * (coeffs[:, :, 5, :] @ b.phi_vol))
    div_e = _div_quadrature(field, coeffs[:, :, EX, :], coeffs[:, :, EY, :])
    err = div_e / csq - sigma
    div_e_sq = float(np.sum((err ** 2) @ w2)) * (area / 4.0)
    div_e_sq += _jump_sq_integral(field, bc, EX, EY, scale=1.0 / csq)

    psi_sq = float(np.sum(coeffs[:, :, PSI, :] ** 2)) * (area / 4.0)
    bz_vals = np.tensordot(coeffs[:, :, BZ, :], b.phi_vol, axes=([2], [0]))
    return ConservationMonitors(
        mass_i=mass_i, mass_e=mass_e, energy_total=energy_total,
        divB_L2=float(np.sqrt(div_b_sq)), divE_err_L2=float(np.sqrt(div_e_sq)),
        psi_L2=float(np.sqrt(psi_sq)), Bz_max_abs=float(np.max(np.abs(bz_vals))),
    )


def _edge_values_left(field: DGField, sample: int) -> np.ndarray:
    """B1 evaluated on the x = x_lo edge at the y-sample points, (ny*sample,)."""
    b = field.basis
    offs = (2.0 * (np.arange(sample) + 0.5) / sample) - 1.0
    p_lo = legendre_values(b.order, np.array([-1.0]))[:, 0]
    p_eta = legendre_values(b.order, offs)
    modes = np.empty((b.n_modes, sample))
    for a in range(b.order + 1):
        for bb in range(b.order + 1):
            modes[a * (b.order + 1) + bb] = p_lo[a] * p_eta[bb]
    vals = field.coeffs[0, :, BX, :] @ modes  # (ny, sample)
    return vals.reshape(-1)


def sample_field(field: DGField, name: str, sample: int, params: ModelParams) -> np.ndarray:
    """Named field on the sample lattice, shape (nx*sample, ny*sample).

    Accepts the 18 canonical names plus the derived fields flux_function
    (path-integrated in-plane flux potential), J3, and divB.
    """
    if name in FIELD_NAMES:
        vals = evaluate_on_sample_grid(field, sample)
        return vals[:, :, FIELD_NAMES.index(name)]
    if name == "J3":
        vals = evaluate_on_sample_grid(field, sample)
        return (params.ion.charge_to_mass * vals[:, :, 3]
                + params.electron.charge_to_mass * vals[:, :, 8])
    if name == "divB":
        g, b = field.grid, field.basis
        offs = (2.0 * (np.arange(sample) + 0.5) / sample) - 1.0
        pv = legendre_values(b.order, offs)
        pd = legendre_derivs(b.order, offs)
        k1 = b.order + 1
        out = np.empty((g.nx * sample, g.ny * sample))
        for a in range(sample):
            for c in range(sample):
                dmx = np.empty(b.n_modes)
                dmy = np.empty(b.n_modes)
                for m_a in range(k1):
                    for m_b in range(k1):
                        m = m_a * k1 + m_b
                        dmx[m] = pd[m_a, a] * pv[m_b, c]
                        dmy[m] = pv[m_a, a] * pd[m_b, c]
                dbx = np.tensordot(field.coeffs[:, :, BX, :], dmx, axes=([2], [0]))
                dby = np.tensordot(field.coeffs[:, :, BY, :], dmy, axes=([2], [0]))
                out[a::sample, c::sample] = dbx * (2.0 / g.dx) + dby * (2.0 / g.dy)
        return out
    if name == "flux_function":
        g = field.grid
        vals = evaluate_on_sample_grid(field, sample)
        b1 = vals[:, :, BX]
        b2 = vals[:, :, BY]
        dxs = g.dx / sample
        dys = g.dy / sample
        # psi(x, y) = int_0^y B1(x_lo, s) ds - int_{x_lo}^x B2(s, y) ds on the
        # sample lattice, midpoint cumulative sums with a half-interval lead-in
        b1_edge = _edge_values_left(field, sample)
        col = np.cumsum(b1_edge) * dys - 0.5 * dys * b1_edge
        row = np.cumsum(b2, axis=0) * dxs - 0.5 * dxs * b2
        return col[None, :] - row
    raise ValueError(f"unknown snapshot field {name!r}; known: "
                     f"{', '.join(FIELD_NAMES + DERIVED_FIELDS)}")


def snapshot_text(field: DGField, name: str, sample: int, params: ModelParams) -> str:
    """Self-describing text snapshot: header lines then ny rows of nx values."""
    g = field.grid
    vals = sample_field(field, name, sample, params)
    nxs, nys = vals.shape
    lines = [
        f"# field {name}",
        f"# t {field.time:.17g}",
        f"# nx {nxs} ny {nys}",
        f"# xlo xhi ylo yhi {g.x_lo:.17g} {g.x_hi:.17g} {g.y_lo:.17g} {g.y_hi:.17g}",
    ]
    for j in range(nys):
        lines.append(" ".join(f"{vals[i, j]:.17g}" for i in range(nxs)))
    return "\n".join(lines) + "\n"


class Recorder:
    """Accumulates the time series: baseline flux, cum_E3 at integer times.

    cum_E3 approximates -int_0^t E3(origin) by the right-endpoint sum of
    -E3 over integer times; rows between integers carry the last value.
    """

    def __init__(self, params: ModelParams, bc: BoundarySpec):
        self.params = params
        self.bc = bc
        self.f_left_0: float | None = None
        self.cum_e3 = 0.0
        self._last_int_time = 0

    def record(self, field: DGField) -> TimeSeriesRecord:
        if self.f_left_0 is None:
            self.f_left_0 = left_flux(field)
        fl, fr = reconnected_flux(field, self.f_left_0)
        e3, j3, rho, tracker = xpoint_probe(field, self.params)
        n = int(round(field.time))
        if abs(field.time - n) < 1e-9 and n > self._last_int_time:
            self.cum_e3 += -e3
            self._last_int_time = n
        mon = conservation_monitors(field, self.params, self.bc)
        return TimeSeriesRecord(
            t=field.time, F_left=fl, F_recon=fr, E3_origin=e3, tracker=tracker,
            cum_E3=self.cum_e3, mass_i=mon.mass_i, mass_e=mon.mass_e,
            energy_total=mon.energy_total, divB_L2=mon.divB_L2,
            divE_err_L2=mon.divE_err_L2, psi_L2=mon.psi_L2,
            Bz_max_abs=mon.Bz_max_abs,
        )

"""Five-moment two-fluid plasma model coupled to perfectly hyperbolic Maxwell.

Evolved state is an 18-component vector (two Euler species with isotropic
pressure, electromagnetic field, and two divergence-cleaning potentials):

    index  field
    0      rho_i            ion mass density
    1..3   mom_i            ion momentum (x, y, z)
    4      eng_i            ion gas-dynamic energy, eng = (3/2) p + rho u^2/2
    5      rho_e            electron mass density
    6..8   mom_e            electron momentum
    9      eng_e            electron gas-dynamic energy
    10..12 B                magnetic field
    13..15 E                electric field
    16     psi              magnetic divergence-cleaning potential
    17     phi              electric divergence-cleaning potential

All quantities are nondimensional: unit charge, combined particle mass
m_i + m_e = 1, Alfven-speed velocity unit, and permittivity fixed by
1/eps = c^2.  The adiabatic index is 5/3, implied by the isotropic-closure
energy relation and not configurable.

Functions here are pure and vectorized: state arrays may carry any number
of leading axes with the 18 fields on the last axis.  The numerically
identical (but scalar-specialized) hot-loop versions live in
``gemrec.kernels``; ``tests/test_kernel_consistency.py`` pins the two
implementations together.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidStateError

GAMMA = 5.0 / 3.0

NFIELD = 18

# canonical slot indices
RHO_I, MX_I, MY_I, MZ_I, ENG_I = 0, 1, 2, 3, 4
RHO_E, MX_E, MY_E, MZ_E, ENG_E = 5, 6, 7, 8, 9
BX, BY, BZ = 10, 11, 12
EX, EY, EZ = 13, 14, 15
PSI, PHI = 16, 17

FIELD_NAMES = (
    "rho_i", "mom_ix", "mom_iy", "mom_iz", "energy_i",
    "rho_e", "mom_ex", "mom_ey", "mom_ez", "energy_e",
    "B1", "B2", "B3", "E1", "E2", "E3", "psi", "phi",
)

# (density, momentum-x, energy) offsets for the species loop
SPECIES_OFFSETS = (0, 5)


@dataclass(frozen=True)
class SpeciesParams:
    """Nondimensional particle mass and charge of one species.

    ``mass`` must be positive.  ``charge`` is +-1 for the GEM presets; a
    zero charge is accepted so that decoupled (charge-free) verification
    problems can reuse the full solver.  ``mtilde`` is the mass-to-charge
    magnitude m/|q| entering the generalized Ohm's law; for a chargeless
    species it is undefined and stored as nan.
    """

    mass: float
    charge: float
    label: str = ""

    def __post_init__(self):
        if not self.mass > 0.0:
            raise ValueError(f"species {self.label!r}: mass must be > 0, got {self.mass}")

    @property
    def mtilde(self) -> float:
        return self.mass / abs(self.charge) if self.charge != 0.0 else float("nan")

    @property
    def charge_to_mass(self) -> float:
        return self.charge / self.mass


@dataclass(frozen=True)
class ModelParams:
    """Model-level constants: light speed, cleaning setup, and the two species.

    The permittivity is not stored; nondimensionalization fixes 1/eps = c^2.
    ``chi`` is the ratio of the constraint-error transport speed to c.
    With ``clean_b`` (``clean_e``) disabled the psi (phi) potential is frozen
    at its initial value and all its flux/source couplings vanish.
    """

    light_speed: float = 10.0
    chi: float = 1.05
    clean_b: bool = True
    clean_e: bool = False
    ion: SpeciesParams = field(default_factory=lambda: SpeciesParams(0.5, 1.0, "ion"))
    electron: SpeciesParams = field(default_factory=lambda: SpeciesParams(0.5, -1.0, "electron"))

    def __post_init__(self):
        if not self.light_speed > 0.0:
            raise ValueError(f"light_speed must be > 0, got {self.light_speed}")
        if not self.chi >= 1.0:
            raise ValueError(f"chi must be >= 1, got {self.chi}")

    @property
    def species(self) -> tuple[SpeciesParams, SpeciesParams]:
        return (self.ion, self.electron)

    @property
    def epsilon_inv(self) -> float:
        return self.light_speed ** 2


@dataclass
class PrimitiveState:
    """Pointwise primitive description: per-species (rho, u, p) plus EM fields.

    Arrays are broadcastable; vector components live on the last axis
    (length 3).  Used for problem setup and diagnostics; the solver works
    on conserved vectors.
    """

    rho_i: np.ndarray
    u_i: np.ndarray
    p_i: np.ndarray
    rho_e: np.ndarray
    u_e: np.ndarray
    p_e: np.ndarray
    B: np.ndarray
    E: np.ndarray
    psi: np.ndarray
    phi: np.ndarray


@dataclass
class OhmsLawTerms:
    """Decomposition of the generalized Ohm's law at a point.

    total_E = convective + resistive + hall + pressure + inertial, where
    convective is B x u (u the mass-averaged velocity) and the remaining
    four terms make up the electric field in the fluid frame.  The
    resistive term is identically zero in this collisionless model.
    """

    convective: np.ndarray
    resistive: np.ndarray
    hall: np.ndarray
    pressure: np.ndarray
    inertial: np.ndarray

    @property
    def total_E(self) -> np.ndarray:
        return self.convective + self.resistive + self.hall + self.pressure + self.inertial


@dataclass
class PointGradients:
    """First spatial derivatives feeding the Ohm's-law decomposition.

    Gradients are in-plane only (d/dx, d/dy); out-of-plane derivatives are
    identically zero in this 2D model.  ``djdt`` is the time derivative of
    the current density, in practice a finite difference of two successive
    probe samples.

    Shapes: drho_* (2,), du_* (2, 3), dp_* (2,), dj (2, 3), djdt (3,).
    """

    drho_i: np.ndarray
    du_i: np.ndarray
    dp_i: np.ndarray
    drho_e: np.ndarray
    du_e: np.ndarray
    dp_e: np.ndarray
    dj: np.ndarray
    djdt: np.ndarray


def _check_positive(arr, what: str, context: str):
    if np.any(~(arr > 0.0)):
        bad = np.asarray(arr)
        idx = np.unravel_index(int(np.argmin(bad)), bad.shape) if bad.ndim else ()
        raise InvalidStateError(
            f"non-positive {what} (min {np.min(bad):.6e}) at {idx}{': ' + context if context else ''}"
        )


def cons_to_prim(u: np.ndarray, params: ModelParams, context: str = "") -> PrimitiveState:
    """Convert conserved fields to primitives using eng = (3/2)p + rho u^2/2.

    Raises InvalidStateError naming the offending species if a density or
    derived pressure is not positive; ``context`` (e.g. a cell index) is
    appended to the message by the caller.
    """
    u = np.asarray(u, dtype=np.float64)
    out = {}
    for name, off in (("ion", 0), ("electron", 5)):
        rho = u[..., off + 0]
        _check_positive(rho, f"{name} density", context)
        mom = u[..., off + 1 : off + 4]
        vel = mom / rho[..., None]
        kinetic = 0.5 * np.sum(mom * vel, axis=-1)
        p = (2.0 / 3.0) * (u[..., off + 4] - kinetic)
        _check_positive(p, f"{name} pressure", context)
        out[name] = (rho, vel, p)
    return PrimitiveState(
        rho_i=out["ion"][0], u_i=out["ion"][1], p_i=out["ion"][2],
        rho_e=out["electron"][0], u_e=out["electron"][1], p_e=out["electron"][2],
        B=u[..., BX : BZ + 1].copy(), E=u[..., EX : EZ + 1].copy(),
        psi=u[..., PSI].copy(), phi=u[..., PHI].copy(),
    )


def prim_to_cons(w: PrimitiveState, params: ModelParams) -> np.ndarray:
    """Exact inverse of cons_to_prim; rejects non-positive rho or p."""
    rho_i = np.asarray(w.rho_i, dtype=np.float64)
    shape = np.broadcast_shapes(rho_i.shape, np.asarray(w.rho_e).shape, np.asarray(w.B).shape[:-1])
    u = np.zeros(shape + (NFIELD,))
    for off, rho, vel, p, name in (
        (0, w.rho_i, w.u_i, w.p_i, "ion"),
        (5, w.rho_e, w.u_e, w.p_e, "electron"),
    ):
        rho = np.asarray(rho, dtype=np.float64)
        vel = np.asarray(vel, dtype=np.float64)
        p = np.asarray(p, dtype=np.float64)
        _check_positive(rho, f"{name} density", "")
        _check_positive(p, f"{name} pressure", "")
        u[..., off + 0] = rho
        u[..., off + 1 : off + 4] = rho[..., None] * vel
        u[..., off + 4] = 1.5 * p + 0.5 * rho * np.sum(vel * vel, axis=-1)
    u[..., BX : BZ + 1] = w.B
    u[..., EX : EZ + 1] = w.E
    u[..., PSI] = w.psi
    u[..., PHI] = w.phi
    return u


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # np.cross allocates less predictably; keep it explicit
    out = np.empty(np.broadcast_shapes(a.shape, b.shape))
    out[..., 0] = a[..., 1] * b[..., 2] - a[..., 2] * b[..., 1]
    out[..., 1] = a[..., 2] * b[..., 0] - a[..., 0] * b[..., 2]
    out[..., 2] = a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]
    return out


def physical_flux(u: np.ndarray, direction, params: ModelParams) -> np.ndarray:
    """Directional flux F(u).n for an in-plane unit vector n = (n1, n2, 0).

    Fluid blocks are the Euler fluxes with isotropic pressure.  The Maxwell
    blocks carry the cleaning couplings: the B-flux picks up chi*psi*n, the
    E-flux chi*c^2*phi*n, while psi and phi transport chi*c^2*(B.n) and
    chi*(E.n).  Disabled cleaning zeroes the corresponding couplings, which
    freezes the potential.
    """
    u = np.asarray(u, dtype=np.float64)
    n1, n2 = float(direction[0]), float(direction[1])
    w = cons_to_prim(u, params)
    c2 = params.light_speed ** 2
    chi = params.chi
    f = np.zeros_like(u)
    for off, rho, vel, p in ((0, w.rho_i, w.u_i, w.p_i), (5, w.rho_e, w.u_e, w.p_e)):
        un = vel[..., 0] * n1 + vel[..., 1] * n2
        mn = rho * un
        f[..., off + 0] = mn
        f[..., off + 1] = mn * vel[..., 0] + p * n1
        f[..., off + 2] = mn * vel[..., 1] + p * n2
        f[..., off + 3] = mn * vel[..., 2]
        f[..., off + 4] = un * (u[..., off + 4] + p)
    B, E = w.B, w.E
    n3 = np.zeros(3)
    n3[0], n3[1] = n1, n2
    # curl terms in flux form: F_B.n = n x E, F_E.n = -c^2 n x B
    f[..., BX : BZ + 1] = _cross(np.broadcast_to(n3, B.shape), E)
    f[..., EX : EZ + 1] = -c2 * _cross(np.broadcast_to(n3, B.shape), B)
    Bn = B[..., 0] * n1 + B[..., 1] * n2
    En = E[..., 0] * n1 + E[..., 1] * n2
    if params.clean_b:
        f[..., BX] += chi * w.psi * n1
        f[..., BY] += chi * w.psi * n2
        f[..., PSI] = chi * c2 * Bn
    if params.clean_e:
        f[..., EX] += chi * c2 * w.phi * n1
        f[..., EY] += chi * c2 * w.phi * n2
        f[..., PHI] = chi * En
    return f


def source(u: np.ndarray, params: ModelParams) -> np.ndarray:
    """Lorentz-coupling source terms.

    Mass, B, and psi sources vanish.  Momentum gets sigma_s (E + u_s x B),
    energy sigma_s u_s . E, the E equation -c^2 J, and phi (when electric
    cleaning is on) chi c^2 sigma, with sigma_s = (q_s/m_s) rho_s.
    """
    u = np.asarray(u, dtype=np.float64)
    c2 = params.light_speed ** 2
    s = np.zeros_like(u)
    E = u[..., EX : EZ + 1]
    B = u[..., BX : BZ + 1]
    J = np.zeros(E.shape)
    sigma = np.zeros(u.shape[:-1])
    for off, sp in ((0, params.ion), (5, params.electron)):
        rho = u[..., off]
        mom = u[..., off + 1 : off + 4]
        vel = mom / rho[..., None]
        sig = sp.charge_to_mass * rho
        s[..., off + 1 : off + 4] = sig[..., None] * (E + _cross(vel, B))
        s[..., off + 4] = sig * np.sum(vel * E, axis=-1)
        J += sig[..., None] * vel
        sigma += sig
    s[..., EX : EZ + 1] = -c2 * J
    if params.clean_e:
        s[..., PHI] = params.chi * c2 * sigma
    return s


def max_wavespeed(u: np.ndarray, direction, params: ModelParams) -> np.ndarray:
    """Largest signal speed: max over species of |u_s.n| + sqrt(gamma p/rho), c, c*chi."""
    w = cons_to_prim(u, params)
    n1, n2 = float(direction[0]), float(direction[1])
    speed = np.full(np.shape(w.rho_i), params.light_speed * params.chi)
    for rho, vel, p in ((w.rho_i, w.u_i, w.p_i), (w.rho_e, w.u_e, w.p_e)):
        un = np.abs(vel[..., 0] * n1 + vel[..., 1] * n2)
        speed = np.maximum(speed, un + np.sqrt(GAMMA * p / rho))
    return speed if speed.shape else float(speed)


def current_density(u: np.ndarray, params: ModelParams) -> np.ndarray:
    """J = sum_s (q_s/m_s) * momentum_s."""
    u = np.asarray(u, dtype=np.float64)
    return (params.ion.charge_to_mass * u[..., MX_I : MZ_I + 1]
            + params.electron.charge_to_mass * u[..., MX_E : MZ_E + 1])


def charge_density(u: np.ndarray, params: ModelParams) -> np.ndarray:
    """sigma = sum_s (q_s/m_s) * rho_s; zero for quasineutral states."""
    u = np.asarray(u, dtype=np.float64)
    return (params.ion.charge_to_mass * u[..., RHO_I]
            + params.electron.charge_to_mass * u[..., RHO_E])


def ohms_law_terms(w: PrimitiveState, gradients: PointGradients,
                   params: ModelParams) -> OhmsLawTerms:
    """Evaluate the generalized Ohm's-law decomposition at one point.

    The electric field splits as E = B x u + E' with E' the sum of the
    resistive (zero here), Hall, pressure, and inertial terms.  Pressure
    tensors are isotropic, so the pressure term reduces to gradients of the
    scalar pressures.  The inertial term needs d_t J, which the caller
    supplies (finite-differenced from the probe time series).
    """
    rho_i = float(np.asarray(w.rho_i))
    rho_e = float(np.asarray(w.rho_e))
    rho = rho_i + rho_e
    if rho <= 0.0:
        raise InvalidStateError(f"non-positive total density {rho}")
    u_i = np.asarray(w.u_i, dtype=np.float64).reshape(3)
    u_e = np.asarray(w.u_e, dtype=np.float64).reshape(3)
    B = np.asarray(w.B, dtype=np.float64).reshape(3)
    mti = params.ion.mtilde
    mte = params.electron.mtilde

    sig_i = params.ion.charge_to_mass * rho_i
    sig_e = params.electron.charge_to_mass * rho_e
    J = sig_i * u_i + sig_e * u_e
    u_bulk = (rho_i * u_i + rho_e * u_e) / rho

    g = gradients
    # in-plane gradient operators: rows are d/dx, d/dy
    drho = np.asarray(g.drho_i) + np.asarray(g.drho_e)
    dmom = (np.outer(np.asarray(g.drho_i), u_i) + rho_i * np.asarray(g.du_i)
            + np.outer(np.asarray(g.drho_e), u_e) + rho_e * np.asarray(g.du_e))
    du_bulk = (dmom - np.outer(drho, u_bulk)) / rho
    dj = np.asarray(g.dj, dtype=np.float64)

    convective = np.cross(B, u_bulk)
    resistive = np.zeros(3)
    hall = ((mti - mte) / rho) * np.cross(J, B)
    pressure = np.zeros(3)
    pressure[0] = (mte * g.dp_i[0] - mti * g.dp_e[0]) / rho
    pressure[1] = (mte * g.dp_i[1] - mti * g.dp_e[1]) / rho

    div_u = du_bulk[0, 0] + du_bulk[1, 1]
    div_j = dj[0, 0] + dj[1, 1]
    # div(uJ + Ju + f JJ) with f = (mte - mti)/rho, z-derivatives zero
    adv = (J * div_u + (u_bulk[0] * dj[0] + u_bulk[1] * dj[1])
           + u_bulk * div_j + (J[0] * du_bulk[0] + J[1] * du_bulk[1]))
    f_coef = (mte - mti) / rho
    df = -(mte - mti) / rho ** 2 * drho
    adv += J * (f_coef * div_j + J[0] * df[0] + J[1] * df[1])
    adv += f_coef * (J[0] * dj[0] + J[1] * dj[1])
    inertial = (mti * mte / rho) * (np.asarray(g.djdt, dtype=np.float64) + adv)
    return OhmsLawTerms(convective=convective, resistive=resistive, hall=hall,
                        pressure=pressure, inertial=inertial)

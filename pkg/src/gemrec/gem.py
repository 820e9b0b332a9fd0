"""GEM reconnection challenge setup: Harris sheet plus island perturbation.

The unperturbed equilibrium is

    B(y)   = B0 tanh(y/lam) e_x
    n(y)   = n0 (1/5 + sech^2(y/lam))          (both species)
    p(y)   = (B0^2 / 2 n0) n(y),  split p_s = T_s/(T_i+T_e) p
    E      = 0

with the out-of-plane current J_z = -(B0/lam) sech^2(y/lam) required by
Ampere's law.  The current is split between the species in proportion to
their temperature share, J_sz = T_s/(T_i+T_e) J_z, and carried as drift
velocities u_sz = J_sz / sigma_s.  This split puts each species separately
in momentum balance (sigma_s u_s x B = grad p_s), so the two-fluid initial
state is an exact equilibrium; any other split would launch an O(1)
transient that contaminates the reconnection signal.

The island perturbation adds delta_B = -e_z x grad(psi) with
psi = psi0 cos(2 pi x/Lx) cos(pi y/Ly); it is divergence-free and is added
to B only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, PrimitiveState, SpeciesParams, prim_to_cons

PRESET_NAMES = ("gem-25-5", "gem-pair-5", "gem-pair-1")


@dataclass(frozen=True)
class GemConfig:
    """Physical problem constants plus the EM solver flags they imply.

    Species masses derive from the ratio with m_i + m_e = 1:
    m_i = mass_ratio/(1+mass_ratio).  Charges are +1/-1.
    """

    lam: float = 0.5
    b0: float = 1.0
    n0: float = 1.0
    psi0: float = 0.1
    lx: float = 8.0 * np.pi
    ly: float = 4.0 * np.pi
    mass_ratio: float = 25.0
    temp_ratio: float = 5.0
    light_speed: float = 10.0
    chi: float = 1.05
    clean_b: bool = True
    clean_e: bool = False

    def __post_init__(self):
        for name in ("lam", "b0", "n0", "lx", "ly", "mass_ratio", "temp_ratio"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.psi0 < 0.0:
            raise ValueError(f"psi0 must be >= 0, got {self.psi0}")

    @property
    def mass_i(self) -> float:
        return self.mass_ratio / (1.0 + self.mass_ratio)

    @property
    def mass_e(self) -> float:
        return 1.0 / (1.0 + self.mass_ratio)

    @property
    def temp_share_i(self) -> float:
        return self.temp_ratio / (1.0 + self.temp_ratio)

    @property
    def temp_share_e(self) -> float:
        return 1.0 / (1.0 + self.temp_ratio)

    def model_params(self) -> ModelParams:
        return ModelParams(
            light_speed=self.light_speed, chi=self.chi,
            clean_b=self.clean_b, clean_e=self.clean_e,
            ion=SpeciesParams(self.mass_i, 1.0, "ion"),
            electron=SpeciesParams(self.mass_e, -1.0, "electron"),
        )


def preset(name: str) -> GemConfig:
    """The three parameter presets: (mass ratio, temperature ratio)."""
    table = {
        "gem-25-5": (25.0, 5.0),
        "gem-pair-5": (1.0, 5.0),
        "gem-pair-1": (1.0, 1.0),
    }
    if name not in table:
        raise ValueError(f"unknown preset {name!r}; choose one of {', '.join(PRESET_NAMES)}")
    mr, tr = table[name]
    return GemConfig(mass_ratio=mr, temp_ratio=tr)


def equilibrium(x, y, cfg: GemConfig) -> PrimitiveState:
    """Unperturbed Harris state at (broadcastable) points."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    shape = np.broadcast_shapes(x.shape, y.shape)
    yb = np.broadcast_to(y, shape)

    sech2 = 1.0 / np.cosh(yb / cfg.lam) ** 2
    n = cfg.n0 * (0.2 + sech2)
    p = (cfg.b0 ** 2 / (2.0 * cfg.n0)) * n
    jz = -(cfg.b0 / cfg.lam) * sech2

    B = np.zeros(shape + (3,))
    B[..., 0] = cfg.b0 * np.tanh(yb / cfg.lam)
    E = np.zeros(shape + (3,))

    u_i = np.zeros(shape + (3,))
    u_e = np.zeros(shape + (3,))
    # sigma_i = +n, sigma_e = -n (unit charges)
    u_i[..., 2] = cfg.temp_share_i * jz / n
    u_e[..., 2] = cfg.temp_share_e * jz / (-n)

    return PrimitiveState(
        rho_i=cfg.mass_i * n, u_i=u_i, p_i=cfg.temp_share_i * p,
        rho_e=cfg.mass_e * n, u_e=u_e, p_e=cfg.temp_share_e * p,
        B=B, E=E, psi=np.zeros(shape), phi=np.zeros(shape),
    )


def perturbation(x, y, cfg: GemConfig):
    """Magnetic island perturbation delta_B = -e_z x grad(psi)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    shape = np.broadcast_shapes(x.shape, y.shape)
    kx = 2.0 * np.pi / cfg.lx
    ky = np.pi / cfg.ly
    db = np.zeros(shape + (3,))
    db[..., 0] = -cfg.psi0 * ky * np.cos(kx * x) * np.sin(ky * y)
    db[..., 1] = cfg.psi0 * kx * np.sin(kx * x) * np.cos(ky * y)
    return db


def initial_state(x, y, cfg: GemConfig) -> PrimitiveState:
    """Harris equilibrium with the perturbation added to B only."""
    w = equilibrium(x, y, cfg)
    w.B = w.B + perturbation(x, y, cfg)
    return w


def initial_conserved(cfg: GemConfig, perturbed: bool = True):
    """Pointwise conserved-state function (x, y) -> (..., 18) for projection."""
    params = cfg.model_params()

    def ic(x, y):
        w = initial_state(x, y, cfg) if perturbed else equilibrium(x, y, cfg)
        return prim_to_cons(w, params)

    return ic


def flux_function(x, y, cfg: GemConfig, perturbed: bool = True):
    """Total in-plane flux function: lam B0 ln cosh(y/lam) (+ psi).

    The initial B is the curl of this out-of-plane potential, so its
    contours are field lines.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    base = cfg.lam * cfg.b0 * np.log(np.cosh(y / cfg.lam))
    if not perturbed:
        return np.broadcast_to(base, np.broadcast_shapes(x.shape, y.shape)).copy()
    return base + cfg.psi0 * np.cos(2.0 * np.pi * x / cfg.lx) * np.cos(np.pi * y / cfg.ly)

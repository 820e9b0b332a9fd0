"""Tensor-product modal basis and Gauss quadrature on the reference square.

Modes are products of orthonormal Legendre polynomials on [-1, 1], so the
element mass matrix is (dx dy / 4) times the identity.  Mode (a, b) has
degree a in xi and b in eta and lives at flat index a*(k+1) + b.

Quadrature uses (k+2) Gauss-Legendre points per direction for volumes and
k+2 points per edge, exact for integrands of degree 2k+3.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import legendre


def legendre_values(order: int, x: np.ndarray) -> np.ndarray:
    """Orthonormal Legendre values, shape (order+1, len(x))."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    vals = np.empty((order + 1, x.size))
    for n in range(order + 1):
        coef = np.zeros(n + 1)
        coef[n] = 1.0
        vals[n] = legendre.legval(x, coef) * np.sqrt((2 * n + 1) / 2.0)
    return vals


def legendre_derivs(order: int, x: np.ndarray) -> np.ndarray:
    """Derivatives of the orthonormal Legendre polynomials."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    vals = np.empty((order + 1, x.size))
    for n in range(order + 1):
        coef = np.zeros(n + 1)
        coef[n] = 1.0
        vals[n] = legendre.legval(x, legendre.legder(coef)) * np.sqrt((2 * n + 1) / 2.0)
    return vals


@dataclass(frozen=True)
class Basis:
    """Precomputed mode/quadrature tables for polynomial degree ``order``.

    Attributes ending in ``_vol`` are evaluated at the (order+2)^2 tensor
    volume points (flattened with xi fastest in the q index ordering
    q = qx*(order+2) + qy); ``edge_*`` tables are evaluated at the k+2
    points along each edge, ordered by increasing edge coordinate.
    """

    order: int = 2
    n_modes: int = field(init=False)
    n_vol: int = field(init=False)
    n_edge: int = field(init=False)
    vol_xi: np.ndarray = field(init=False, repr=False)
    vol_eta: np.ndarray = field(init=False, repr=False)
    vol_w: np.ndarray = field(init=False, repr=False)
    phi_vol: np.ndarray = field(init=False, repr=False)
    dphi_dxi: np.ndarray = field(init=False, repr=False)
    dphi_deta: np.ndarray = field(init=False, repr=False)
    edge_x: np.ndarray = field(init=False, repr=False)
    edge_w: np.ndarray = field(init=False, repr=False)
    phi_edge: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        k = self.order
        if k < 1:
            raise ValueError("polynomial degree must be >= 1")
        nq = k + 2
        pts, wts = legendre.leggauss(nq)
        object.__setattr__(self, "n_modes", (k + 1) ** 2)
        object.__setattr__(self, "n_vol", nq * nq)
        object.__setattr__(self, "n_edge", nq)

        xi = np.repeat(pts, nq)
        eta = np.tile(pts, nq)
        w2 = np.repeat(wts, nq) * np.tile(wts, nq)
        object.__setattr__(self, "vol_xi", xi)
        object.__setattr__(self, "vol_eta", eta)
        object.__setattr__(self, "vol_w", w2)

        p_xi, p_eta = legendre_values(k, xi), legendre_values(k, eta)
        d_xi, d_eta = legendre_derivs(k, xi), legendre_derivs(k, eta)
        phi = np.empty((self.n_modes, self.n_vol))
        dxi = np.empty_like(phi)
        deta = np.empty_like(phi)
        for a in range(k + 1):
            for b in range(k + 1):
                m = a * (k + 1) + b
                phi[m] = p_xi[a] * p_eta[b]
                dxi[m] = d_xi[a] * p_eta[b]
                deta[m] = p_xi[a] * d_eta[b]
        object.__setattr__(self, "phi_vol", phi)
        object.__setattr__(self, "dphi_dxi", dxi)
        object.__setattr__(self, "dphi_deta", deta)

        object.__setattr__(self, "edge_x", pts.copy())
        object.__setattr__(self, "edge_w", wts.copy())
        # edge order: 0 = west (xi=-1), 1 = east (xi=+1), 2 = south (eta=-1), 3 = north (eta=+1)
        p_e = legendre_values(k, pts)
        p_lo = legendre_values(k, np.array([-1.0]))[:, 0]
        p_hi = legendre_values(k, np.array([1.0]))[:, 0]
        edge = np.empty((4, self.n_modes, nq))
        for a in range(k + 1):
            for b in range(k + 1):
                m = a * (k + 1) + b
                edge[0, m] = p_lo[a] * p_e[b]
                edge[1, m] = p_hi[a] * p_e[b]
                edge[2, m] = p_e[a] * p_lo[b]
                edge[3, m] = p_e[a] * p_hi[b]
        object.__setattr__(self, "phi_edge", edge)

    def eval_modes(self, xi: float, eta: float) -> np.ndarray:
        """Mode values at a single reference point."""
        k = self.order
        px = legendre_values(k, np.array([xi]))[:, 0]
        pe = legendre_values(k, np.array([eta]))[:, 0]
        out = np.empty(self.n_modes)
        for a in range(k + 1):
            for b in range(k + 1):
                out[a * (k + 1) + b] = px[a] * pe[b]
        return out

    @property
    def mode_linear_x(self) -> int:
        return self.order + 1

    @property
    def mode_linear_y(self) -> int:
        return 1

    @property
    def mean_factor(self) -> float:
        """Cell mean = mean_factor * coefficient of mode (0, 0)."""
        return 0.5

    @property
    def moment_limiter_alpha(self) -> np.ndarray:
        """Hierarchical-limiter scalings 1/sqrt(4 m^2 - 1) per 1D degree."""
        m = np.arange(self.order + 1, dtype=np.float64)
        return np.where(m > 0, 1.0 / np.sqrt(np.maximum(4 * m * m - 1.0, 1.0)), 0.0)

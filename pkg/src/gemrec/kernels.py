"""Compiled inner loops for the RKDG solver.

These mirror the formulas in ``gemrec.model`` with scalar-specialized code;
``tests/test_kernel_consistency.py`` keeps the two in lockstep.  All kernels
are serial and write disjoint outputs, so results are bitwise reproducible.

fastmath excludes the nan/inf flags so that admissibility checks stay honest
even on states that have already blown up.

Data layout: coefficients U are (nx, ny, 18, n_modes); per-cell edge traces
T are (nx, ny, 18, 4*n_qe) with the last axis packing side (W, E, S, N)
major, edge quadrature point minor; interface flux planes FXI/FYI are
(nx+1, ny, 18, n_qe) and (nx, ny+1, 18, n_qe).  Mode tables arrive
transposed (point-minor) so inner loops reduce over contiguous runs.

Status codes: 0 ok, 1 rho_i, 2 p_i, 3 rho_e, 4 p_e non-positive; status[1:3]
hold the cell (or interface) index and status[3] the code.
"""

from __future__ import annotations

import numpy as np
from numba import njit

FM = {"contract", "reassoc", "nsz", "arcp"}
# physics blocks are real (never-inlined) functions compiled without
# "contract": numba IR inlining would substitute the caller's flags, and
# fused multiply-adds leave rounding residues in the current/charge sums
# that break the pair-plasma species-mirror cancellation (c^2-amplified)
FM_EXACT = {"reassoc", "nsz", "arcp"}
GAMMA = 5.0 / 3.0

BAD_RHO_I, BAD_P_I, BAD_RHO_E, BAD_P_E = 1, 2, 3, 4


@njit(cache=True, fastmath=FM_EXACT, inline="never")
def _flux_src_block(V, FX, FY, S, UX, UY, UZ, P,
                    c2, chi, qmi, qme, clean_b, clean_e):
    """Axis fluxes and source for all nq states of V (18, nq), vectorized over q.

    Positivity is verified per species via a running minimum so the per-line
    loops stay branch-free; on failure the partially written outputs are
    discarded by the caller.
    """
    nq = V.shape[1]
    for k in range(2):
        off = 5 * k
        qm = qmi if k == 0 else qme
        rmin = 1.0e300
        pmin = 1.0e300
        for q in range(nq):
            rho = V[off, q]
            rmin = min(rmin, rho)
            inv = 1.0 / rho
            ux = V[off + 1, q] * inv
            uy = V[off + 2, q] * inv
            uz = V[off + 3, q] * inv
            p = (2.0 / 3.0) * (V[off + 4, q]
                               - 0.5 * (V[off + 1, q] * ux + V[off + 2, q] * uy
                                        + V[off + 3, q] * uz))
            pmin = min(pmin, p)
            UX[k, q] = ux
            UY[k, q] = uy
            UZ[k, q] = uz
            P[k, q] = p
        if not (rmin > 0.0):
            return BAD_RHO_I + 2 * k
        if not (pmin > 0.0):
            return BAD_P_I + 2 * k
        for q in range(nq):
            mnx = V[off + 1, q]
            mny = V[off + 2, q]
            engp = V[off + 4, q] + P[k, q]
            FX[off, q] = mnx
            FX[off + 1, q] = mnx * UX[k, q] + P[k, q]
            FX[off + 2, q] = mnx * UY[k, q]
            FX[off + 3, q] = mnx * UZ[k, q]
            FX[off + 4, q] = UX[k, q] * engp
            FY[off, q] = mny
            FY[off + 1, q] = mny * UX[k, q]
            FY[off + 2, q] = mny * UY[k, q] + P[k, q]
            FY[off + 3, q] = mny * UZ[k, q]
            FY[off + 4, q] = UY[k, q] * engp
            sig = qm * V[off, q]
            S[off, q] = 0.0
            S[off + 1, q] = sig * (V[13, q] + UY[k, q] * V[12, q] - UZ[k, q] * V[11, q])
            S[off + 2, q] = sig * (V[14, q] + UZ[k, q] * V[10, q] - UX[k, q] * V[12, q])
            S[off + 3, q] = sig * (V[15, q] + UX[k, q] * V[11, q] - UY[k, q] * V[10, q])
            S[off + 4, q] = sig * (UX[k, q] * V[13, q] + UY[k, q] * V[14, q]
                                   + UZ[k, q] * V[15, q])
    # F_B.n = n x E (+ chi psi n), F_E.n = -c^2 n x B (+ chi c^2 phi n)
    for q in range(nq):
        FX[10, q] = 0.0
        FX[11, q] = -V[15, q]
        FX[12, q] = V[14, q]
        FX[13, q] = 0.0
        FX[14, q] = c2 * V[12, q]
        FX[15, q] = -c2 * V[11, q]
        FY[10, q] = V[15, q]
        FY[11, q] = 0.0
        FY[12, q] = -V[13, q]
        FY[13, q] = -c2 * V[12, q]
        FY[14, q] = 0.0
        FY[15, q] = c2 * V[10, q]
        FX[16, q] = 0.0
        FY[16, q] = 0.0
        FX[17, q] = 0.0
        FY[17, q] = 0.0
        S[10, q] = 0.0
        S[11, q] = 0.0
        S[12, q] = 0.0
        S[13, q] = -c2 * (qmi * V[1, q] + qme * V[6, q])
        S[14, q] = -c2 * (qmi * V[2, q] + qme * V[7, q])
        S[15, q] = -c2 * (qmi * V[3, q] + qme * V[8, q])
        S[16, q] = 0.0
        S[17, q] = 0.0
    if clean_b:
        for q in range(nq):
            FX[10, q] += chi * V[16, q]
            FY[11, q] += chi * V[16, q]
            FX[16, q] = chi * c2 * V[10, q]
            FY[16, q] = chi * c2 * V[11, q]
    if clean_e:
        for q in range(nq):
            FX[13, q] += chi * c2 * V[17, q]
            FY[14, q] += chi * c2 * V[17, q]
            FX[17, q] = chi * V[13, q]
            FY[17, q] = chi * V[14, q]
            S[17, q] = chi * c2 * (qmi * V[0, q] + qme * V[5, q])
    return 0


@njit(cache=True, fastmath=FM_EXACT, inline="always")
def _flux_ws_block(V, n1, n2, F, SPD, UX, UY, UZ, P,
                   c, chi, qmi, qme, clean_b, clean_e):
    """Directional flux F(v).n and max signal speed for a block V (18, nq)."""
    nq = V.shape[1]
    c2 = c * c
    for k in range(2):
        off = 5 * k
        rmin = 1.0e300
        pmin = 1.0e300
        for q in range(nq):
            rho = V[off, q]
            rmin = min(rmin, rho)
            inv = 1.0 / rho
            ux = V[off + 1, q] * inv
            uy = V[off + 2, q] * inv
            uz = V[off + 3, q] * inv
            p = (2.0 / 3.0) * (V[off + 4, q]
                               - 0.5 * (V[off + 1, q] * ux + V[off + 2, q] * uy
                                        + V[off + 3, q] * uz))
            pmin = min(pmin, p)
            UX[k, q] = ux
            UY[k, q] = uy
            UZ[k, q] = uz
            P[k, q] = p
        if not (rmin > 0.0):
            return BAD_RHO_I + 2 * k
        if not (pmin > 0.0):
            return BAD_P_I + 2 * k
    for q in range(nq):
        SPD[q] = c * chi
    for k in range(2):
        off = 5 * k
        for q in range(nq):
            un = UX[k, q] * n1 + UY[k, q] * n2
            mn = V[off, q] * un
            p = P[k, q]
            F[off, q] = mn
            F[off + 1, q] = mn * UX[k, q] + p * n1
            F[off + 2, q] = mn * UY[k, q] + p * n2
            F[off + 3, q] = mn * UZ[k, q]
            F[off + 4, q] = un * (V[off + 4, q] + p)
            sp = abs(un) + np.sqrt(GAMMA * p / V[off, q])
            SPD[q] = max(SPD[q], sp)
    for q in range(nq):
        F[10, q] = n2 * V[15, q]
        F[11, q] = -n1 * V[15, q]
        F[12, q] = n1 * V[14, q] - n2 * V[13, q]
        F[13, q] = -c2 * n2 * V[12, q]
        F[14, q] = c2 * n1 * V[12, q]
        F[15, q] = -c2 * (n1 * V[11, q] - n2 * V[10, q])
        F[16, q] = 0.0
        F[17, q] = 0.0
    if clean_b:
        for q in range(nq):
            F[10, q] += chi * V[16, q] * n1
            F[11, q] += chi * V[16, q] * n2
            F[16, q] = chi * c2 * (V[10, q] * n1 + V[11, q] * n2)
    if clean_e:
        for q in range(nq):
            F[13, q] += chi * c2 * V[17, q] * n1
            F[14, q] += chi * c2 * V[17, q] * n2
            F[17, q] = chi * (V[13, q] * n1 + V[14, q] * n2)
    return 0


@njit(cache=True, fastmath=FM_EXACT, inline="never")
def _rusanov_block(vl, vr, n1, n2, fl, fr, sl, sr, UX, UY, UZ, P, out,
                   c, chi, qmi, qme, clean_b, clean_e):
    """Rusanov flux for all nqe points of an interface; blocks are (18, nqe)."""
    st = _flux_ws_block(vl, n1, n2, fl, sl, UX, UY, UZ, P,
                        c, chi, qmi, qme, clean_b, clean_e)
    if st != 0:
        return st
    st = _flux_ws_block(vr, n1, n2, fr, sr, UX, UY, UZ, P,
                        c, chi, qmi, qme, clean_b, clean_e)
    if st != 0:
        return st
    nq = vl.shape[1]
    for f in range(18):
        for q in range(nq):
            s = max(sl[q], sr[q])
            out[f, q] = 0.5 * (fl[f, q] + fr[f, q]) - 0.5 * s * (vr[f, q] - vl[f, q])
    return 0


@njit(cache=True, fastmath=FM)
def compute_traces(U, phie_all, T):
    """Edge traces; phie_all is (n_modes, 4*n_qe), T is (nx, ny, 18, 4*n_qe)."""
    nx, ny, nf, nm = U.shape
    nq4 = phie_all.shape[1]
    for i in range(nx):
        for j in range(ny):
            ucell = U[i, j]
            tcell = T[i, j]
            for f in range(nf):
                trow = tcell[f]
                urow = ucell[f]
                for q in range(nq4):
                    trow[q] = urow[0] * phie_all[0, q]
                for m in range(1, nm):
                    c = urow[m]
                    for q in range(nq4):
                        trow[q] += c * phie_all[m, q]


@njit(cache=True, fastmath=FM)
def interface_flux_x(T, FXI, bc_w, bc_e, sgn_w, sgn_e, nqe,
                     c, chi, qmi, qme, clean_b, clean_e, status):
    """Rusanov fluxes with +x normal on all vertical interface planes.

    bc codes: 0 periodic, 1 mirror/wall (sign table applied to the interior
    trace).  Side packing in T: west block cols [0, nqe), east [nqe, 2 nqe).
    """
    nx, ny = T.shape[0], T.shape[1]
    nf = T.shape[2]
    fl = np.empty((nf, nqe))
    fr = np.empty((nf, nqe))
    sl = np.empty(nqe)
    sr = np.empty(nqe)
    ux = np.empty((2, nqe))
    uy = np.empty((2, nqe))
    uz = np.empty((2, nqe))
    pp = np.empty((2, nqe))
    ghost = np.empty((nf, nqe))
    for j in range(ny):
        for ix in range(1, nx):
            vl = T[ix - 1, j, :, nqe : 2 * nqe]
            vr = T[ix, j, :, 0:nqe]
            st = _rusanov_block(vl, vr, 1.0, 0.0, fl, fr, sl, sr, ux, uy, uz, pp,
                                FXI[ix, j], c, chi, qmi, qme, clean_b, clean_e)
            if st != 0:
                status[0] = 1
                status[1] = ix
                status[2] = j
                status[3] = st
                return
        # west boundary plane
        vr = T[0, j, :, 0:nqe]
        if bc_w == 0:
            vl = T[nx - 1, j, :, nqe : 2 * nqe]
        else:
            for f in range(nf):
                for q in range(nqe):
                    ghost[f, q] = sgn_w[f] * vr[f, q]
            vl = ghost
        st = _rusanov_block(vl, vr, 1.0, 0.0, fl, fr, sl, sr, ux, uy, uz, pp,
                            FXI[0, j], c, chi, qmi, qme, clean_b, clean_e)
        if st != 0:
            status[0] = 1
            status[1] = 0
            status[2] = j
            status[3] = st
            return
        # east boundary plane
        vl = T[nx - 1, j, :, nqe : 2 * nqe]
        if bc_e == 0:
            vr = T[0, j, :, 0:nqe]
        else:
            for f in range(nf):
                for q in range(nqe):
                    ghost[f, q] = sgn_e[f] * vl[f, q]
            vr = ghost
        st = _rusanov_block(vl, vr, 1.0, 0.0, fl, fr, sl, sr, ux, uy, uz, pp,
                            FXI[nx, j], c, chi, qmi, qme, clean_b, clean_e)
        if st != 0:
            status[0] = 1
            status[1] = nx
            status[2] = j
            status[3] = st
            return


@njit(cache=True, fastmath=FM)
def interface_flux_y(T, FYI, bc_s, bc_n, sgn_s, sgn_n, nqe,
                     c, chi, qmi, qme, clean_b, clean_e, status):
    """Rusanov fluxes with +y normal; south block cols [2 nqe, 3 nqe), north [3 nqe, 4 nqe)."""
    nx, ny = T.shape[0], T.shape[1]
    nf = T.shape[2]
    fl = np.empty((nf, nqe))
    fr = np.empty((nf, nqe))
    sl = np.empty(nqe)
    sr = np.empty(nqe)
    ux = np.empty((2, nqe))
    uy = np.empty((2, nqe))
    uz = np.empty((2, nqe))
    pp = np.empty((2, nqe))
    ghost = np.empty((nf, nqe))
    s0, n0 = 2 * nqe, 3 * nqe
    for i in range(nx):
        for jy in range(1, ny):
            vl = T[i, jy - 1, :, n0 : n0 + nqe]
            vr = T[i, jy, :, s0 : s0 + nqe]
            st = _rusanov_block(vl, vr, 0.0, 1.0, fl, fr, sl, sr, ux, uy, uz, pp,
                                FYI[i, jy], c, chi, qmi, qme, clean_b, clean_e)
            if st != 0:
                status[0] = 1
                status[1] = i
                status[2] = jy
                status[3] = st
                return
        vr = T[i, 0, :, s0 : s0 + nqe]
        if bc_s == 0:
            vl = T[i, ny - 1, :, n0 : n0 + nqe]
        else:
            for f in range(nf):
                for q in range(nqe):
                    ghost[f, q] = sgn_s[f] * vr[f, q]
            vl = ghost
        st = _rusanov_block(vl, vr, 0.0, 1.0, fl, fr, sl, sr, ux, uy, uz, pp,
                            FYI[i, 0], c, chi, qmi, qme, clean_b, clean_e)
        if st != 0:
            status[0] = 1
            status[1] = i
            status[2] = 0
            status[3] = st
            return
        vl = T[i, ny - 1, :, n0 : n0 + nqe]
        if bc_n == 0:
            vr = T[i, 0, :, s0 : s0 + nqe]
        else:
            for f in range(nf):
                for q in range(nqe):
                    ghost[f, q] = sgn_n[f] * vl[f, q]
            vr = ghost
        st = _rusanov_block(vl, vr, 0.0, 1.0, fl, fr, sl, sr, ux, uy, uz, pp,
                            FYI[i, ny], c, chi, qmi, qme, clean_b, clean_e)
        if st != 0:
            status[0] = 1
            status[1] = i
            status[2] = ny
            status[3] = st
            return


@njit(cache=True, fastmath=FM)
def volume_source_lift(U, FXI, FYI, phi2, wdxi2, wdeta2, wphi2, wphie2,
                       dx, dy, c, chi, qmi, qme, clean_b, clean_e, R, status):
    """Volume + source quadrature and interface-flux lift, per cell per mode.

    Mode tables are mode-major over points: phi2 (nm, nqv) unweighted for
    evaluation, wdxi2/wdeta2/wphi2 (nm, nqv) carrying quadrature weights,
    wphie2 (4, nm, nqe) weighted edge tables.
    """
    nx, ny, nf, nm = U.shape
    nqv = phi2.shape[1]
    nqe = wphie2.shape[2]
    c2 = c * c
    sx = 2.0 / dx
    sy = 2.0 / dy
    V = np.empty((nf, nqv))
    FXQ = np.empty((nf, nqv))
    FYQ = np.empty((nf, nqv))
    SQ = np.empty((nf, nqv))
    ux = np.empty((2, nqv))
    uy = np.empty((2, nqv))
    uz = np.empty((2, nqv))
    pp = np.empty((2, nqv))
    for i in range(nx):
        for j in range(ny):
            ucell = U[i, j]
            for f in range(nf):
                vrow = V[f]
                urow = ucell[f]
                for q in range(nqv):
                    vrow[q] = urow[0] * phi2[0, q]
                for m in range(1, nm):
                    cm = urow[m]
                    for q in range(nqv):
                        vrow[q] += cm * phi2[m, q]
            st = _flux_src_block(V, FXQ, FYQ, SQ, ux, uy, uz, pp,
                                 c2, chi, qmi, qme, clean_b, clean_e)
            if st != 0:
                status[0] = 1
                status[1] = i
                status[2] = j
                status[3] = st
                return
            rc = R[i, j]
            for f in range(nf):
                fxrow = FXQ[f]
                fyrow = FYQ[f]
                srow = SQ[f]
                fw = FXI[i, j, f]
                fe = FXI[i + 1, j, f]
                fs = FYI[i, j, f]
                fn = FYI[i, j + 1, f]
                for m in range(nm):
                    acc = 0.0
                    for q in range(nqv):
                        acc += (sx * fxrow[q] * wdxi2[m, q]
                                + sy * fyrow[q] * wdeta2[m, q]
                                + srow[q] * wphi2[m, q])
                    for q in range(nqe):
                        acc += (sx * (fw[q] * wphie2[0, m, q] - fe[q] * wphie2[1, m, q])
                                + sy * (fs[q] * wphie2[2, m, q] - fn[q] * wphie2[3, m, q]))
                    rc[f, m] = acc


@njit(cache=True, fastmath=FM)
def stage_combine(out, A, ca, B, cb, R, cr):
    """out = ca*A + cb*B + cr*R over full coefficient arrays."""
    a = A.reshape(-1)
    b = B.reshape(-1)
    r = R.reshape(-1)
    o = out.reshape(-1)
    for n in range(o.size):
        o[n] = ca * a[n] + cb * b[n] + cr * r[n]


@njit(cache=True)
def enforce_admissible_moments(U, phi_pts, mode_x, mode_y, counter):
    """Escalated flattening of cells whose reconstruction leaves the
    admissible set.

    A trace or quadrature value with non-positive density or pressure is an
    oscillation by definition, so the offending cell's fluid fields drop
    their modes above linear; if the linear reconstruction is still
    inadmissible the cell falls back to its (separately checked) means.
    Cell means are never modified.  ``phi_pts`` holds the mode values at
    every point that the solver will evaluate (volume plus all edge
    quadrature points), shape (n_modes, n_pts).  ``counter[0]`` counts
    escalated cells.
    """
    nx, ny, nf, nm = U.shape
    npts = phi_pts.shape[1]
    vals = np.empty((5, npts))
    nesc = 0
    for i in range(nx):
        for j in range(ny):
            cell = U[i, j]
            for stage in range(3):
                ok = True
                for k in range(2):
                    off = 5 * k
                    for f in range(5):
                        row = vals[f]
                        crow = cell[off + f]
                        for q in range(npts):
                            row[q] = crow[0] * phi_pts[0, q]
                        for m in range(1, nm):
                            cm = crow[m]
                            for q in range(npts):
                                row[q] += cm * phi_pts[m, q]
                    worst = 1.0e300
                    for q in range(npts):
                        rho = vals[0, q]
                        worst = min(worst, rho)
                        pr = vals[4, q] - 0.5 * (vals[1, q] * vals[1, q]
                                                 + vals[2, q] * vals[2, q]
                                                 + vals[3, q] * vals[3, q]) / rho
                        worst = min(worst, pr)
                    if not (worst > 0.0):
                        ok = False
                        break
                if ok:
                    if stage > 0:
                        nesc += 1
                    break
                if stage == 0:
                    # drop the fluid fields' modes above linear
                    for f in range(10):
                        kx = cell[f, mode_x]
                        ky = cell[f, mode_y]
                        for m in range(1, nm):
                            cell[f, m] = 0.0
                        cell[f, mode_x] = kx
                        cell[f, mode_y] = ky
                elif stage == 1:
                    for f in range(10):
                        for m in range(1, nm):
                            cell[f, m] = 0.0
                else:
                    nesc += 1  # means themselves inadmissible; mean check aborts
    counter[0] += nesc


@njit(cache=True)
def check_mean_state(U, status):
    """Positivity of cell-mean density and mean-state pressure per species."""
    nx, ny = U.shape[0], U.shape[1]
    for i in range(nx):
        for j in range(ny):
            for k in range(2):
                off = 5 * k
                rho = 0.5 * U[i, j, off, 0]
                if not (rho > 0.0):
                    status[0] = 1
                    status[1] = i
                    status[2] = j
                    status[3] = BAD_RHO_I + 2 * k
                    return
                mx = 0.5 * U[i, j, off + 1, 0]
                my = 0.5 * U[i, j, off + 2, 0]
                mz = 0.5 * U[i, j, off + 3, 0]
                eng = 0.5 * U[i, j, off + 4, 0]
                p = (2.0 / 3.0) * (eng - 0.5 * (mx * mx + my * my + mz * mz) / rho)
                if not (p > 0.0):
                    status[0] = 1
                    status[1] = i
                    status[2] = j
                    status[3] = BAD_P_I + 2 * k
                    return


@njit(cache=True, inline="always")
def _minmod3(a, b, c):
    """Minmod returning the first argument itself when it wins."""
    if a > 0.0:
        if b > 0.0 and c > 0.0:
            m = b if b < c else c
            return a if a <= m else m
        return 0.0
    if a < 0.0:
        if b < 0.0 and c < 0.0:
            m = b if b > c else c
            return a if a >= m else m
        return 0.0
    return 0.0


@njit(cache=True, inline="always")
def _minmod2(a, b):
    if a > 0.0:
        if b > 0.0:
            return a if a <= b else b
        return 0.0
    if a < 0.0:
        if b < 0.0:
            return a if a >= b else b
        return 0.0
    return 0.0


@njit(cache=True)
def apply_moment_limiter(U, alpha, nf_limit, bc_w, bc_e, bc_s, bc_n, counter):
    """Componentwise hierarchical moment limiter, in place; means untouched.

    Mode (a, b) is minmod-compared against the scaled neighbor differences
    of modes (a-1, b) in x and (a, b-1) in y; where the comparison alters
    it (a new extremum at that moment level) the coefficient is replaced,
    clipping any mode down to zero when the differences disagree in sign.
    Modes are visited from the highest total degree downward and limiting
    stops at the first level left entirely unchanged, so smooth structure
    is never touched.  ``alpha[m] = 1/sqrt(4 m^2 - 1)`` makes the scaled
    differences of smooth data about twice the expected coefficient.

    At non-periodic boundaries the comparison is one-sided (ghost data
    encode boundary conditions, not solution structure; a two-sided mirror
    comparison would flag an extremum in every boundary-adjacent cell).
    ``counter[0]`` accumulates the number of limited (cell, field) pairs.
    """
    nx, ny, nf, nm = U.shape
    k1 = alpha.shape[0]
    korder = k1 - 1
    for i in range(nx):
        for j in range(ny):
            have_xm = (i > 0) or (bc_w == 0)
            have_xp = (i < nx - 1) or (bc_e == 0)
            have_ym = (j > 0) or (bc_s == 0)
            have_yp = (j < ny - 1) or (bc_n == 0)
            ie = i + 1 if i < nx - 1 else 0
            iw = i - 1 if i > 0 else nx - 1
            jn = j + 1 if j < ny - 1 else 0
            js = j - 1 if j > 0 else ny - 1
            for f in range(nf_limit):
                cfs = U[i, j, f]
                touched = False
                for lev in range(2 * korder, 0, -1):
                    changed = False
                    a0 = lev - korder if lev > korder else 0
                    for a in range(a0, min(lev, korder) + 1):
                        b = lev - a
                        m = a * k1 + b
                        c = cfs[m]
                        r = c
                        narg = 0
                        if a >= 1:
                            ml = (a - 1) * k1 + b
                            if have_xp:
                                r = _minmod2(r, alpha[a] * (U[ie, j, f, ml] - cfs[ml]))
                                narg += 1
                            if have_xm:
                                r = _minmod2(r, alpha[a] * (cfs[ml] - U[iw, j, f, ml]))
                                narg += 1
                        if b >= 1:
                            ml = a * k1 + (b - 1)
                            if have_yp:
                                r = _minmod2(r, alpha[b] * (U[i, jn, f, ml] - cfs[ml]))
                                narg += 1
                            if have_ym:
                                r = _minmod2(r, alpha[b] * (cfs[ml] - U[i, js, f, ml]))
                                narg += 1
                        if narg > 0 and r != c:
                            cfs[m] = r
                            changed = True
                            touched = True
                    if not changed:
                        break
                if touched:
                    counter[0] += 1

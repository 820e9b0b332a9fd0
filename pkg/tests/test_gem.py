"""Harris equilibrium, perturbation, and preset tests."""

import numpy as np
import pytest

from gemrec import gem
from gemrec.model import cons_to_prim, prim_to_cons, physical_flux, source
from gemrec.grid import SIDE_SOUTH, SIDE_WEST, BCKind, ghost_signs


class TestPresets:
    def test_table(self):
        c = gem.preset("gem-25-5")
        assert c.mass_ratio == 25.0 and c.temp_ratio == 5.0
        c = gem.preset("gem-pair-5")
        assert c.mass_ratio == 1.0 and c.temp_ratio == 5.0
        c = gem.preset("gem-pair-1")
        assert c.mass_ratio == 1.0 and c.temp_ratio == 1.0

    def test_unknown_rejected(self):
        with pytest.raises(ValueError, match="unknown preset"):
            gem.preset("gem-4-2")

    def test_shared_constants(self):
        c = gem.preset("gem-25-5")
        assert c.lam == 0.5 and c.b0 == 1.0 and c.n0 == 1.0 and c.psi0 == 0.1
        assert c.lx == pytest.approx(8 * np.pi) and c.ly == pytest.approx(4 * np.pi)
        assert c.light_speed == 10.0 and c.chi == 1.05
        assert c.clean_b and not c.clean_e

    def test_masses_sum_to_one(self):
        for name in gem.PRESET_NAMES:
            c = gem.preset(name)
            assert c.mass_i + c.mass_e == pytest.approx(1.0)
        assert gem.preset("gem-25-5").mass_i == pytest.approx(25 / 26)


class TestEquilibrium:
    def test_center_density(self):
        c = gem.preset("gem-pair-1")
        w = gem.equilibrium(0.0, 0.0, c)
        n = w.rho_i / c.mass_i
        assert n == pytest.approx(1.2)

    def test_center_pressure_and_balance(self):
        c = gem.preset("gem-pair-1")
        w = gem.equilibrium(0.0, 0.0, c)
        assert w.p_i + w.p_e == pytest.approx(0.6)
        # total pressure p + B^2/2 is 0.6 at every height
        y = np.linspace(-2 * np.pi, 2 * np.pi, 101)
        w = gem.equilibrium(np.zeros_like(y), y, c)
        total = w.p_i + w.p_e + 0.5 * w.B[..., 0] ** 2
        np.testing.assert_allclose(total, 0.6, rtol=1e-12)

    def test_drift_velocity_preset_1(self):
        c = gem.preset("gem-25-5")
        w = gem.equilibrium(0.0, 0.0, c)
        assert w.u_i[..., 2] == pytest.approx(-25.0 / 18.0)

    def test_pair_drifts_opposite(self):
        c = gem.preset("gem-pair-1")
        y = np.linspace(-5, 5, 41)
        w = gem.equilibrium(np.zeros_like(y), y, c)
        np.testing.assert_allclose(w.u_i[..., 2], -w.u_e[..., 2], rtol=1e-14)

    def test_quasineutral(self):
        c = gem.preset("gem-25-5")
        y = np.linspace(-3, 3, 31)
        w = gem.equilibrium(np.zeros_like(y), y, c)
        n_i = w.rho_i / c.mass_i
        n_e = w.rho_e / c.mass_e
        np.testing.assert_allclose(n_i, n_e, rtol=1e-14)

    @pytest.mark.parametrize("name", gem.PRESET_NAMES)
    def test_momentum_balance(self, name):
        # per species: sigma_s u_s x B = grad p_s, checked by finite differences
        c = gem.preset(name)
        h = 1e-6
        for y0 in (-1.3, -0.2, 0.0, 0.4, 2.0):
            w = gem.equilibrium(0.0, y0, c)
            wp = gem.equilibrium(0.0, y0 + h, c)
            wm = gem.equilibrium(0.0, y0 - h, c)
            for rho, u, p_hi, p_lo, q, m in (
                (w.rho_i, w.u_i, wp.p_i, wm.p_i, 1.0, c.mass_i),
                (w.rho_e, w.u_e, wp.p_e, wm.p_e, -1.0, c.mass_e),
            ):
                sigma = q * rho / m
                force_y = sigma * (u[..., 2] * w.B[..., 0])  # (u x B)_y = u_z B_x
                dp_dy = (p_hi - p_lo) / (2 * h)
                assert force_y == pytest.approx(dp_dy, rel=1e-6, abs=1e-9)

    def test_ampere_balance(self):
        # curl B = J at equilibrium (steady Ampere with E = 0)
        c = gem.preset("gem-pair-5")
        h = 1e-6
        for y0 in (-0.7, 0.0, 1.1):
            w = gem.equilibrium(0.0, y0, c)
            bp = gem.equilibrium(0.0, y0 + h, c).B[..., 0]
            bm = gem.equilibrium(0.0, y0 - h, c).B[..., 0]
            curl_z = -(bp - bm) / (2 * h)
            n = w.rho_i / c.mass_i
            jz = n * w.u_i[..., 2] - n * w.u_e[..., 2]
            assert curl_z == pytest.approx(jz, rel=1e-6)

    def test_lorentz_source_balances_pressure_gradient(self):
        # the conserved-variable source at the equilibrium equals grad p_s
        c = gem.preset("gem-25-5")
        params = c.model_params()
        h = 1e-6
        y0 = 0.35
        u = prim_to_cons(gem.equilibrium(0.0, y0, c), params)
        s = source(u, params)
        dp_i = (gem.equilibrium(0.0, y0 + h, c).p_i
                - gem.equilibrium(0.0, y0 - h, c).p_i) / (2 * h)
        assert s[2] == pytest.approx(dp_i, rel=1e-6)


class TestPerturbation:
    def test_zero_at_origin(self):
        c = gem.preset("gem-pair-1")
        np.testing.assert_allclose(gem.perturbation(0.0, 0.0, c), np.zeros(3), atol=1e-16)

    def test_amplitude_example(self):
        c = gem.preset("gem-pair-1")
        db = gem.perturbation(c.lx / 4, 0.0, c)
        assert db[1] == pytest.approx(0.1 * 2 * np.pi / c.lx)
        assert db[1] == pytest.approx(0.025)

    def test_divergence_free(self):
        c = gem.preset("gem-pair-1")
        h = 1e-6
        rng = np.random.default_rng(5)
        for _ in range(20):
            x0, y0 = rng.uniform(-10, 10), rng.uniform(-5, 5)
            ddx = (gem.perturbation(x0 + h, y0, c)[0]
                   - gem.perturbation(x0 - h, y0, c)[0]) / (2 * h)
            ddy = (gem.perturbation(x0, y0 + h, c)[1]
                   - gem.perturbation(x0, y0 - h, c)[1]) / (2 * h)
            assert ddx + ddy == pytest.approx(0.0, abs=1e-8)

    def test_matches_flux_function(self):
        c = gem.preset("gem-pair-1")
        h = 1e-6
        x0, y0 = 2.3, -0.8
        w = gem.initial_state(x0, y0, c)
        dpsi_dy = (gem.flux_function(x0, y0 + h, c) - gem.flux_function(x0, y0 - h, c)) / (2 * h)
        dpsi_dx = (gem.flux_function(x0 + h, y0, c) - gem.flux_function(x0 - h, y0, c)) / (2 * h)
        assert w.B[..., 0] == pytest.approx(dpsi_dy, rel=1e-7)
        assert w.B[..., 1] == pytest.approx(-dpsi_dx, rel=1e-7, abs=1e-9)


class TestInitialState:
    def test_composition(self):
        c = gem.preset("gem-pair-1")
        x, y = 1.7, 0.9
        w_eq = gem.equilibrium(x, y, c)
        w = gem.initial_state(x, y, c)
        np.testing.assert_allclose(w.B, w_eq.B + gem.perturbation(x, y, c), rtol=1e-14)
        np.testing.assert_allclose(w.rho_i, w_eq.rho_i)
        np.testing.assert_allclose(w.p_e, w_eq.p_e)

    def test_parity_symmetry(self):
        # conserved initial state obeys the quarter-domain reflection parities
        c = gem.preset("gem-25-5")
        params = c.model_params()
        ic = gem.initial_conserved(c)
        rng = np.random.default_rng(6)
        sx = ghost_signs(SIDE_WEST, BCKind.SYMMETRY)
        sy = ghost_signs(SIDE_SOUTH, BCKind.SYMMETRY)
        for _ in range(20):
            x, y = rng.uniform(0.1, 10), rng.uniform(0.1, 5)
            u = ic(np.array(x), np.array(y))
            np.testing.assert_allclose(ic(np.array(-x), np.array(y)), u * sx,
                                       rtol=1e-13, atol=1e-15)
            np.testing.assert_allclose(ic(np.array(x), np.array(-y)), u * sy,
                                       rtol=1e-13, atol=1e-15)

    def test_round_trip_at_sheet_center(self):
        c = gem.preset("gem-pair-5")
        params = c.model_params()
        w = gem.equilibrium(0.0, 0.0, c)
        u = prim_to_cons(w, params)
        assert u[0] == pytest.approx(0.6)
        back = prim_to_cons(cons_to_prim(u, params), params)
        np.testing.assert_allclose(back, u, rtol=1e-14, atol=1e-16)

    def test_validation(self):
        with pytest.raises(ValueError):
            gem.GemConfig(lam=-0.5)
        with pytest.raises(ValueError):
            gem.GemConfig(mass_ratio=0.0)

import csv
import io

import numpy as np
import pytest

from bidisc import levelset as L
from bidisc import poly as P
from bidisc import rif
from bidisc.errors import InvalidInput, RefineResolution


class TestDetectLines:
    def test_kappa_both_orientations(self, kappa):
        feats = L.detect_lines(kappa)
        v = [f for f in feats if f.orientation == "v"]
        h = [f for f in feats if f.orientation == "h"]
        assert len(v) == 1 and len(h) == 1
        for f in v + h:
            assert abs(f.tau - 1.0) <= 1e-10
            assert abs(f.alpha + 1.0) <= 1e-8

    def test_amy_vertical_only(self, amy):
        feats = L.detect_lines(amy)
        assert [f.orientation for f in feats] == ["v"]
        assert abs(feats[0].tau - 1.0) <= 1e-10
        assert abs(feats[0].alpha + 1.0) <= 1e-8

    def test_generic_rif_none(self, generic_rif):
        assert L.detect_lines(generic_rif) == []

    def test_coordinate_symbol_everywhere(self):
        feats = L.detect_lines(rif.parse_symbol("z1"))
        assert len(feats) == 1 and feats[0].everywhere
        assert feats[0].orientation == "v"

    def test_mixed_smooth_none(self, psi_mixed):
        assert L.detect_lines(psi_mixed) == []

    def test_scan_doubling_stable(self, amy):
        a = L.detect_lines(amy, scan=2048)
        b = L.detect_lines(amy, scan=4096)
        assert len(a) == len(b)
        for fa, fb in zip(a, b):
            assert abs(fa.tau - fb.tau) <= 1e-10

    def test_prefactor_rotates_alpha(self, kappa):
        feats = L.detect_lines(rif.Symbol(kappa, prefactor=-1.0))
        assert all(abs(f.alpha - 1.0) <= 1e-8 for f in feats)


class TestTrace:
    def test_kappa_level_minus_one_is_two_lines(self, kappa):
        ls = L.trace_level_set(kappa, -1.0, 512)
        assert ls.branches == []
        assert len(ls.vertical_lines) == 1
        assert len(ls.horizontal_lines) == 1
        assert abs(ls.vertical_lines[0] - 1.0) <= 1e-10
        assert abs(ls.horizontal_lines[0] - 1.0) <= 1e-10

    def test_kappa_generic_value_single_branch(self, kappa):
        ls = L.trace_level_set(kappa, 1j, 4096)
        assert len(ls.branches) == 1
        assert ls.vertical_lines == [] and ls.horizontal_lines == []
        # the slice at z1 = -1 solves to z2 = 0.6 - 0.8i
        b = ls.branches[0]
        assert abs(b.value_at(np.pi) - (0.6 - 0.8j)) <= 2e-5

    def test_exact_point_via_anchored_grid(self, kappa):
        # anchor away from -1 and check the traced root against the slice
        ls = L.trace_level_set(kappa, 1j, 2048, tau0=np.exp(2.5j))
        b = ls.branches[0]
        q = kappa.num - 1j * kappa.den
        k = int(np.argmin(np.abs(np.exp(1j * b.thetas) + 1.0)))
        root = P.roots(P.slice_z1(q, complex(np.exp(1j * b.thetas[k]))))[0]
        assert abs(b.values[k] - root) <= 1e-10

    def test_amy_level_minus_one(self, amy):
        ls = L.trace_level_set(amy, -1.0, 1024)
        assert len(ls.vertical_lines) == 1
        assert ls.horizontal_lines == []
        assert len(ls.branches) == 1
        b = ls.branches[0]
        assert np.max(np.abs(b.values - np.exp(-1j * b.thetas))) <= 1e-9

    def test_residual_invariant(self, kappa, amy):
        for phi, alpha in ((kappa, 1j), (amy, -1.0)):
            ls = L.trace_level_set(phi, alpha, 512)
            for b in ls.branches:
                assert b.max_residual <= 1e-8 * max(ls.q_scale, 1.0)
                assert np.max(np.abs(np.abs(b.values) - 1.0)) <= 1e-8

    def test_branch_count_bounded_by_z2_degree(self, kappa, amy):
        for phi in (kappa, amy):
            ls = L.trace_level_set(phi, np.exp(0.4j), 512)
            assert len(ls.branches) <= phi.bidegree[1]

    def test_resolution_doubling_consistent(self, kappa):
        # The doubled trace must continue the same root family: at each
        # coarse angle, the exact slice root nearest the fine branch agrees
        # with the coarse sample (linear interpolation itself is only
        # curvature-accurate, so it is not the oracle).
        coarse = L.trace_level_set(kappa, 1j, 1024)
        fine = L.trace_level_set(kappa, 1j, 2048)
        b_c, b_f = coarse.branches[0], fine.branches[0]
        q = kappa.num - 1j * kappa.den
        for th, g in zip(b_c.thetas[::37], b_c.values[::37]):
            rts = P.roots(P.slice_z1(q, complex(np.exp(1j * th))))
            nearest = rts[np.argmin(np.abs(rts - b_f.value_at(float(th))))]
            assert abs(nearest - g) <= 1e-6

    def test_anchor_excluded(self, kappa):
        ls = L.trace_level_set(kappa, 1j, 256, tau0=-1.0)
        assert np.min(np.abs(np.exp(1j * ls.branches[0].thetas) + 1.0)) > 1e-4

    def test_nonunimodular_alpha_rejected(self, kappa):
        with pytest.raises(InvalidInput):
            L.trace_level_set(kappa, 0.5, 512)

    def test_low_resolution_rejected(self, kappa):
        with pytest.raises(InvalidInput):
            L.trace_level_set(kappa, 1j, 32)

    def test_symbol_prefactor_rebases_value(self, kappa):
        # level set of -kappa at +1 equals level set of kappa at -1
        ls = L.trace_level_set(rif.Symbol(kappa, prefactor=-1.0), 1.0, 512)
        assert len(ls.vertical_lines) == 1 and len(ls.horizontal_lines) == 1
        assert abs(ls.base_alpha + 1.0) <= 1e-12

    def test_smooth_symbol_isolated_contact_drops_tracks(self, psi_mixed):
        # the torus level set of a generic smooth symbol is a point, not a graph
        ls = L.trace_level_set(psi_mixed, 1.0, 512)
        assert ls.branches == []


class TestBranchTangent:
    def test_antidiagonal_slope(self, amy):
        ls = L.trace_level_set(amy, -1.0, 2048)
        for theta in (0.7, 2.0, 4.4):
            slope, err = L.branch_tangent(ls.branches[0], theta)
            assert abs(slope + 1.0) <= 1e-6
            assert err <= 1e-6

    def test_constant_branch_zero_slope(self):
        thetas = np.linspace(0, 2 * np.pi, 512, endpoint=False)
        b = L.Branch(alpha=1.0, thetas=thetas, values=np.ones(512, dtype=complex))
        slope, _ = L.branch_tangent(b, 1.0)
        assert abs(slope) <= 1e-12

    def test_matches_implicit_oracle(self, kappa):
        # d(arg g)/d theta from implicit differentiation of the level
        # equation; the anchor is rotated so theta = pi is interior.
        alpha = 1j
        ls = L.trace_level_set(kappa, alpha, 4096, tau0=np.exp(2.0j))
        b = ls.branches[0]
        # The estimator works at the grid sample nearest the request, so the
        # oracle is evaluated at that exact sample.
        k = int(np.argmin(np.abs(b.thetas - np.pi)))
        slope, err = L.branch_tangent(b, float(b.thetas[k]))
        q = kappa.num - alpha * kappa.den
        z1 = complex(np.exp(1j * b.thetas[k]))
        g = complex(b.values[k])
        dq1 = complex(q.partial("z1")(z1, g))
        dq2 = complex(q.partial("z2")(z1, g))
        gprime = -dq1 * 1j * z1 / dq2
        oracle = (gprime / g).imag
        assert abs(slope - oracle) <= max(1e-8, 3 * err)

    def test_too_short_branch(self):
        thetas = np.linspace(0, 1, 4)
        b = L.Branch(alpha=1.0, thetas=thetas, values=np.ones(4, dtype=complex))
        with pytest.raises(RefineResolution):
            L.branch_tangent(b, 0.5)


class TestCSV:
    def test_contract(self, kappa, amy):
        ls = L.trace_level_set(kappa, -1.0, 512)
        rows = list(csv.reader(io.StringIO(ls.to_csv())))
        assert rows[0] == ["branch_id", "theta", "re_g", "im_g"]
        kinds = [r[0] for r in rows[1:]]
        assert any(k.startswith("VLINE:") for k in kinds)
        assert any(k.startswith("HLINE:") for k in kinds)

        ls2 = L.trace_level_set(amy, -1.0, 256)
        rows2 = list(csv.reader(io.StringIO(ls2.to_csv())))
        branch_rows = [r for r in rows2[1:] if not r[0].startswith(("VLINE", "HLINE"))]
        assert len(branch_rows) == 256
        theta = float(branch_rows[5][1])
        g = complex(float(branch_rows[5][2]), float(branch_rows[5][3]))
        assert abs(g - np.exp(-1j * theta)) <= 1e-9

import json

import numpy as np
import pytest

from bidisc import poly as P
from bidisc import rif
from bidisc.errors import (DegreeGuard, InvalidInput, NearPole,
                           StabilityViolation)

from conftest import random_interior_points, random_torus_points


class TestMakeRif:
    def test_kappa_closed_form(self, kappa):
        z1, z2 = random_interior_points(500, seed=1)
        ours = kappa.eval_batch(z1, z2)
        ref = (2 * z1 * z2 - z1 - z2) / (2 - z1 - z2)
        assert np.max(np.abs(ours - ref)) <= 1e-14

    def test_constant_degenerate_but_legal(self):
        one = rif.make_rif(P.BivariatePolynomial([[1.0]]))
        assert one.bidegree == (0, 0)
        assert one(0.3, -0.2j) == 1.0 + 0.0j
        assert one.singularities == []

    def test_unstable_rejected(self):
        with pytest.raises(StabilityViolation):
            rif.make_rif(P.BivariatePolynomial([[-0.5], [1.0]]))


class TestEval:
    def test_at_origin(self, kappa):
        assert kappa(0.0, 0.0) == 0.0

    def test_diagonal_identity(self, kappa):
        # kappa(t, t) = -t
        for t in np.linspace(-0.9, 0.9, 7):
            assert abs(kappa(t, t) + t) <= 1e-14

    def test_amy_is_composition(self, kappa, amy):
        z1, z2 = random_interior_points(1000, seed=2)
        inner = kappa.eval_batch(z1, z2)
        ref = kappa.eval_batch(z1, inner)
        assert np.max(np.abs(amy.eval_batch(z1, z2) - ref)) <= 1e-12

    def test_near_pole(self, kappa):
        with pytest.raises(NearPole):
            rif.rif_eval(kappa, (1.0, 1.0))


class TestSingularities:
    def test_kappa(self, kappa):
        sings = kappa.singularities
        assert len(sings) == 1
        w = sings[0]
        assert abs(w.location[0] - 1.0) <= 1e-9
        assert abs(w.location[1] - 1.0) <= 1e-9
        assert abs(w.nontangential_value + 1.0) <= 1e-8
        assert w.residual <= 1e-8

    def test_amy(self, amy):
        sings = amy.singularities
        assert len(sings) == 1
        assert abs(sings[0].location[0] - 1.0) <= 1e-7
        assert abs(sings[0].location[1] - 1.0) <= 1e-7
        assert abs(sings[0].nontangential_value + 1.0) <= 1e-6

    def test_generic_has_none(self, generic_rif):
        assert generic_rif.singularities == []

    def test_detection_stable_under_grid_doubling(self, amy):
        coarse = rif.find_singularities(amy, grid=1024)
        fine = rif.find_singularities(amy, grid=2048)
        assert len(coarse) == len(fine)
        for a, b in zip(coarse, fine):
            assert abs(a.location[0] - b.location[0]) <= 1e-6
            assert abs(a.location[1] - b.location[1]) <= 1e-6

    def test_two_singularities(self):
        # product of two rotated denominators: zeros at (1,1) and (-1,-1)
        import warnings
        p1 = P.BivariatePolynomial([[2, -1], [-1, 0]])
        p2 = P.BivariatePolynomial([[2, 1], [1, 0]])
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            phi = rif.make_rif(p1 * p2)
            sings = phi.singularities
        assert len(sings) == 2
        locs = sorted((s.location[0].real, s.location[1].real) for s in sings)
        assert abs(locs[0][0] + 1) <= 1e-9 and abs(locs[0][1] + 1) <= 1e-9
        assert abs(locs[1][0] - 1) <= 1e-9 and abs(locs[1][1] - 1) <= 1e-9
        for s in sings:
            assert abs(s.nontangential_value + 1.0) <= 1e-8

    def test_deep_iterates_located_precisely(self):
        import warnings
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            for n in (4, 6):
                sg = rif.kappa_iterate(n).singularities
                assert len(sg) == 1
                assert abs(sg[0].location[0] - 1.0) <= 1e-8
                assert abs(sg[0].location[1] - 1.0) <= 1e-8


class TestNontangentialValue:
    def test_kappa_at_singularity(self, kappa):
        val, err, ok = rif.nontangential_value(kappa, (1.0, 1.0))
        assert ok and abs(val + 1.0) <= 1e-10

    def test_amy_at_singularity(self, amy):
        val, err, ok = rif.nontangential_value(amy, (1.0, 1.0))
        assert ok and abs(val + 1.0) <= 1e-10

    def test_kappa_regular_point(self, kappa):
        val, err, ok = rif.nontangential_value(kappa, (-1.0, -1.0))
        assert ok and abs(val - 1.0) <= 1e-12

    def test_matches_direct_evaluation(self, amy):
        z1, z2 = random_torus_points(50, seed=7)
        for a, b in zip(z1, z2):
            if abs(a - 1.0) < 0.2 and abs(b - 1.0) < 0.2:
                continue
            val, _, ok = rif.nontangential_value(amy, (a, b))
            direct = complex(amy.num(a, b)) / complex(amy.den(a, b))
            assert ok and abs(val - direct) <= 1e-10

    def test_off_torus_rejected(self, kappa):
        with pytest.raises(InvalidInput):
            rif.nontangential_value(kappa, (0.5, 1.0))


class TestIterates:
    def test_zeroth_is_kappa(self, kappa):
        it0 = rif.kappa_iterate(0)
        assert np.array_equal(np.asarray(it0.den.coeffs),
                              np.asarray(kappa.den.coeffs))

    def test_first_is_amy_exactly(self, amy):
        it1 = rif.kappa_iterate(1)
        assert np.array_equal(np.asarray(it1.den.coeffs),
                              np.asarray(amy.den.coeffs))
        assert np.array_equal(np.asarray(it1.num.coeffs),
                              np.asarray(amy.num.coeffs))

    def test_pointwise_composition(self, kappa):
        it1 = rif.kappa_iterate(1)
        it2 = rif.kappa_iterate(2)
        z1, z2 = random_interior_points(1000, seed=3)
        assert np.max(np.abs(it2.eval_batch(z1, z2) -
                             kappa.eval_batch(z1, it1.eval_batch(z1, z2)))) <= 1e-12

    def test_measured_bidegree(self):
        # Composition grows the first coordinate degree: bidegree (n+1, 1).
        for n in range(4):
            assert rif.kappa_iterate(n).bidegree == (n + 1, 1)

    def test_singular_at_one_one(self):
        it2 = rif.kappa_iterate(2)
        sings = it2.singularities
        assert any(abs(s.location[0] - 1) < 1e-6 and abs(s.location[1] - 1) < 1e-6
                   for s in sings)

    def test_degree_guard(self):
        with pytest.raises(DegreeGuard):
            rif.kappa_iterate(7)
        with pytest.raises(InvalidInput):
            rif.kappa_iterate(-1)


class TestInnerness:
    def test_unimodular_away_from_singularities(self, kappa, amy):
        z1, z2 = random_torus_points(1000, seed=11)
        for phi in (kappa, amy):
            mask = np.abs(z1 - 1.0) + np.abs(z2 - 1.0) >= 0.1
            vals = np.abs(phi.eval_batch(z1[mask], z2[mask]))
            assert np.max(np.abs(vals - 1.0)) <= 1e-10

    def test_contraction_inside(self, kappa, amy):
        z1, z2 = random_interior_points(1000, seed=12)
        for phi in (kappa, amy):
            assert np.max(np.abs(phi.eval_batch(z1, z2))) < 1.0


class TestSmoothSymbol:
    def test_mixed_example_accepted(self, psi_mixed):
        assert psi_mixed.sup_modulus <= 1.0 + 1e-10
        assert not psi_mixed.contact_everywhere

    def test_contacts_on_diagonal(self, psi_mixed):
        contacts = psi_mixed.boundary_contacts()
        assert contacts
        for a, b in contacts:
            assert abs(a - b) <= 1e-6

    def test_too_large_rejected(self):
        with pytest.raises(InvalidInput):
            rif.SmoothSymbol(P.BivariatePolynomial([[0, 0], [2.0, 0]]))

    def test_coordinate_symbol_contact_everywhere(self):
        z1 = rif.SmoothSymbol(P.BivariatePolynomial([[0, 0], [1, 0]]))
        assert z1.contact_everywhere


class TestSymbolParsing:
    def test_builtins(self):
        for name in ("kappa", "amy", "kappa_iterate:2", "z1", "z2"):
            sym = rif.parse_symbol(name)
            assert sym.name == name

    def test_negation_prefactor(self, kappa):
        sym = rif.parse_symbol("-kappa")
        assert sym.prefactor == -1.0 + 0.0j
        assert abs(sym(0.3, 0.3) - 0.3) <= 1e-14  # -kappa(t,t) = t

    def test_json_rif(self, kappa):
        spec = json.dumps({"p": P.poly_to_dict(kappa.den)})
        sym = rif.parse_symbol(spec)
        assert sym.kind == "rif"
        assert np.array_equal(np.asarray(sym.base.den.coeffs),
                              np.asarray(kappa.den.coeffs))

    def test_json_smooth_with_prefactor(self):
        spec = json.dumps({"psi": {"bidegree": [1, 0], "coeffs": [[[0, 0]], [[1, 0]]]},
                           "prefactor": [0, 1]})
        sym = rif.parse_symbol(spec)
        assert sym.kind == "smooth"
        assert abs(sym(0.5, 0.0) - 0.5j) <= 1e-15

    def test_unknown_rejected(self):
        with pytest.raises(InvalidInput):
            rif.parse_symbol("mystery")

    def test_nonunimodular_prefactor_rejected(self, kappa):
        with pytest.raises(InvalidInput):
            rif.Symbol(kappa, prefactor=0.5)

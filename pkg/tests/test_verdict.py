import pytest

from bidisc import rif
from bidisc import verdict as V

# Reduced budgets: the acceptance suite runs the full-scale versions.
FAST = dict(resolution=1024, samples=60_000, seed=5)


@pytest.fixture(scope="module")
def v_kappa_amy():
    return V.decide(V.SymbolPair.parse("kappa", "amy", [0.0]), **FAST)


class TestObstructionRules:
    def test_common_line_rule(self, v_kappa_amy):
        v = v_kappa_amy
        assert v.triggered_rule == "common-line"
        assert v.conclusions[0.0] == V.NOT_BOUNDED
        tau = complex(*v.feature["tau"])
        assert abs(tau - 1.0) <= 1e-8
        assert abs(complex(*v.feature["alpha1"]) + 1.0) <= 1e-8
        assert abs(complex(*v.feature["alpha2"]) + 1.0) <= 1e-8

    def test_not_bounded_has_probe_certificate(self, v_kappa_amy):
        v = v_kappa_amy
        probe = v.certificate["probe"]
        fit = probe["fit"]
        assert fit["slope"] + 2 * fit["slope_stderr"] < 4.0
        assert probe["inclusion_constant"] is not None

    def test_common_curve_rule(self, amy, amy_swapped):
        pair = V.SymbolPair(rif.Symbol(amy, name="amy"),
                            rif.Symbol(amy_swapped, name="amy_swapped"), [0.0])
        v = V.decide(pair, **FAST)
        assert v.triggered_rule == "common-curve"
        assert v.conclusions[0.0] == V.NOT_BOUNDED
        assert abs(v.certificate["probe"]["expected_exponent"] - 3.0) <= 1e-12

    def test_mixed_line_rule(self):
        v = V.decide(V.SymbolPair.parse("-amy", "z1", [0.0]), **FAST)
        assert v.triggered_rule == "common-line"
        assert v.conclusions[0.0] == V.NOT_BOUNDED
        # values on the shared line z1 = 1 are (+1, +1)
        assert abs(complex(*v.feature["alpha1"]) - 1.0) <= 1e-8
        assert abs(complex(*v.feature["alpha2"]) - 1.0) <= 1e-8


class TestDiagonalPairs:
    def test_kappa_pair(self, v_diag_kappa=None):
        v = V.decide(V.SymbolPair.parse("kappa", "kappa", [0.0]), **FAST)
        assert v.triggered_rule.startswith("identical-symbols+")
        assert v.conclusions[0.0] == V.NOT_BOUNDED

    def test_amy_pair(self):
        v = V.decide(V.SymbolPair.parse("amy", "amy", [0.0]), **FAST)
        assert v.triggered_rule.startswith("identical-symbols+")
        assert v.conclusions[0.0] == V.NOT_BOUNDED

    def test_two_singularity_pair(self):
        # Shared curve through two singularities; probe collars must follow
        # the genuinely curving branch.
        p1 = rif.P.BivariatePolynomial([[2, -1], [-1, 0]])
        p2 = rif.P.BivariatePolynomial([[2, 1], [1, 0]])
        pair = V.SymbolPair(rif.Symbol(rif.make_rif(p1 * p2), name="twosing"),
                            rif.Symbol(rif.make_rif(p1 * p2), name="twosing"),
                            [0.0])
        v = V.decide(pair, **FAST)
        assert v.triggered_rule == "identical-symbols+common-curve"
        assert v.conclusions[0.0] == V.NOT_BOUNDED
        probe = v.certificate["probe"]
        assert abs(probe["fit"]["slope"] - 3.0) <= 0.05
        assert probe["inclusion_constant"] < 50.0


class TestSufficiencyRules:
    def test_mixed_transversal(self, psi_mixed):
        pair = V.SymbolPair(rif.parse_symbol("-kappa"),
                            rif.Symbol(psi_mixed, name="mixed"), [0.0, -0.5])
        v = V.decide(pair, **FAST)
        assert v.triggered_rule == "transversal-sufficiency"
        assert v.conclusions[0.0] == V.BOUNDED_CONSISTENT
        assert v.conclusions[-0.5] == V.BOUNDED_CONSISTENT

    def test_beta_above_zero_undecided(self, psi_mixed):
        pair = V.SymbolPair(rif.parse_symbol("-kappa"),
                            rif.Symbol(psi_mixed, name="mixed"), [0.5])
        v = V.decide(pair, crosscheck=False, **FAST)
        assert v.conclusions[0.5] == V.UNDECIDED
        assert any("experimental" in h for h in v.unchecked_hypotheses)

    def test_identity_pair(self):
        v = V.decide(V.SymbolPair.parse("z1", "z2", [0.0]), **FAST)
        assert v.triggered_rule == "first-order-condition"
        assert v.conclusions[0.0] == V.BOUNDED_CONSISTENT

    def test_rif_pair_without_features_is_open(self, kappa):
        # Asymmetric complex coefficients break the anti-diagonal symmetry,
        # so this pair shares no curve with kappa.
        asym = rif.make_rif(rif.P.BivariatePolynomial([[4, -1j], [-1, 0]]))
        pair = V.SymbolPair(rif.Symbol(kappa, name="kappa"),
                            rif.Symbol(asym, name="asym"), [0.0])
        v = V.decide(pair, **FAST)
        assert v.triggered_rule == "rif-pair-transversal"
        assert v.conclusions[0.0] == V.UNDECIDED

    def test_grid_screen_finds_antidiagonal(self, kappa, generic_rif):
        # Real symmetric denominators are unimodular on the anti-diagonal,
        # so both level sets at value 1 contain it: a shared curve found by
        # the value-grid resultant screen, not by singular or line values.
        pair = V.SymbolPair(rif.Symbol(kappa, name="kappa"),
                            rif.Symbol(generic_rif, name="generic"), [0.0])
        v = V.decide(pair, **FAST)
        assert v.triggered_rule == "common-curve"
        assert v.conclusions[0.0] == V.NOT_BOUNDED
        assert abs(complex(*v.feature["alpha1"]) - 1.0) <= 1e-9
        assert abs(complex(*v.feature["alpha2"]) - 1.0) <= 1e-9


class TestInvariances:
    def test_rotation_invariance(self, psi_mixed):
        base = V.decide(V.SymbolPair(rif.parse_symbol("kappa"),
                                     rif.Symbol(psi_mixed), [0.0]), **FAST)
        rot = V.decide(V.SymbolPair(rif.parse_symbol("-kappa"),
                                    rif.Symbol(psi_mixed), [0.0]), **FAST)
        assert base.triggered_rule == rot.triggered_rule
        assert base.conclusions == rot.conclusions

    def test_coordinate_swap_symmetry(self, amy, amy_swapped):
        fwd = V.decide(V.SymbolPair(rif.Symbol(amy), rif.Symbol(amy_swapped),
                                    [0.0]), **FAST)
        # swapping both coordinates transposes each symbol
        rev = V.decide(V.SymbolPair(rif.Symbol(amy_swapped), rif.Symbol(amy),
                                    [0.0]), **FAST)
        assert fwd.conclusions == rev.conclusions
        assert fwd.triggered_rule == rev.triggered_rule


class TestCutoffFormula:
    def test_exact_values(self):
        assert V._beta_cutoff(11.0, 2.0) == 0.5
        assert V._beta_cutoff(9.0, 2.0) == 0.0

    def test_monotone_in_order(self):
        cuts = [V._beta_cutoff(m, 2.0) for m in (6.0, 8.0, 10.0, 12.0)]
        assert all(a < b for a, b in zip(cuts, cuts[1:]))

    def test_cutoff_matches_threshold_identity(self):
        # beta < cutoff  iff  M > K (2 beta + 4) + 1
        for M, K, beta in ((11.0, 2.0, 0.3), (11.0, 2.0, 0.7), (9.0, 4.0, -0.5)):
            lhs = beta < V._beta_cutoff(M, K)
            rhs = M > K * (2 * beta + 4) + 1
            assert lhs == rhs


class TestSerialization:
    def test_verdict_json_round_trip(self, v_kappa_amy):
        import json
        doc = v_kappa_amy.to_dict()
        text = json.dumps(doc, sort_keys=True)
        back = json.loads(text)
        assert back["conclusion_per_beta"]["0"] == V.NOT_BOUNDED
        assert back["triggered_rule"] == "common-line"
        assert "rungs" in back["crosscheck"]["0"]

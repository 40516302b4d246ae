import pytest
from hypothesis import given, strategies as st

from germdet import FieldDesc, IdealHandle, MapGerm, PreconditionError, ann_A_jet, ann_K, ann_R
from germdet import k_finite, milnor_tjurina, parse_poly, radical_contains
from germdet.annihilator import a_A_candidate, a_R_colon_m
from germdet.ring_core import substitute

E6 = MapGerm.from_strings(["x1^3 + x2^4"], ["x1", "x2"])
CUSP = MapGerm.from_strings(["t^2", "t^3"], ["t"])


def germ(*comps, vars=("x1", "x2"), field=None):
    return MapGerm.from_strings(list(comps), list(vars), field or FieldDesc(0))


def ideal(*gens, vars=("x1", "x2")):
    return IdealHandle.from_strings(list(gens), vars)


class TestRK:
    def test_e6(self):
        assert ann_R(E6).ideal.serialize() == ["x1^2", "x2^3"]
        assert ann_K(E6).ideal.serialize() == ["x1^2", "x2^3"]
        assert milnor_tjurina(E6) == (6, 6)

    def test_non_quasi_homogeneous(self):
        # oracle: dim Q[x,y]/(J + m^k) for large k, computed with sympy
        f = germ("x1^5 + x2^5 + x1^2*x2^2")
        mu, tau = milnor_tjurina(f)
        assert mu == 11 and tau == 10

    def test_char_three(self):
        f = germ("x1^3 + x2^4", field=FieldDesc(3))
        assert milnor_tjurina(f).mu == float("inf")
        assert ann_R(f).ideal.serialize() == ["x2^3"]

    def test_curve_annihilators(self):
        assert ann_R(CUSP).ideal.is_zero()
        assert ann_K(CUSP).ideal.serialize() == ["t^2"]

    def test_k_sandwich_reported(self):
        rep = ann_K(E6)
        assert all(h.decision.is_holds for h in rep.sandwich)

    def test_k_finiteness(self):
        assert k_finite(E6) == (True, 6)
        assert k_finite(germ("x1^2")).finite is False

    def test_milnor_needs_function(self):
        with pytest.raises(PreconditionError):
            milnor_tjurina(CUSP)

    @given(st.integers(-3, 3), st.integers(-3, 3), st.integers(1, 3))
    def test_mu_tau_linear_change_invariance(self, a, b, c):
        base = parse_poly("x1^3 + x2^4 + x1*x2^3", ("x1", "x2"))
        xs = [parse_poly(f"{c}*x1 + {a}*x2", ("x1", "x2")), parse_poly(f"{b}*x1 + x2", ("x1", "x2"))]
        if c - a * b == 0:
            return
        moved = substitute(base, xs, None)
        f0 = MapGerm((base,))
        f1 = MapGerm((moved,))
        assert milnor_tjurina(f0) == milnor_tjurina(f1)


class TestA:
    def test_surface_first_example(self):
        rep = ann_A_jet(germ("x1", "x2^2", "x2^3 + x1^2*x2"), 12)
        assert rep.ideal.serialize() == ["x1", "x2^2"]
        assert rep.certificate.is_holds and not rep.exact

    @pytest.mark.parametrize("k,expected", [(1, ["1"]), (2, []), (3, ["x2^2"]), (4, []), (5, ["x2^4"])])
    def test_surface_family(self, k, expected):
        rep = ann_A_jet(germ("x1", "x2^2", f"x1*x2^{k}"), 12)
        assert rep.ideal.serialize() == expected
        assert rep.certificate.is_holds

    def test_stable_fold(self):
        assert ann_A_jet(germ("x1", "x2^2"), 10).ideal.is_unit()

    def test_function_sandwich(self):
        for f in (E6, germ("x1^4"), germ("x1^2 + x2^3")):
            aR, aA = ann_R(f).ideal, ann_A_jet(f, 10).ideal
            assert aA.contains_ideal(aR)
            assert a_R_colon_m(f).contains_ideal(aA)

    def test_candidate_grows_with_jet(self):
        small = a_A_candidate(CUSP, 8)
        big = a_A_candidate(CUSP, 10)
        assert small.same_as(big)

    def test_not_k_finite_is_inconclusive(self):
        rep = ann_A_jet(germ("x1^2"), 8)
        assert rep.certificate.is_inconclusive

    def test_radical_relation_with_k(self):
        for f in (CUSP, germ("x1", "x2^2", "x2^3 + x1^2*x2")):
            aA, aK = ann_A_jet(f, 12).ideal, ann_K(f).ideal
            total = aA + IdealHandle(list(f.components), f.vars, f.field)
            assert radical_contains(aK, total).is_holds
            assert radical_contains(total, aK).is_holds

    def test_report_json(self):
        js = ann_A_jet(CUSP, 8).to_json()
        assert set(js) == {"ideal", "exact", "certificate", "sandwich"}

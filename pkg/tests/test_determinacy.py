import pytest
from hypothesis import given, strategies as st

from germdet import (
    FieldDesc,
    IdealHandle,
    MapGerm,
    a_ift_check,
    determinacy_order,
    filtration_criterion,
    k_ift_check,
    morse_split,
    parse_poly,
    r_ift_check,
    substitute,
)
from germdet.annihilator import ann_R
from germdet.determinacy import char_guard
from germdet.tangent import contains_power

V2 = ("x", "y")


def fn(text, vars=V2, field=None):
    return MapGerm.from_strings([text], list(vars), field or FieldDesc(0))


def m_power(f, k):
    return IdealHandle.maximal(f.vars, f.field) ** k


E6 = fn("x^3 + y^4")


class TestIFTChecks:
    def test_r_ift_e6_fails_with_witness(self):
        rep = r_ift_check(E6, m_power(E6, 2))
        assert not rep.holds and rep.conclusion is None
        assert str(rep.hypotheses[-1].decision.witness) == "x*y^4"
        assert any("ord f-1" in n for n in rep.notes)

    def test_r_ift_holds_for_higher_power(self):
        rep = r_ift_check(E6, m_power(E6, 3))
        assert rep.holds
        assert rep.conclusion.startswith("R f ⊇ {f}+m^3·")

    def test_r_ift_non_isolated(self):
        # y^5 is not in m^3·(x^2)
        assert not r_ift_check(fn("x^3"), m_power(E6, 2)).holds

    def test_zero_ideal_vacuous(self):
        zero = IdealHandle([], V2, FieldDesc(0))
        assert r_ift_check(E6, zero).holds
        assert k_ift_check(E6, zero).holds

    def test_k_ift_examples_fail(self):
        # m^4 contains y^4, which lies in neither m^3·(x) nor m·(x^2)
        rep = k_ift_check(fn("x^2"), m_power(E6, 2))
        assert not rep.holds
        assert not k_ift_check(E6, m_power(E6, 2)).holds

    def test_preconditions_are_hypotheses(self):
        rep = r_ift_check(E6, IdealHandle.maximal(V2, FieldDesc(0)))
        assert rep.hypothesis("a ⊆ m^2").decision.is_fails

    def test_conclusion_only_when_all_hold(self):
        rep = r_ift_check(E6, m_power(E6, 2))
        assert rep.conclusion is None


class TestACheck:
    def test_conditions_on_a(self):
        f = MapGerm.from_strings(["x1", "x2^2", "x2^3 + x1^2*x2"], ["x1", "x2"])
        rep = a_ift_check(f, IdealHandle.from_strings(["x1", "x2^2"], f.vars), 12)
        assert rep.hypothesis("m·a_R ⊆ a").decision.is_holds
        assert rep.hypothesis("V(a)").decision.is_holds
        # the mixed containment itself fails: x1^2*x2·e3 is not reached
        assert rep.hypothesis("a^2").decision.is_fails

    def test_finite_field_caveat(self):
        f = fn("x^3 + y^4", field=FieldDesc(7))
        rep = a_ift_check(f, m_power(f, 1) * ann_R(f).ideal, 10)
        assert "finite field" in rep.guard

    def test_trivial_choice_agrees_with_r_check_for_isolated_functions(self):
        for text in ("x^3 + y^4", "x^2 + y^3", "x^2*y + y^4"):
            f = fn(text)
            a = m_power(f, 1) * ann_R(f).ideal
            assert a_ift_check(f, a, 12).verdict == r_ift_check(f, a).verdict


class TestFiltrationCriterion:
    def test_e6(self):
        rep = filtration_criterion(E6, "R", 1, 5)
        assert rep.holds and rep.guard_value == 2

    @pytest.mark.parametrize("p,holds", [(3, False), (5, True), (7, True), (11, True)])
    def test_prime_fields(self, p, holds):
        rep = filtration_criterion(fn("x^3 + y^4", field=FieldDesc(p)), "R", 1, 5)
        assert rep.holds is holds

    def test_guard_values(self):
        assert char_guard(E6, "R", 1, 5) == (2, True)
        assert char_guard(E6, "A", 1, 5) == (7, True)
        assert char_guard(fn("x^3 + y^4", field=FieldDesc(2)), "R", 1, 5) == (2, False)

    def test_k_group_note(self):
        rep = filtration_criterion(E6, "K", 1, 5)
        assert rep.holds and any("τ+1" in n for n in rep.notes)

    def test_a_group_checks_the_locus(self):
        f = MapGerm.from_strings(["x1", "x2^2"], ["x1", "x2"])
        rep = filtration_criterion(f, "A", 1, 3, 8)
        assert rep.hypothesis("V(I)").decision.is_holds

    def test_guard_monotone_in_d(self):
        for d in range(5, 9):
            assert filtration_criterion(E6, "R", 1, d).holds

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            filtration_criterion(E6, "R", 3, 2)


class TestDeterminacyOrder:
    @pytest.mark.parametrize("text,field,expected", [
        ("x^3 + y^4", None, (5, 7)),
        ("x^2 + y^2", None, (3, 2)),
        ("x^5", FieldDesc(5), (float("inf"), float("inf"))),
    ])
    def test_orders(self, text, field, expected):
        assert tuple(determinacy_order(fn(text, field=field), "R")) == expected

    def test_k_order(self):
        assert tuple(determinacy_order(E6, "K")) == (5, 7)

    def test_order_is_sharp(self):
        d, _ = determinacy_order(E6, "R")
        assert filtration_criterion(E6, "R", 1, d).holds
        assert not contains_power(E6, "R", 1, d - 1).is_holds


class TestMorse:
    @pytest.mark.parametrize("text,rank,quad,resid", [
        ("x^2 + x*y^3 + y^5", 1, "x^2", "y^5 - 1/4*y^6"),
        ("x*y + y^3", 2, "x*y", "0"),
        ("y^3", 0, "0", "y^3"),
    ])
    def test_examples(self, text, rank, quad, resid):
        f = fn(text)
        res = morse_split(f, 6)
        assert res.rank == rank
        assert res.quadratic == parse_poly(quad, V2)
        assert res.residual == parse_poly(resid, V2)
        moved = substitute(f.components[0], list(res.coordinate_change), 6)
        assert moved == (res.quadratic + res.residual).truncate(6)

    @given(st.integers(1, 3), st.integers(-2, 2), st.integers(-2, 2))
    def test_residual_avoids_split_variables(self, a, b, c):
        f = fn(f"{a}*x^2 + {b}*x*y^2 + {c}*x^3 + y^4")
        res = morse_split(f, 6)
        assert res.rank == 1
        assert all(e[0] == 0 for e in res.residual.terms)
        moved = substitute(f.components[0], list(res.coordinate_change), 6)
        assert moved == (res.quadratic + res.residual).truncate(6)

    def test_char_two_unsupported(self):
        from germdet import PreconditionError
        with pytest.raises(PreconditionError):
            morse_split(fn("x^2 + y^3", field=FieldDesc(2)))

import pytest

from germdet import (
    FieldDesc,
    IdealHandle,
    MapGerm,
    ModuleElement,
    PreconditionError,
    mixed_containment,
    t_A_jet,
    t_K,
    t_R,
)
from germdet.std_basis import ideal_times_free
from germdet.tangent import (
    contains_ideal_free,
    contains_power,
    default_jet_degree,
    t_L_jet,
    t_R_generators,
)

CUSP = MapGerm.from_strings(["t^2", "t^3"], ["t"])
E6 = MapGerm.from_strings(["x^3 + y^4"], ["x", "y"])
FOLD = MapGerm.from_strings(["x1", "x2^2"], ["x1", "x2"])


def el(*comps, germ):
    from germdet import parse_poly
    return ModuleElement([parse_poly(c, germ.vars, germ.field) for c in comps])


class TestMapGerm:
    def test_rejects_constant_term(self):
        with pytest.raises(PreconditionError):
            MapGerm.from_strings(["1 + x"], ["x"])

    def test_rejects_filtration_not_containing_f(self):
        with pytest.raises(PreconditionError):
            MapGerm.from_strings(["x"], ["x", "y"], filtration=["x^2", "y"])

    def test_orders(self):
        f = MapGerm.from_strings(["x^2", "y^3"], ["x", "y"], filtration=["x", "y^3"])
        assert f.m_ord == 2
        assert f.ord == 1
        assert not f.filtration_is_maximal()

    def test_jacobian(self):
        assert [[str(p) for p in row] for row in CUSP.jacobian()] == [["2*t"], ["3*t^2"]]

    def test_default_jet_degree(self, monkeypatch):
        monkeypatch.delenv("GERMDET_JET_ORDER", raising=False)
        assert default_jet_degree(CUSP) == 12
        monkeypatch.setenv("GERMDET_JET_ORDER", "20")
        assert default_jet_degree(CUSP) == 20


class TestModuleTangents:
    def test_t_R_codimension_is_milnor_number(self):
        assert t_R(E6).quotient_dimension().k_dim == 6

    def test_t_K_cusp(self):
        assert t_K(CUSP).quotient_dimension().k_dim == 3

    def test_filtered_t_R(self):
        # T_R^(1) f is m^2·Der(f); x^2 lies in T_R f but not in the filtered space
        B = t_R(E6, 1)
        assert not B.contains(el("x^2", germ=E6))
        assert B.contains(el("x^4", germ=E6))

    def test_t_R_generators_count(self):
        assert len(t_R_generators(E6, -1)) == 2


class TestJetSpaces:
    def test_cusp_t_A_rank(self):
        # rank 17 of 18 at D = 8 (sympy rank computation)
        space = t_A_jet(CUSP, -1, 8)
        assert (space.rank, space.ambient_dim) == (17, 18)
        assert [str(v) for v in space.missing_terms()] == ["(0, t)"]

    def test_fold_is_stable(self):
        space = t_A_jet(FOLD, -1, 8)
        assert space.codim == 0

    def test_t_A_is_not_a_module_over_the_source(self):
        space = t_A_jet(CUSP, -1, 8)
        v = el("0", "1", germ=CUSP)
        assert space.contains(v)
        assert not space.contains(el("0", "t", germ=CUSP))

    def test_t_L_filtration(self):
        # T_L^(1) is spanned by products of at least two components
        space = t_L_jet(CUSP, 1, 8)
        assert not space.contains(el("t^2", "0", germ=CUSP))
        assert space.contains(el("t^4", "0", germ=CUSP))


class TestMixedContainment:
    def test_finite_route_holds(self):
        M = ideal_times_free(IdealHandle.from_strings(["x1", "x2^2"], FOLD.vars), 2)
        assert mixed_containment(FOLD, M, t_R_generators(FOLD, -1)).is_holds

    def test_fails_with_witness(self):
        dec = contains_power(E6, "R", 1, 4)
        assert dec.is_fails and str(dec.witness) == "x*y^3"

    def test_graded_route(self):
        f = MapGerm.from_strings(["x1", "x2^2", "x1*x2^3"], ["x1", "x2"])
        c = IdealHandle.from_strings(["x2^2"], f.vars)
        assert contains_ideal_free(f, "A", -1, c, 12).is_holds

    def test_e6_power_containment(self):
        assert contains_power(E6, "R", 1, 5).is_holds

    def test_prime_field(self):
        f = MapGerm.from_strings(["x^3 + y^4"], ["x", "y"], FieldDesc(3))
        assert not contains_power(f, "R", 1, 5).is_holds

    def test_fold_A_power(self):
        assert contains_power(FOLD, "A", 0, 2, 8).is_holds

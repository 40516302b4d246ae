"""Acceptance criteria 1-9.

Each criterion collects named sub-checks; the test fails if any sub-check
fails, and a one-line summary per criterion is printed at the end of the run
(or when the file is executed directly).
"""

import random
import sys
import time
from fractions import Fraction

import pytest

from germdet import (
    AutoJet,
    Derivation,
    FieldDesc,
    FreeLieElement,
    IdealHandle,
    MapGerm,
    ModuleElement,
    Poly,
    PreconditionError,
    QQ,
    a_ift_check,
    ann_A_jet,
    ann_K,
    ann_R,
    bch_integrality,
    bch_truncated,
    determinacy_order,
    exp_derivation,
    filtration_criterion,
    ideal_colon,
    ift_solve,
    lift_exists,
    milnor_tjurina,
    morse_split,
    normal_form,
    parse_poly,
    r_ift_check,
    radical_contains,
    std_basis,
    substitute,
)
from germdet.annihilator import a_R_colon_m
from germdet.expjet import thom_levine_sides
from germdet.ring_core import monomials_up_to
from germdet.tangent import contains_ideal_free, contains_power, t_A_jet

RESULTS: dict[int, tuple[str, list[tuple[str, bool]]]] = {}


class Checks:
    def __init__(self, number: int, title: str):
        self.number, self.title, self.items = number, title, []

    def __call__(self, name: str, ok) -> bool:
        self.items.append((name, bool(ok)))
        return bool(ok)

    def guarded(self, name: str, fn) -> bool:
        try:
            return self(name, fn())
        except (PreconditionError, ValueError) as e:
            return self(f"{name} (raised {type(e).__name__}: {e})", False)

    def finish(self) -> None:
        RESULTS[self.number] = (self.title, self.items)
        failed = [n for n, ok in self.items if not ok]
        assert not failed, "unmet: " + "; ".join(failed)


def summary_lines() -> list[str]:
    lines = []
    for k in sorted(RESULTS):
        title, items = RESULTS[k]
        failed = [n for n, ok in items if not ok]
        status = "PASS" if not failed else "FAIL"
        tail = f" ({len(items)} checks)" if not failed else " unmet: " + "; ".join(failed)
        lines.append(f"criterion {k} [{title}]: {status}{tail}")
    return lines


def V(*names):
    return tuple(names)


def max_ideal(f):
    return IdealHandle.maximal(f.vars, f.field)


# ---------------------------------------------------------------------------


def test_criterion_1_e6_suite():
    c = Checks(1, "E6 suite")
    start = time.perf_counter()
    f = MapGerm.from_strings(["x^3 + y^4"], ["x", "y"])
    target = IdealHandle.from_strings(["x^2", "y^3"], f.vars)
    c("a_R = (x^2, y^3)", ann_R(f).ideal.same_as(target))
    c("a_K = (x^2, y^3)", ann_K(f).ideal.same_as(target))
    c("mu = tau = 6", tuple(milnor_tjurina(f)) == (6, 6))
    rep = r_ift_check(f, max_ideal(f) ** 2)
    c("r_ift_check(a = m^2) Holds", rep.holds)
    c("conclusion reads R f ⊇ {f}+m^2·(x^2,y^3)", rep.conclusion == "R f ⊇ {f}+m^2·(x^2,y^3)")
    order = determinacy_order(f, "R")
    c("determinacy_order(R) = (5, 7)", tuple(order) == (5, 7))
    c("d_min <= classical bound", order.d_min <= order.classical_bound)
    c("the d = 4 check Fails", contains_power(f, "R", 1, 4).is_fails)
    c("runtime < 1 s", time.perf_counter() - start < 1.0)
    c.finish()


def test_criterion_2_a_annihilator():
    c = Checks(2, "A-annihilator reproduction")
    vars = ["x1", "x2"]
    cases = [
        (["x1", "x2^2", "x2^3 + x1^2*x2"], ["x1", "x2^2"], "first surface"),
        (["x1", "x2^2", "x1*x2^2"], ["x2^2", "x1*x2"], "second surface"),
    ]
    for comps, expected, label in cases:
        start = time.perf_counter()
        f = MapGerm.from_strings(comps, vars)
        a = IdealHandle.from_strings(expected, f.vars)
        rep = ann_A_jet(f, 12)
        c(f"{label}: ann_A_jet = ({', '.join(expected)})", rep.ideal.same_as(a))
        c(f"{label}: Holds certificate", rep.certificate.is_holds)
        c(f"{label}: a_ift_check Holds", a_ift_check(f, a, 12).holds)
        c(f"{label}: runtime < 30 s", time.perf_counter() - start < 30)
    c.finish()


def test_criterion_3_char_p_lift():
    c = Checks(3, "characteristic-p pathology")
    start = time.perf_counter()
    vars = ("x", "y")
    F5 = FieldDesc(5)
    dec = lift_exists(parse_poly("x^5 + y^15", vars, F5), Derivation.from_strings(["y^2", "0"], vars, F5), 12)
    c("F5: lift_exists Fails", dec.is_fails)
    c("F5: obstruction monomial y^10", dec.witness == "y^10")
    c.guarded("Q: same input Holds", lambda: lift_exists(
        parse_poly("x^5 + y^15", vars), Derivation.from_strings(["y^2", "0"], vars), 12).is_holds)
    c("runtime < 5 s", time.perf_counter() - start < 5)
    c.finish()


def test_criterion_4_bch():
    c = Checks(4, "BCH")
    start = time.perf_counter()
    L = 6
    Z = bch_truncated(L=L)
    X, Y = FreeLieElement.generator(0, L), FreeLieElement.generator(1, L)
    XY = X.bracket(Y)
    c("p2 = [X,Y]/2", Z.part(2).coefficients() == XY.scale(Fraction(1, 2)).coefficients())
    p3 = (X.bracket(XY) - Y.bracket(XY)).scale(Fraction(1, 12))
    c("p3 = ([X,[X,Y]] - [Y,[X,Y]])/12", Z.part(3).coefficients() == p3.coefficients())
    c("(l!)^4 clears denominators for l <= 6", bch_integrality(6).passes)
    c("runtime < 10 s", time.perf_counter() - start < 10)
    c.finish()


def _random_derivation(rng, vars, min_deg, max_deg, terms=2):
    mons = [e for e in monomials_up_to(len(vars), max_deg) if sum(e) >= min_deg]
    coeffs = []
    for _ in vars:
        chosen = rng.sample(mons, min(terms, len(mons)))
        coeffs.append(Poly({e: Fraction(rng.randint(-3, 3)) for e in chosen}, vars, QQ))
    return Derivation(coeffs)


def test_criterion_5_thom_levine():
    c = Checks(5, "Thom-Levine")
    f = MapGerm.from_strings(["x + x^5"], ["x"])
    xX = Derivation.from_strings(["x^2"], ["x"])
    xY = Derivation.from_strings(["y^2"], ["y"])
    lhs, rhs = thom_levine_sides(xY, xX, f, 6, 1)
    six = parse_poly("3*x^6", ("x",))
    c("both sides equal 3x^6 mod (x)^7", lhs == [six] and rhs == [six])
    _, rhs7 = thom_levine_sides(xY, xX, f, 7, 1)
    c("x^7 coefficient of e^{ξX}f - e^{ξY}f equals 24", rhs7[0].coeff((7,)) == 24)

    rng = random.Random(20241014)
    part1 = part2 = 0
    T = 8
    for _ in range(100):
        xi = _random_derivation(rng, ("x",), 2, 4)
        eta = _random_derivation(rng, ("y",), 2, 4)
        g = parse_poly(f"x + {rng.randint(-2, 2)}*x^2 + {rng.randint(-2, 2)}*x^3", ("x",))
        phi = exp_derivation(xi, T, T)
        left = substitute(eta.coeffs[0], [phi.pullback(g, T)], T)
        right = phi.pullback(substitute(eta.coeffs[0], [g], T), T)
        part1 += left == right

        d = rng.randint(4, 7)
        germ = MapGerm((g,))
        inv = AutoJet((g,), d + 1).inverse()
        related = inv.pullback(xi(g), d + 1).with_vars(("y",))
        bump = Poly({(d + rng.randint(0, 2),): Fraction(rng.randint(1, 3))}, ("y",), QQ)
        partner = Derivation([related + bump])
        lin, expd = thom_levine_sides(partner, xi, germ, d, 1)
        part2 += all(p.ord() >= d for p in lin) and all(p.ord() >= d for p in expd)
    c("part 1 identity on 100 random pairs", part1 == 100)
    c("part 2 consequence on 100 random pairs", part2 == 100)
    c.finish()


def test_criterion_6_char_guarded_determinacy():
    c = Checks(6, "char-guarded determinacy")
    def crit(field):
        return filtration_criterion(MapGerm.from_strings(["x^3 + y^4"], ["x", "y"], field), "R", 1, 5)
    c("Q: Holds", crit(QQ).holds)
    for p in (5, 7, 11, 13):
        c(f"F{p}: Holds", crit(FieldDesc(p)).holds)
    c("F3: Fails", crit(FieldDesc(3)).verdict.value == "Fails")
    c("guard value 2", crit(QQ).guard_value == 2)
    c.finish()


def test_criterion_7_kernel_suite():
    c = Checks(7, "kernel properties")
    rng = random.Random(7)
    vars = ("x", "y")

    def rand_poly(min_deg=0, max_deg=3, terms=3):
        mons = [e for e in monomials_up_to(2, max_deg) if sum(e) >= min_deg]
        return Poly({e: Fraction(rng.randint(-3, 3)) for e in rng.sample(mons, terms)}, vars, QQ)

    I = IdealHandle.from_strings(["x^2 - x^3"], vars)
    c("x^2 ∈ (x^2 - x^3)", I.contains(parse_poly("x^2", vars)))
    ok_std = ok_nf = ok_sub = ok_colon = True
    for _ in range(25):
        gens = [rand_poly(1) for _ in range(2)]
        if all(g.is_zero() for g in gens):
            continue
        B = std_basis(gens, vars=vars, field=QQ)
        again = std_basis(B.elements, rank=1, vars=vars, field=QQ)
        ok_std &= sorted(B.leading_terms()) == sorted(again.leading_terms())
        h = rand_poly()
        r = normal_form(h, B)
        ok_nf &= normal_form(r, B) == r and (r.is_zero() == B.contains(h))
        F, G, H = rand_poly(), [rand_poly(1, 2) for _ in range(2)], [rand_poly(1, 2) for _ in range(2)]
        left = substitute(substitute(F, G, 5), H, 5)
        ok_sub &= left == substitute(F, [substitute(g, H, 5) for g in G], 5)
        g = rand_poly(1, 2)
        if not g.is_zero():
            A = IdealHandle(gens, vars, QQ)
            Q = ideal_colon(A, IdealHandle([g], vars, QQ))
            ok_colon &= all(A.contains(q * g) for q in Q.generators) and Q.contains_ideal(A)
    c("std-basis idempotence", ok_std)
    c("NF idempotence", ok_nf)
    c("substitute associativity", ok_sub)
    x = Poly.var(0, vars)
    z = ift_solve([x], [parse_poly("z^2", ("x", "y", "z"))], 5)[0]
    c("ift_solve Catalan prefix 1,1,2,5,14", [z.coeff((k, 0)) for k in range(1, 6)] == [1, 1, 2, 5, 14])
    c("colon soundness", ok_colon)
    base = parse_poly("x^3 + y^4 + x*y^3", vars)
    ok_mu = True
    for _ in range(10):
        a, b, k = rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(1, 3)
        if k - a * b == 0:
            continue
        moved = substitute(base, [parse_poly(f"{k}*x + {a}*y", vars), parse_poly(f"{b}*x + y", vars)], None)
        ok_mu &= milnor_tjurina(MapGerm((base,))) == milnor_tjurina(MapGerm((moved,)))
    c("mu/tau linear-change invariance", ok_mu)
    c.finish()


def _extended_module_check(f, D):
    aA = ann_A_jet(f, D).ideal
    if aA.is_zero():
        return True
    space = t_A_jet(f, -1, D)
    for a in aA.canonical_generators():
        Dp = D - a.degree()
        smaller = t_A_jet(f, -1, Dp)
        for v in space.rows():
            if not smaller.contains((v * a).truncate(Dp)):
                return False
    return True


def _artin_rees(f, D):
    m = max_ideal(f)
    ok = True
    premises = {}
    for j in (0, 1):
        for d in range(j + 1, 5):
            if contains_power(f, "A", j, d, D).is_holds:
                premises[j] = d
                break
    for j1, d1 in premises.items():
        for j2, d2 in premises.items():
            c12 = (m ** d1) * (m ** d2)
            ok &= contains_ideal_free(f, "A", j1 + j2 + 1, c12, D).is_holds
    for j, dj in premises.items():
        for i in (0, 1):
            di = next((d for d in range(max(i, 1), 6) if contains_power(f, "K", i, d).is_holds), None)
            if di is None or not (dj >= i and dj > j):
                continue
            ok &= contains_power(f, "A", j + 1, dj + di - i, D).is_holds
    return ok and bool(premises)


def test_criterion_8_mixed_module_suite():
    c = Checks(8, "mixed-module suite")
    D = 10
    cusp = MapGerm.from_strings(["t^2", "t^3"], ["t"])
    first = MapGerm.from_strings(["x1", "x2^2", "x2^3 + x1^2*x2"], ["x1", "x2"])
    second = MapGerm.from_strings(["x1", "x2^2", "x1*x2^2"], ["x1", "x2"])
    for name, f in (("cusp", cusp), ("first surface", first), ("second surface", second)):
        c(f"{name}: a_A·T_A f ⊆ T_A f on jets", _extended_module_check(f, D))
        aA, aK = ann_A_jet(f, D).ideal, ann_K(f).ideal
        total = aA + IdealHandle(list(f.components), f.vars, f.field)
        c(f"{name}: √(a_A+(f)) = √a_K", radical_contains(aK, total).is_holds and radical_contains(total, aK).is_holds)
    for name, f in (("cusp", cusp), ("first surface", first)):
        c(f"{name}: Artin-Rees product and step rules", _artin_rees(f, D))
    for text, vars in (("x^3 + y^4", ["x", "y"]), ("x^4", ["x"]), ("x^2 + y^3", ["x", "y"])):
        f = MapGerm.from_strings([text], vars)
        aR, aA = ann_R(f).ideal, ann_A_jet(f, D).ideal
        c(f"{text}: a_R ⊆ a_A ⊆ a_R : m", aA.contains_ideal(aR) and a_R_colon_m(f).contains_ideal(aA))
    space = t_A_jet(cusp, -1, 8)
    unit = ModuleElement([Poly.zero(cusp.vars), Poly.one(cusp.vars)])
    moved = ModuleElement([Poly.zero(cusp.vars), Poly.var(0, cusp.vars)])
    c("cusp: (0,1) ∈ T_A f but t·(0,1) ∉ T_A f", space.contains(unit) and not space.contains(moved))
    c.finish()


def test_criterion_9_morse_splitting():
    c = Checks(9, "Morse splitting")
    vars = ("x", "y")
    cases = [("x^2 + x*y^3 + y^5", 1, "x^2", "y^5 - 1/4*y^6"),
             ("x*y + y^3", 2, "x*y", "0"),
             ("y^3", 0, "0", "y^3")]
    for text, rank, quad, resid in cases:
        f = MapGerm.from_strings([text], list(vars))
        res = morse_split(f, 6)
        c(f"{text}: rank {rank}, Q = {quad}, residual = {resid}",
          res.rank == rank and res.quadratic == parse_poly(quad, vars) and res.residual == parse_poly(resid, vars))
        moved = substitute(f.components[0], list(res.coordinate_change), 6)
        c(f"{text}: coordinate change verified", moved == (res.quadratic + res.residual).truncate(6))
    c.finish()


if __name__ == "__main__":
    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    sys.exit(code)

"""Jet calculus: exponentials and logarithms of derivations, Baker–Campbell–Hausdorff
in the free associative algebra, the Thom–Levine comparison and liftability of
vector fields to coordinate changes preserving a hypersurface."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Callable, NamedTuple, Sequence

from .decision import Decision
from .linalg import Echelon
from .ring_core import (
    Derivation,
    IdealHandle,
    Poly,
    PreconditionError,
    StructuralError,
    monomials_up_to,
    substitute,
)
from .std_basis import JetQuotient
from .tangent import MapGerm

__all__ = [
    "AutoJet",
    "exp_derivation",
    "log_automorphism",
    "FreeAssoc",
    "FreeLieElement",
    "bch_truncated",
    "bch_integrality",
    "BCHRecord",
    "thom_levine_sides",
    "thom_levine_check",
    "lift_exists",
]


# ---------------------------------------------------------------------------
# automorphism jets


@dataclass(frozen=True)
class AutoJet:
    """Coordinate change x_i -> images[i], known modulo degree > D."""

    images: tuple[Poly, ...]
    D: int

    def __post_init__(self) -> None:
        imgs = tuple(p.truncate(self.D) for p in self.images)
        if not imgs or len(imgs) != imgs[0].nvars:
            raise StructuralError("an automorphism needs one image per variable")
        for p in imgs:
            if p.constant_term() != 0:
                raise PreconditionError("automorphism images must vanish at the origin")
        object.__setattr__(self, "images", imgs)
        if self.D >= 1 and not self._linear_part_invertible():
            raise PreconditionError("the linear part is not invertible")

    def _linear_part_invertible(self) -> bool:
        n = len(self.images)
        F = self.field
        ech = Echelon(F)
        for p in self.images:
            row = {}
            for i in range(n):
                e = tuple(1 if k == i else 0 for k in range(n))
                c = p.terms.get(e)
                if c:
                    row[i] = c
            ech.add(row)
        return ech.rank == n

    @classmethod
    def identity(cls, vars: Sequence[str], field, D: int) -> "AutoJet":
        return cls(tuple(Poly.gens(vars, field)), D)

    @property
    def vars(self) -> tuple[str, ...]:
        return self.images[0].vars

    @property
    def field(self):
        return self.images[0].field

    def pullback(self, g: Poly, D: int | None = None) -> Poly:
        """g∘Φ modulo degree > D."""
        return substitute(g, list(self.images), self.D if D is None else min(D, self.D))

    def then(self, other: "AutoJet") -> "AutoJet":
        """Operator product: functions are pulled back by ``other`` first, then by ``self``;
        images are other(x)∘self."""
        D = min(self.D, other.D)
        return AutoJet(tuple(substitute(p, list(self.images), D) for p in other.images), D)

    def inverse(self) -> "AutoJet":
        D = self.D
        n = len(self.images)
        F = self.field
        # linear inverse first, then Newton-free fixed point on the nonlinear part
        lin = [[p.terms.get(tuple(1 if k == i else 0 for k in range(n)), F.zero) for i in range(n)]
               for p in self.images]
        inv = _mat_inverse(lin, F)
        xs = Poly.gens(self.vars, F)
        L_inv = [sum((xs[k].scale(inv[i][k]) for k in range(n)), Poly.zero(self.vars, F))
                 for i in range(n)]
        # solve Φ(ψ) = x:  ψ = L^{-1}(x - N(ψ)), N the nonlinear part of Φ
        nonlin = [p - sum((xs[i].scale(lin[r][i]) for i in range(n)), Poly.zero(self.vars, F))
                  for r, p in enumerate(self.images)]
        psi = [q.truncate(D) for q in L_inv]
        for _ in range(D + 2):
            rhs = [xs[r] - substitute(nonlin[r], psi, D) for r in range(n)]
            new = [substitute(L_inv[i], rhs, D) for i in range(n)]
            if new == psi:
                break
            psi = new
        return AutoJet(tuple(psi), D)

    def is_unipotent(self) -> bool:
        xs = Poly.gens(self.vars, self.field)
        return all((p - x).ord() >= 2 for p, x in zip(self.images, xs))

    def __str__(self) -> str:
        return "(" + ", ".join(f"{v} -> {p}" for v, p in zip(self.vars, self.images)) + ")"


def _mat_inverse(A, F):
    n = len(A)
    M = [list(A[i]) + [F.one if j == i else F.zero for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        inv = F.inv(M[col][col])
        M[col] = [F.mul(x, inv) for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                fac = M[r][col]
                M[r] = [F.sub(x, F.mul(fac, y)) for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


def _apply(xi: Derivation, g: Poly, D: int) -> Poly:
    """ξ(g) modulo degree > D; the coefficients of ξ lie in m, so degrees never drop."""
    return xi.untruncated().apply_trunc(g.untruncated(), D).untruncated()


def _require_factorials(F, N: int) -> None:
    if not F.factorial_invertible(N):
        raise PreconditionError(f"{N}! is not invertible in characteristic {F.characteristic}")


def exp_derivation(xi: Derivation, N: int, D: int) -> AutoJet:
    """x_i -> Σ_{k<=N} ξ^k(x_i)/k! modulo degree > D."""
    F = xi.field
    _require_factorials(F, N)
    if not all(c.ord() >= 2 for c in xi.coeffs):
        raise PreconditionError("the derivation must have coefficients in m^2")
    images = []
    fact = F.one
    for x in Poly.gens(xi.vars, F):
        term = x
        acc = term
        fact = F.one
        for k in range(1, N + 1):
            term = _apply(xi, term, D)
            if not term.terms:
                break
            fact = F.mul(fact, F(k))
            acc = acc + term.scale(F.inv(fact))
        images.append(acc)
    return AutoJet(tuple(images), D)


def log_automorphism(phi: AutoJet, N: int, D: int | None = None) -> Derivation:
    """ln Φ = -Σ_{i<=N} (1-Φ)^i / i applied to the coordinates, as a derivation jet."""
    F = phi.field
    D = phi.D if D is None else min(D, phi.D)
    _require_factorials(F, N)
    if not phi.is_unipotent():
        raise PreconditionError("the logarithm needs a unipotent automorphism")
    coeffs = []
    for x in Poly.gens(phi.vars, F):
        g = x.truncate(D)
        acc = Poly.zero(phi.vars, F, D)
        for i in range(1, N + 1):
            g = g - phi.pullback(g, D)
            if not g.terms:
                break
            acc = acc - g.scale(F.inv(F(i)))
        coeffs.append(acc)
    return Derivation(coeffs)


# ---------------------------------------------------------------------------
# free associative algebra and BCH


class FreeAssoc:
    """Truncated free associative algebra over Q on generators 0..k-1 (words as tuples)."""

    __slots__ = ("terms", "L")

    def __init__(self, terms: dict | None, L: int):
        self.L = L
        self.terms = {w: c for w, c in (terms or {}).items() if c != 0 and len(w) <= L}

    @classmethod
    def gen(cls, i: int, L: int) -> "FreeAssoc":
        return cls({(i,): Fraction(1)}, L)

    @classmethod
    def one(cls, L: int) -> "FreeAssoc":
        return cls({(): Fraction(1)}, L)

    def __add__(self, other: "FreeAssoc") -> "FreeAssoc":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return FreeAssoc(out, min(self.L, other.L))

    def __sub__(self, other: "FreeAssoc") -> "FreeAssoc":
        return self + other.scale(-1)

    def scale(self, c) -> "FreeAssoc":
        return FreeAssoc({w: a * c for w, a in self.terms.items()}, self.L)

    def __mul__(self, other: "FreeAssoc") -> "FreeAssoc":
        L = min(self.L, other.L)
        out: dict = {}
        for w1, a in self.terms.items():
            for w2, b in other.terms.items():
                if len(w1) + len(w2) <= L:
                    w = w1 + w2
                    out[w] = out.get(w, 0) + a * b
        return FreeAssoc(out, L)

    def bracket(self, other: "FreeAssoc") -> "FreeAssoc":
        return self * other - other * self

    def part(self, l: int) -> "FreeAssoc":
        return FreeAssoc({w: c for w, c in self.terms.items() if len(w) == l}, self.L)

    def exp(self) -> "FreeAssoc":
        """exp of an element without constant term."""
        if () in self.terms:
            raise PreconditionError("exp needs an element without constant term")
        out = FreeAssoc.one(self.L)
        power = FreeAssoc.one(self.L)
        for k in range(1, self.L + 1):
            power = power * self
            out = out + power.scale(Fraction(1, math.factorial(k)))
        return out

    def log(self) -> "FreeAssoc":
        """log of an element with constant term 1."""
        if self.terms.get(()) != 1:
            raise PreconditionError("log needs constant term 1")
        w = self - FreeAssoc.one(self.L)
        out = FreeAssoc({}, self.L)
        power = FreeAssoc.one(self.L)
        for k in range(1, self.L + 1):
            power = power * w
            out = out + power.scale(Fraction((-1) ** (k + 1), k))
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeAssoc) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = "XYZW"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            parts.append(f"{self.terms[w]}*{''.join(names[i] for i in w) or '1'}")
        return " + ".join(parts)

    __repr__ = __str__


class FreeLieElement:
    """A Lie element in two generators, stored through its associative expansion."""

    __slots__ = ("assoc",)

    def __init__(self, assoc: FreeAssoc):
        self.assoc = assoc

    @classmethod
    def generator(cls, i: int, L: int) -> "FreeLieElement":
        return cls(FreeAssoc.gen(i, L))

    @property
    def L(self) -> int:
        return self.assoc.L

    def part(self, l: int) -> "FreeLieElement":
        return FreeLieElement(self.assoc.part(l))

    def __add__(self, other):
        return FreeLieElement(self.assoc + other.assoc)

    def __sub__(self, other):
        return FreeLieElement(self.assoc - other.assoc)

    def scale(self, c):
        return FreeLieElement(self.assoc.scale(c))

    def bracket(self, other):
        return FreeLieElement(self.assoc.bracket(other.assoc))

    def coefficients(self) -> dict:
        return dict(self.assoc.terms)

    def dynkin_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """(word, coefficient) pairs with self = Σ coefficient·[w1,[w2,[...,wl]]] (Dynkin–Specht–Wever)."""
        out = []
        for w, c in sorted(self.assoc.terms.items(), key=lambda t: (len(t[0]), t[0])):
            if w:
                out.append((w, c / len(w)))
        return out

    def evaluate(self, gens: Sequence, bracket: Callable, add: Callable = None,
                 scale: Callable = None, zero=None):
        """Value of the Lie element under generators ``gens`` and the given bracket."""
        add = add or (lambda a, b: a + b)
        scale = scale or (lambda a, c: a.scale(c))
        acc = zero
        for w, c in self.dynkin_terms():
            val = gens[w[-1]]
            for i in reversed(w[:-1]):
                val = bracket(gens[i], val)
                if val is None:
                    break
            if val is None:
                continue
            term = scale(val, c)
            acc = term if acc is None else add(acc, term)
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeLieElement) and self.assoc == other.assoc

    def __hash__(self) -> int:
        return hash(self.assoc)

    def __str__(self) -> str:
        return str(self.assoc)

    __repr__ = __str__


def _bch_free(L: int) -> FreeLieElement:
    X = FreeAssoc.gen(0, L)
    Y = FreeAssoc.gen(1, L)
    return FreeLieElement((X.exp() * Y.exp()).log())


def bch_truncated(xi=None, eta=None, L: int = 4, *, D: int | None = None,
                  bracket: Callable | None = None):
    """Σ_{l<=L} p_l(ξ, η) with log(e^ξ e^η), computed in the free associative algebra.

    With no arguments (or FreeLieElement generators) the free element is returned.
    For derivations the Dynkin form is evaluated with the commutator of vector
    fields truncated at D; ``bracket`` overrides the bracket used.
    """
    Z = _bch_free(L)
    if xi is None or isinstance(xi, FreeLieElement):
        if bracket is None and xi is None:
            return Z
        gens = [xi or FreeLieElement.generator(0, L), eta or FreeLieElement.generator(1, L)]
        br = bracket or (lambda a, b: a.bracket(b))
        return Z.evaluate(gens, br, zero=FreeLieElement(FreeAssoc({}, L)))
    if isinstance(xi, Derivation):
        F = xi.field
        if F.characteristic and F.characteristic <= L:
            raise PreconditionError("BCH on derivations needs char 0 or char > L")
        br = bracket or (lambda a, b: a.untruncated().bracket(b.untruncated(), D).untruncated())
        val = Z.evaluate([xi, eta], br, scale=lambda a, c: a.scale(F(c)),
                         zero=Derivation.zero(xi.vars, F))
        return val.truncate(D) if D is not None else val
    if bracket is None:
        raise StructuralError("a bracket is required for this kind of element")
    return Z.evaluate([xi, eta], bracket)


class BCHRow(NamedTuple):
    l: int
    denominator_lcm: int
    scale: int
    passes: bool


@dataclass(frozen=True)
class BCHRecord:
    rows: tuple[BCHRow, ...]

    @property
    def passes(self) -> bool:
        return all(r.passes for r in self.rows)

    @property
    def worst_denominator(self) -> int:
        return max(r.denominator_lcm for r in self.rows)

    def to_json(self) -> dict:
        return {"passes": self.passes, "worst_denominator": self.worst_denominator,
                "rows": [r._asdict() for r in self.rows]}


def bch_integrality(L: int = 6, max_L: int = 6) -> BCHRecord:
    """Check that (l!)^4·p_l has integer coefficients for every l <= L."""
    if L > max_L:
        raise PreconditionError(f"L = {L} exceeds the configured maximum {max_L}")
    Z = _bch_free(L)
    rows = []
    for l in range(1, L + 1):
        coeffs = Z.part(l).coefficients().values()
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in coeffs), 1)
        s = math.factorial(l) ** 4
        rows.append(BCHRow(l, den, s, all((c * s).denominator == 1 for c in coeffs)))
    return BCHRecord(tuple(rows))


# ---------------------------------------------------------------------------
# Thom–Levine comparison


def _target_vars(p: int) -> tuple[str, ...]:
    return tuple(f"y{i + 1}" for i in range(p)) if p > 1 else ("y",)


def _check_filtration(f: MapGerm) -> None:
    if not f.filtration_is_maximal():
        raise PreconditionError("the Thom–Levine check is implemented for the m-adic filtration")


def _tl_terms(f: MapGerm, d: int, l: int) -> int:
    o = int(f.m_ord)
    return max(-(-(d - o) // l), 0) + 1


def thom_levine_sides(xi_Y: Derivation, xi_X: Derivation, f: MapGerm, d: int, l: int):
    """(ξX(f) − ξY(y)|_f, e^{ξX}f − e^{ξY}f) modulo M_{d+l}, as lists of truncated jets."""
    _check_filtration(f)
    if xi_X.vars != f.vars:
        raise StructuralError("ξ_X must act on the source variables")
    if len(xi_Y.vars) != f.p:
        raise StructuralError("ξ_Y needs one coefficient per target coordinate")
    if not xi_X.raises_order_by(l) or not xi_Y.raises_order_by(l):
        raise PreconditionError(f"the pair is not in the l = {l} filtration step")
    F = f.field
    N = _tl_terms(f, d, l)
    _require_factorials(F, N)
    T = d + l - 1
    comps = [c.truncate(T) for c in f.components]
    lin_X = [_apply(xi_X, c, T) for c in comps]
    lin_Y = [substitute(cf, comps, T) for cf in xi_Y.coeffs]
    lhs = [a - b for a, b in zip(lin_X, lin_Y)]
    eX = exp_derivation(xi_X, N, T)
    eY = exp_derivation(xi_Y, N, T)
    rhs = [eX.pullback(c, T) - substitute(img, comps, T) for c, img in zip(comps, eY.images)]
    return lhs, rhs


def thom_levine_check(xi_Y: Derivation, xi_X: Derivation, f: MapGerm, d: int, l: int,
                      D: int | None = None) -> bool:
    """Both differences lie in M_d together, and then agree modulo M_{d+l}."""
    lhs, rhs = thom_levine_sides(xi_Y, xi_X, f, d, l)
    in_l = all(p.ord() >= d for p in lhs)
    in_r = all(p.ord() >= d for p in rhs)
    if in_l != in_r:
        return False
    if not in_l:
        return True  # the lemma makes no claim outside M_d
    return all(a == b for a, b in zip(lhs, rhs))


# ---------------------------------------------------------------------------
# liftability of vector fields


def _monomial_str(e, vars) -> str:
    return Poly.monomial(e, vars).__str__()


def lift_exists(J: Poly, xi: Derivation, D: int = 12) -> Decision:
    """Is there φ of order >= ord(ξ)+1 with J(x + ξ(x) + φ) ∈ (J) modulo degree > D?"""
    vars, F = xi.vars, xi.field
    if J.vars != vars or J.field != F:
        raise StructuralError("J and ξ live in different rings")
    n = len(vars)
    xs = Poly.gens(vars, F)
    if not J.terms:
        return Decision.holds(["J = 0: x + ξ(x) itself is admissible"], jet_degree=D)
    Jid = IdealHandle([J], vars, F)
    if not Jid.contains(xi(J)):
        raise PreconditionError(f"ξ is not tangent to (J): ξ(J) = {xi(J)}")
    e0 = int(xi.order()) + 1
    psi0 = [(x + c).truncate(D) for x, c in zip(xs, xi.coeffs)]
    jq = JetQuotient(Jid.basis, D)
    deg = [sum(t[0]) for t in jq.standard]

    def residual(psi) -> dict:
        return jq.reduce({(e, 0): c for e, c in substitute(J, psi, D).terms.items()})

    grads = [substitute(J.diff(i), psi0, D) for i in range(n)]
    unknowns = [(i, e) for i in range(n) for e in monomials_up_to(n, D) if sum(e) >= e0]
    columns = {}
    for u in unknowns:
        i, e = u
        v = jq.reduce({(me, 0): c for me, c in grads[i].mul_monomial(e).truncate(D).terms.items()})
        if v:
            columns[u] = v
    # bound below which the problem is linear in φ
    bound = math.inf
    for total in range(2, J.degree() + 1):
        for gamma in itertools.product(range(total + 1), repeat=n):
            if sum(gamma) != total:
                continue
            h = J.hasse(gamma)
            if h.terms:
                bound = min(bound, h.ord() + total * e0)
    r0 = residual(psi0)
    if not r0:
        return Decision.holds([f"x + ξ(x) already preserves (J) modulo degree > {D}"], jet_degree=D)
    target = {k: F.neg(c) for k, c in r0.items()}
    for d in range(D + 1):
        keep = lambda v: {k: c for k, c in v.items() if deg[k] <= d}
        ech = Echelon(F)
        for v in columns.values():
            w = keep(v)
            if w:
                ech.add(w)
        t = keep(target)
        rem = ech.reduce(t)
        if rem:
            k = min(rem, key=lambda k: (deg[k], k))
            mono = _monomial_str(jq.standard[k][0], vars)
            cert = [f"J(x + ξ(x) + φ) ∉ (J) + m^{d + 1} for every φ of order >= {e0}",
                    f"linearised system obstructed in degree {d} at {mono}"]
            if d < bound:
                cert.append(f"nonlinear terms start in degree {bound} > {d}, so the obstruction is genuine")
                return Decision.fails(cert, jet_degree=d, witness=mono)
            return Decision.inconclusive(cert + [f"nonlinear terms from degree {bound} may interfere"], D,
                                         witness=mono)
    # linear problem solvable through D: iterate corrections until the residual vanishes
    psi = list(psi0)
    ech = Echelon(F, track=True)
    for u, v in columns.items():
        ech.add_tracked(v, u)
    for step in range(2 * D + 2):
        r = residual(psi)
        if not r:
            return Decision.holds(
                [f"explicit lift found after {step} correction steps",
                 "J(x + ξ(x) + φ) ∈ (J) modulo degree > " + str(D)],
                jet_degree=D, witness=tuple(str(p) for p in psi))
        combo: dict = {}
        rem = ech._reduce(r, combo)
        if rem:
            break
        for (i, e), c in combo.items():
            psi[i] = (psi[i] + Poly.monomial(e, vars, F, c)).truncate(D)
    return Decision.inconclusive(["correction iteration did not close the residual"], D)

"""Exact polynomial and jet arithmetic over Q and prime fields.

Elements of the local ring k[x]_(x) (and of its completion, through jets)
are represented by :class:`Poly`: a sparse map from exponent tuples to
nonzero field elements, an ordered variable list, a field descriptor and an
optional truncation degree.  All arithmetic is exact.

The local monomial ordering used throughout the package is the negative
degree reverse lexicographic order: lower total degree is *larger*, ties are
broken by reverse lexicographic comparison in the declared variable order.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

__all__ = [
    "StructuralError",
    "PreconditionError",
    "ParseError",
    "FieldDesc",
    "QQ",
    "Poly",
    "local_key",
    "monomials_up_to",
    "monomials_of_degree",
    "parse_poly",
    "substitute",
    "compose",
    "ift_solve",
    "Derivation",
    "derivation_apply",
    "IdealHandle",
    "ord_wrt_ideal",
    "INFINITY",
]

INFINITY = math.inf

Exps = tuple[int, ...]


class StructuralError(ValueError):
    """Operands live in different rings or have inconsistent shapes."""


class PreconditionError(ValueError):
    """An operation was called outside its mathematical domain."""


class ParseError(ValueError):
    """Text could not be read in the polynomial grammar."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message if position is None else f"{message} (at column {position + 1})")
        self.position = position


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    return all(n % q for q in range(3, r + 1, 2))


@dataclass(frozen=True)
class FieldDesc:
    """Coefficient field: the rationals (characteristic 0) or F_p."""

    characteristic: int = 0

    def __post_init__(self) -> None:
        c = self.characteristic
        if c < 0 or (c != 0 and not _is_prime(c)):
            raise StructuralError(f"characteristic {c} is neither 0 nor prime")

    @classmethod
    def rationals(cls) -> "FieldDesc":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "FieldDesc":
        return cls(p)

    @property
    def kind(self) -> str:
        return "rationals" if self.characteristic == 0 else "prime-field"

    def __str__(self) -> str:
        return "Q" if self.characteristic == 0 else f"Fp {self.characteristic}"

    # element handling -------------------------------------------------
    def __call__(self, value) -> Union[Fraction, int]:
        p = self.characteristic
        if p == 0:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise PreconditionError(f"{value} has no image in F_{p}")
            return value.numerator * pow(value.denominator, -1, p) % p
        return int(value) % p

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        return 1 / Fraction(a) if p == 0 else pow(int(a), -1, p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def add(self, a, b):
        p = self.characteristic
        return a + b if p == 0 else (a + b) % p

    def sub(self, a, b):
        p = self.characteristic
        return a - b if p == 0 else (a - b) % p

    def mul(self, a, b):
        p = self.characteristic
        return a * b if p == 0 else (a * b) % p

    def neg(self, a):
        p = self.characteristic
        return -a if p == 0 else (-a) % p

    def factorial_invertible(self, n: int) -> bool:
        """True when n! is a unit (always in characteristic 0)."""
        return self.characteristic == 0 or n < self.characteristic

    def format(self, a) -> str:
        return str(a)


QQ = FieldDesc(0)


def local_key(exps: Exps) -> tuple:
    """Sort key of a monomial: larger key means larger in the local order."""
    return (-sum(exps),) + tuple(-e for e in reversed(exps))


def monomials_of_degree(n: int, d: int) -> Iterator[Exps]:
    if n == 0:
        if d == 0:
            yield ()
        return
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - first):
            yield (first,) + rest


def monomials_up_to(n: int, d: int) -> list[Exps]:
    """All exponent vectors of total degree <= d, sorted by the local order."""
    out = [m for k in range(d + 1) for m in monomials_of_degree(n, k)]
    out.sort(key=local_key, reverse=True)
    return out


def _min_trunc(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


Scalar = Union[int, Fraction]


class Poly:
    """Sparse polynomial (or jet, when ``trunc`` is set) with exact coefficients.

    Values are treated as immutable.  Equality compares the variable list,
    the field and the stored terms; the truncation degree is metadata.
    """

    __slots__ = ("vars", "field", "terms", "trunc", "_hash")

    def __init__(
        self,
        terms: Mapping[Exps, Scalar] | None,
        vars: Sequence[str],
        field: FieldDesc = QQ,
        trunc: int | None = None,
        *,
        _clean: bool = False,
    ):
        self.vars = tuple(vars)
        self.field = field
        self.trunc = trunc
        self._hash = None
        n = len(self.vars)
        if _clean:
            self.terms = dict(terms) if terms else {}
            return
        clean: dict[Exps, Scalar] = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != n or any(x < 0 for x in e):
                    raise StructuralError(f"exponent {e} does not fit variables {self.vars}")
                if trunc is not None and sum(e) > trunc:
                    continue
                c = field(c)
                if c != 0:
                    clean[e] = field.add(clean.get(e, field.zero), c)
                    if clean[e] == 0:
                        del clean[e]
        self.terms = clean

    # constructors ------------------------------------------------------
    @classmethod
    def zero(cls, vars: Sequence[str], field: FieldDesc = QQ, trunc: int | None = None) -> "Poly":
        return cls({}, vars, field, trunc, _clean=True)

    @classmethod
    def const(cls, c: Scalar, vars: Sequence[str], field: FieldDesc = QQ, trunc: int | None = None) -> "Poly":
        return cls({(0,) * len(vars): c}, vars, field, trunc)

    @classmethod
    def one(cls, vars: Sequence[str], field: FieldDesc = QQ, trunc: int | None = None) -> "Poly":
        return cls.const(1, vars, field, trunc)

    @classmethod
    def var(cls, name_or_index: Union[str, int], vars: Sequence[str], field: FieldDesc = QQ,
            trunc: int | None = None) -> "Poly":
        vars = tuple(vars)
        i = vars.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        e = [0] * len(vars)
        e[i] = 1
        return cls({tuple(e): 1}, vars, field, trunc)

    @classmethod
    def monomial(cls, exps: Exps, vars: Sequence[str], field: FieldDesc = QQ, coeff: Scalar = 1,
                 trunc: int | None = None) -> "Poly":
        return cls({tuple(exps): coeff}, vars, field, trunc)

    @classmethod
    def gens(cls, vars: Sequence[str], field: FieldDesc = QQ) -> list["Poly"]:
        return [cls.var(i, vars, field) for i in range(len(vars))]

    # basic queries -----------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coeff(self, exps: Exps) -> Scalar:
        return self.terms.get(tuple(exps), self.field.zero)

    def constant_term(self) -> Scalar:
        return self.coeff((0,) * self.nvars)

    def degree(self) -> int:
        """Largest total degree of a stored term (-1 for zero)."""
        return max((sum(e) for e in self.terms), default=-1)

    def ord(self) -> Union[int, float]:
        """Lowest total degree of a term, i.e. the m-adic order (inf for zero)."""
        return min((sum(e) for e in self.terms), default=INFINITY)

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly({e: c for e, c in self.terms.items() if sum(e) == d}, self.vars, self.field,
                    self.trunc, _clean=True)

    def lowest_form(self) -> "Poly":
        return self.homogeneous_part(self.ord()) if self.terms else self

    def sorted_terms(self) -> list[tuple[Exps, Scalar]]:
        """Terms from largest to smallest in the local order."""
        return sorted(self.terms.items(), key=lambda t: local_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[Exps, Scalar]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=local_key)
        return e, self.terms[e]

    def truncate(self, D: int | None) -> "Poly":
        if D is None:
            return Poly(self.terms, self.vars, self.field, self.trunc, _clean=True)
        D = D if self.trunc is None else min(D, self.trunc)
        return Poly({e: c for e, c in self.terms.items() if sum(e) <= D}, self.vars, self.field, D,
                    _clean=True)

    def untruncated(self) -> "Poly":
        return Poly(self.terms, self.vars, self.field, None, _clean=True)

    def with_vars(self, vars: Sequence[str]) -> "Poly":
        """Same terms read in a ring with the given variable names (same count)."""
        if len(vars) != self.nvars:
            raise StructuralError("variable count mismatch")
        return Poly(self.terms, vars, self.field, self.trunc, _clean=True)

    def embed(self, vars: Sequence[str], positions: Sequence[int]) -> "Poly":
        """Move into a larger ring; variable i goes to position positions[i]."""
        n = len(vars)
        out = {}
        for e, c in self.terms.items():
            new = [0] * n
            for i, k in enumerate(positions):
                new[k] = e[i]
            out[tuple(new)] = c
        return Poly(out, vars, self.field, self.trunc, _clean=True)

    # arithmetic --------------------------------------------------------
    def _check(self, other: "Poly") -> None:
        if self.vars != other.vars or self.field != other.field:
            raise StructuralError(
                f"incompatible operands: {self.vars}/{self.field} vs {other.vars}/{other.field}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other, self.vars, self.field)
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        T = _min_trunc(self.trunc, other.trunc)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = F.add(out.get(e, F.zero), c)
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        if T is not None:
            out = {e: c for e, c in out.items() if sum(e) <= T}
        return Poly(out, self.vars, F, T, _clean=True)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        F = self.field
        return Poly({e: F.neg(c) for e, c in self.terms.items()}, self.vars, F, self.trunc, _clean=True)

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: Scalar) -> "Poly":
        F = self.field
        c = F(c)
        if c == 0:
            return Poly.zero(self.vars, F, self.trunc)
        return Poly({e: F.mul(a, c) for e, a in self.terms.items()}, self.vars, F, self.trunc, _clean=True)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _mul(self, other, _min_trunc(self.trunc, other.trunc))

    def __rmul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def mul_trunc(self, other: "Poly", D: int | None) -> "Poly":
        """Product truncated at degree D (on top of the operands' own truncation)."""
        self._check(other)
        return _mul(self, other, _min_trunc(_min_trunc(self.trunc, other.trunc), D))

    def __pow__(self, k: int) -> "Poly":
        return self.pow_trunc(k, None)

    def pow_trunc(self, k: int, D: int | None) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.one(self.vars, self.field, _min_trunc(self.trunc, D))
        base = self
        while k:
            if k & 1:
                result = result.mul_trunc(base, D)
            k >>= 1
            if k:
                base = base.mul_trunc(base, D)
        return result

    def mul_monomial(self, exps: Exps, c: Scalar = 1) -> "Poly":
        F = self.field
        c = F(c)
        T = self.trunc
        out = {}
        for e, a in self.terms.items():
            ne = tuple(x + y for x, y in zip(e, exps))
            if T is not None and sum(ne) > T:
                continue
            out[ne] = F.mul(a, c)
        return Poly(out, self.vars, F, T, _clean=True)

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.terms.keys() - {(0,) * other.nvars}:
                raise PreconditionError("division only by nonzero constants")
            other = other.constant_term()
        if other == 0:
            raise ZeroDivisionError("division by zero")
        return self.scale(self.field.inv(self.field(other)))

    def diff(self, i: int) -> "Poly":
        """Partial derivative in variable i; p-th powers have zero derivative in char p."""
        F = self.field
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k == 0:
                continue
            v = F.mul(c, F(k))
            if v == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = v
        T = None if self.trunc is None else self.trunc - 1
        return Poly(out, self.vars, F, T, _clean=True)

    def hasse(self, gamma: Exps) -> "Poly":
        """Hasse derivative: coefficient-wise binomial(e, gamma) x^(e - gamma)."""
        F = self.field
        out = {}
        for e, c in self.terms.items():
            if any(a < g for a, g in zip(e, gamma)):
                continue
            b = 1
            for a, g in zip(e, gamma):
                b *= math.comb(a, g)
            v = F.mul(c, F(b))
            if v != 0:
                out[tuple(a - g for a, g in zip(e, gamma))] = v
        return Poly(out, self.vars, F, None, _clean=True)

    def is_weighted_homogeneous(self, weights: Sequence[int]) -> int | None:
        """Weighted degree if homogeneous for the weights, else None (zero gives None)."""
        degs = {sum(w * a for w, a in zip(weights, e)) for e in self.terms}
        return degs.pop() if len(degs) == 1 else None

    # comparison & hashing ---------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other, self.vars, self.field)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.vars == other.vars and self.field == other.field and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, self.field, frozenset(self.terms.items())))
        return self._hash

    # printing ----------------------------------------------------------
    def _monomial_str(self, e: Exps) -> str:
        parts = []
        for name, k in zip(self.vars, e):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for e, c in self.sorted_terms():
            neg = self.field.characteristic == 0 and c < 0
            a = -c if neg else c
            mono = self._monomial_str(e)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            chunks.append(("-" if neg else "+", body))
        out = ("-" if chunks[0][0] == "-" else "") + chunks[0][1]
        for sign, body in chunks[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        t = "" if self.trunc is None else f", trunc={self.trunc}"
        return f"Poly({str(self)!r}, vars={self.vars}, field={self.field}{t})"


def _mul(a: Poly, b: Poly, T: int | None) -> Poly:
    F = a.field
    p = F.characteristic
    out: dict[Exps, Scalar] = {}
    if len(a.terms) > len(b.terms):
        a, b = b, a
    bt = list(b.terms.items())
    if T is not None:
        bt = [(e, c, sum(e)) for e, c in bt]
    for ea, ca in a.terms.items():
        if T is None:
            for eb, cb in bt:
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        else:
            da = sum(ea)
            if da > T:
                continue
            for eb, cb, db in bt:
                if da + db > T:
                    continue
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
    if p:
        out = {e: c % p for e, c in out.items() if c % p}
    else:
        out = {e: c for e, c in out.items() if c}
    return Poly(out, a.vars, F, T, _clean=True)


# ----------------------------------------------------------------------------
# parsing


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("num", m.group(1), start))
        elif m.group(2):
            out.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            out.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, vars: Sequence[str], field: FieldDesc):
        self.toks = _tokenize(text)
        self.i = 0
        self.vars = tuple(vars)
        self.field = field
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input", len(self.text))
        self.i += 1
        return t

    def parse(self) -> Poly:
        if not self.toks:
            raise ParseError("empty polynomial", 0)
        p = self.expr()
        t = self.peek()
        if t is not None:
            raise ParseError(f"unexpected token {t[1]!r}", t[2])
        return p

    def expr(self) -> Poly:
        p = self.term()
        while (t := self.peek()) is not None and t[0] == "op" and t[1] in "+-":
            self.take()
            q = self.term()
            p = p + q if t[1] == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.unary()
        while (t := self.peek()) is not None and t[0] == "op" and t[1] in "*/":
            self.take()
            q = self.unary()
            if t[1] == "*":
                p = p * q
            else:
                if q.terms.keys() - {(0,) * len(self.vars)} or not q.terms:
                    raise ParseError("division only by nonzero constants", t[2])
                p = p / q
        return p

    def unary(self) -> Poly:
        t = self.peek()
        if t is not None and t[0] == "op" and t[1] in "+-":
            self.take()
            p = self.unary()
            return -p if t[1] == "-" else p
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        t = self.peek()
        if t is not None and t[0] == "op" and t[1] == "^":
            self.take()
            e = self.take()
            if e[0] != "num":
                raise ParseError("exponent must be a natural number", e[2])
            return base ** int(e[1])
        return base

    def atom(self) -> Poly:
        t = self.take()
        kind, val, pos = t
        if kind == "num":
            return Poly.const(int(val), self.vars, self.field)
        if kind == "name":
            if val not in self.vars:
                raise ParseError(f"unknown variable {val!r}", pos)
            return Poly.var(val, self.vars, self.field)
        if val == "(":
            p = self.expr()
            close = self.take()
            if close[1] != ")":
                raise ParseError("expected ')'", close[2])
            return p
        raise ParseError(f"unexpected token {val!r}", pos)


def parse_poly(text: str, vars: Sequence[str], field: FieldDesc = QQ) -> Poly:
    """Read a polynomial such as ``x1^3 + 2*x1*x2^2 - 1/3*x2^5``."""
    return _Parser(text, vars, field).parse()


# ----------------------------------------------------------------------------
# composition


def compose(f: Poly, args: Sequence[Poly], D: int | None = None) -> Poly:
    """f(args) truncated at D; arguments may have constant terms."""
    if len(args) != f.nvars:
        raise StructuralError(f"{f.nvars} arguments expected, got {len(args)}")
    if not args:
        raise StructuralError("composition needs at least one argument ring")
    ring = args[0]
    for a in args:
        ring._check(a)
    F = ring.field
    if f.field != F:
        raise StructuralError("field mismatch in composition")
    T = D
    for a in args:
        T = _min_trunc(T, a.trunc)
    T = _min_trunc(T, f.trunc) if all(a.constant_term() == 0 for a in args) else T
    powers: list[dict[int, Poly]] = [{0: Poly.one(ring.vars, F, T)} for _ in args]

    def power(i: int, k: int) -> Poly:
        cache = powers[i]
        if k not in cache:
            j = max(x for x in cache if x < k)
            cur = cache[j]
            for m in range(j + 1, k + 1):
                cur = cur.mul_trunc(args[i], T)
                cache[m] = cur
        return cache[k]

    acc: dict[Exps, Scalar] = {}
    for e, c in f.terms.items():
        term = Poly.const(c, ring.vars, F, T)
        for i, k in enumerate(e):
            if k:
                term = term.mul_trunc(power(i, k), T)
                if not term.terms:
                    break
        for me, mc in term.terms.items():
            v = F.add(acc.get(me, F.zero), mc)
            if v == 0:
                acc.pop(me, None)
            else:
                acc[me] = v
    return Poly(acc, ring.vars, F, T, _clean=True)


def substitute(f: Poly, args: Sequence[Poly], D: int | None = None) -> Poly:
    """Composition f(args) mod degree > D; every argument must lie in the maximal ideal."""
    for a in args:
        if a.constant_term() != 0:
            raise PreconditionError(f"argument {a} has a nonzero constant term")
    return compose(f, args, D)


def ift_solve(c: Sequence[Poly], h: Sequence[Poly], D: int) -> list[Poly]:
    """Solve z = c + h(x, z) order by order modulo degree > D.

    ``c`` lives in variables x; ``h`` lives in the variable list x followed by
    one variable per unknown.  The iteration gains order when ``c`` and the
    z-free part of ``h`` lie in m and the z-linear part of ``h`` has
    coefficients in m.
    """
    if len(c) != len(h) or not c:
        raise StructuralError("one equation per unknown is required")
    xvars = c[0].vars
    n, q = len(xvars), len(c)
    for hi in h:
        if hi.nvars != n + q or hi.vars[:n] != xvars:
            raise StructuralError("h must live in the variables x followed by z")
    for ci in c:
        if ci.constant_term() != 0:
            raise PreconditionError("the inhomogeneous part c must lie in the maximal ideal")
    for hi in h:
        for e in hi.terms:
            if sum(e[:n]) == 0 and sum(e[n:]) <= 1:
                raise PreconditionError(
                    f"h contains the term {hi._monomial_str(e) or '1'} with unit coefficient; "
                    "the iteration z <- c + h(z) would not gain order")
    xs = Poly.gens(xvars, c[0].field)
    z = [ci.truncate(D) for ci in c]
    for _ in range(D + 2):
        znew = [(ci + compose(hi, xs + z, D)).truncate(D) for ci, hi in zip(c, h)]
        if znew == z:
            return znew
        z = znew
    raise PreconditionError("fixed-point iteration did not stabilise")  # pragma: no cover


# ----------------------------------------------------------------------------
# derivations


class Derivation:
    """Vector field sum_i c_i d/dx_i with polynomial coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Poly]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise StructuralError("a derivation needs at least one variable")
        for cf in coeffs:
            coeffs[0]._check(cf)
        if len(coeffs) != coeffs[0].nvars:
            raise StructuralError("one coefficient per variable is required")
        self.coeffs = coeffs

    @classmethod
    def from_strings(cls, texts: Sequence[str], vars: Sequence[str], field: FieldDesc = QQ) -> "Derivation":
        return cls([parse_poly(t, vars, field) for t in texts])

    @classmethod
    def zero(cls, vars: Sequence[str], field: FieldDesc = QQ) -> "Derivation":
        return cls([Poly.zero(vars, field) for _ in vars])

    @property
    def vars(self) -> tuple[str, ...]:
        return self.coeffs[0].vars

    @property
    def field(self) -> FieldDesc:
        return self.coeffs[0].field

    def __call__(self, f):
        return derivation_apply(self, f)

    def apply_trunc(self, f: Poly, D: int | None) -> Poly:
        acc = Poly.zero(f.vars, f.field, D)
        for i, cf in enumerate(self.coeffs):
            if cf.terms:
                df = f.diff(i)
                if df.terms:
                    acc = acc + cf.mul_trunc(df, D)
        return acc

    def order(self) -> Union[int, float]:
        """Smallest m-adic order among the coefficients."""
        return min(cf.ord() for cf in self.coeffs)

    def raises_order_by(self, j: int) -> bool:
        """Membership in the j-th filtration step for the maximal ideal (coefficients in m^(j+1))."""
        return all(cf.ord() >= j + 1 for cf in self.coeffs)

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "Derivation") -> "Derivation":
        return Derivation([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "Derivation":
        return Derivation([-a for a in self.coeffs])

    def scale(self, c: Scalar) -> "Derivation":
        return Derivation([a.scale(c) for a in self.coeffs])

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def truncate(self, D: int | None) -> "Derivation":
        return Derivation([a.truncate(D) for a in self.coeffs])

    def untruncated(self) -> "Derivation":
        return Derivation([a.untruncated() for a in self.coeffs])

    def bracket(self, other: "Derivation", D: int | None = None) -> "Derivation":
        """Commutator [self, other] = self∘other - other∘self."""
        return Derivation([
            self.apply_trunc(b, D) - other.apply_trunc(a, D)
            for a, b in zip(self.coeffs, other.coeffs)
        ])

    def is_zero(self) -> bool:
        return all(not c.terms for c in self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Derivation) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __str__(self) -> str:
        parts = [f"({c})*d/d{v}" for c, v in zip(self.coeffs, self.vars) if c.terms]
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"Derivation({self})"


def derivation_apply(xi: Derivation, f):
    """xi(f) for a polynomial or componentwise for a sequence of polynomials."""
    if isinstance(f, Poly):
        if f.vars != xi.vars or f.field != xi.field:
            raise StructuralError("derivation and polynomial live in different rings")
        return xi.apply_trunc(f, f.trunc)
    return type(f)(derivation_apply(xi, g) for g in f) if isinstance(f, tuple) else [
        derivation_apply(xi, g) for g in f]


# ----------------------------------------------------------------------------
# ideals


class IdealHandle:
    """An ideal of the local ring, given by generators, with a cached standard basis."""

    def __init__(self, generators: Iterable[Poly], vars: Sequence[str] | None = None,
                 field: FieldDesc | None = None):
        gens = [g.untruncated() for g in generators if g.terms]
        if gens:
            self.vars = gens[0].vars
            self.field = gens[0].field
            for g in gens:
                gens[0]._check(g)
        else:
            if vars is None:
                raise StructuralError("the zero ideal needs an explicit ring")
            self.vars = tuple(vars)
            self.field = field if field is not None else QQ
        self.generators: tuple[Poly, ...] = tuple(gens)
        self._basis = None

    @classmethod
    def maximal(cls, vars: Sequence[str], field: FieldDesc = QQ) -> "IdealHandle":
        return cls(Poly.gens(vars, field))

    @classmethod
    def unit(cls, vars: Sequence[str], field: FieldDesc = QQ) -> "IdealHandle":
        return cls([Poly.one(vars, field)])

    @classmethod
    def zero(cls, vars: Sequence[str], field: FieldDesc = QQ) -> "IdealHandle":
        return cls([], vars, field)

    @classmethod
    def from_strings(cls, texts: Sequence[str], vars: Sequence[str], field: FieldDesc = QQ) -> "IdealHandle":
        return cls([parse_poly(t, vars, field) for t in texts], vars, field)

    @property
    def basis(self):
        """Standard basis as a rank-one submodule (computed on first use)."""
        if self._basis is None:
            from .std_basis import ModuleElement, std_basis
            self._basis = std_basis([ModuleElement([g]) for g in self.generators],
                                    rank=1, vars=self.vars, field=self.field)
        return self._basis

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return any(g.constant_term() != 0 for g in self.generators) or self.basis.is_full()

    def contains(self, f: Poly) -> bool:
        from .std_basis import ModuleElement
        return self.basis.contains(ModuleElement([f]))

    def contains_ideal(self, other: "IdealHandle") -> bool:
        return all(self.contains(g) for g in other.generators)

    def same_as(self, other: "IdealHandle") -> bool:
        return self.contains_ideal(other) and other.contains_ideal(self)

    def in_power_of_max(self, k: int) -> bool:
        """True when every generator has m-adic order >= k."""
        return all(g.ord() >= k for g in self.generators)

    def canonical_generators(self) -> list[Poly]:
        from .std_basis import canonical_ideal_generators
        return canonical_ideal_generators(self)

    def serialize(self) -> list[str]:
        return sorted(str(g) for g in self.canonical_generators())

    def __mul__(self, other: "IdealHandle") -> "IdealHandle":
        return IdealHandle([a * b for a in self.generators for b in other.generators], self.vars, self.field)

    def __add__(self, other: "IdealHandle") -> "IdealHandle":
        return IdealHandle(list(self.generators) + list(other.generators), self.vars, self.field)

    def __pow__(self, k: int) -> "IdealHandle":
        if k == 0:
            return IdealHandle.unit(self.vars, self.field)
        out = self
        for _ in range(k - 1):
            out = out * self
        return out.minimized()

    def minimized(self) -> "IdealHandle":
        """Drop duplicate generators (cheap, keeps the same ideal)."""
        seen, gens = set(), []
        for g in self.generators:
            if g not in seen:
                seen.add(g)
                gens.append(g)
        return IdealHandle(gens, self.vars, self.field)

    def __str__(self) -> str:
        gens = self.serialize()
        return "(" + ", ".join(gens) + ")" if gens else "(0)"

    def __repr__(self) -> str:
        return f"IdealHandle{self}"


def ord_wrt_ideal(f: Union[Poly, Sequence[Poly]], I: IdealHandle | None = None) -> Union[int, float]:
    """Largest d with f in I^d (componentwise minimum for vectors); inf for f = 0 or I = R."""
    polys = [f] if isinstance(f, Poly) else list(f)
    polys = [g for g in polys if g.terms]
    if not polys:
        return INFINITY
    if I is None:
        return min(g.ord() for g in polys)
    if I.is_unit():
        return INFINITY
    if all(g.ord() >= 1 for g in I.generators) and \
            all(I.contains(x) for x in Poly.gens(I.vars, I.field)):
        return min(g.ord() for g in polys)  # I is the maximal ideal
    d, power = 0, IdealHandle.unit(I.vars, I.field)
    bound = min(g.ord() for g in polys)
    while d <= bound:
        nxt = power * I
        if not all(nxt.contains(g) for g in polys):
            return d
        d, power = d + 1, nxt
    return d  # pragma: no cover  (I inside m forces the loop to stop)

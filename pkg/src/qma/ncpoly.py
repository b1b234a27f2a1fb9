"""Noncommutative algebras given by ordered generators and rewrite rules.

A normal monomial is a tuple of ``(generator index, exponent)`` pairs with
strictly increasing indices; exponents are positive, or nonzero for invertible
generators.  Rules rewrite an out-of-order pair of letters ``h^s g^t``
(``h > g``, ``s, t = +-1``) into a combination of normal monomials.  Products of
normal monomials are computed letter by letter and memoized.

Rules involving inverse letters are derived on demand from the rule for the
positive letters by two-sided cancellation:

    h g = c g h + r   =>   h g^-1 = c^-1 (g^-1 h - g^-1 r g^-1)
                           h^-1 g = c^-1 (g h^-1 - h^-1 r h^-1)
"""

from __future__ import annotations

import random
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .cartan import CartanData
from .report import VerificationReport
from .scalar import ONE, ZERO, RatFunc, qp

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

Monomial = tuple


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class GenDecl:
    name: str
    weight: tuple
    invertible: bool = False
    degree: int = 1
    grade: tuple | None = None


def _acc(d: dict, m, c) -> None:
    old = d.get(m)
    if old is None:
        d[m] = c
    else:
        new = old + c
        if new:
            d[m] = new
        else:
            del d[m]


def add_terms(*ts) -> dict:
    out = {}
    for t in ts:
        for m, c in t.items():
            _acc(out, m, c)
    return out


def scale_terms(t: dict, c) -> dict:
    if not c:
        return {}
    if c == ONE:
        return dict(t)
    return {m: x * c for m, x in t.items()}


def sub_terms(a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        _acc(out, m, -c)
    return out


def to_scalar(c) -> RatFunc:
    if isinstance(c, RatFunc):
        return c
    return RatFunc.const(c)


class Presentation:
    """An algebra over Q(q) by generators and rewrite rules."""

    def __init__(self, name: str, cartan: CartanData, gens: list[GenDecl]):
        self.name = name
        self.cartan = cartan
        self.gens = list(gens)
        self.index = {}
        for k, g in enumerate(self.gens):
            if g.name in self.index:
                raise PresentationError(f"duplicate generator {g.name}")
            if g.name == "q":
                raise PresentationError("'q' is reserved for the scalar")
            self.index[g.name] = k
        self.rules: dict = {}
        self.rule_log: list = []
        self.aliases: dict[str, dict] = {}
        self.definitions: dict[str, "NcPoly"] = {}
        self.confluence_certified_degree = 0
        self.meta: dict = {}
        self._mul_cache: dict = {}
        self._swap_cache: dict = {}
        self._weights = [tuple(g.weight) for g in self.gens]
        self._grades = [tuple(g.grade) if g.grade is not None else tuple(g.weight) for g in self.gens]
        self._wcache: dict = {}

    # ------------------------------------------------------------------
    # construction helpers
    def mono(self, *spec) -> Monomial:
        """mono('x1', 2, 'x2', 1) or mono(('x1', 2), ('x2', 1)) -> normal monomial.

        The letters must already be in normal order.
        """
        pairs = []
        if spec and isinstance(spec[0], tuple):
            pairs = list(spec)
        else:
            it = iter(spec)
            pairs = list(zip(it, it))
        out = []
        last = -1
        for name, e in pairs:
            if e == 0:
                continue
            k = self.index[name]
            if k <= last:
                raise PresentationError("mono() letters must be in normal order")
            if e < 0 and not self.gens[k].invertible:
                raise PresentationError(f"{name} is not invertible")
            out.append((k, e))
            last = k
        return tuple(out)

    def gen(self, name: str) -> "NcPoly":
        if name in self.index:
            return NcPoly(self, {((self.index[name], 1),): ONE})
        if name in self.aliases:
            return NcPoly(self, dict(self.aliases[name]))
        raise PresentationError(f"unknown generator {name!r} in {self.name}")

    def letter(self, name: str, e: int = 1) -> "NcPoly":
        k = self.index[name]
        if e < 0 and not self.gens[k].invertible:
            raise PresentationError(f"{name} is not invertible")
        return NcPoly(self, {((k, e),): ONE} if e else {(): ONE})

    def one(self) -> "NcPoly":
        return NcPoly(self, {(): ONE})

    def zero(self) -> "NcPoly":
        return NcPoly(self, {})

    def scalar(self, c) -> "NcPoly":
        c = to_scalar(c)
        return NcPoly(self, {(): c} if c else {})

    def poly(self, terms: dict) -> "NcPoly":
        return NcPoly(self, {m: to_scalar(c) for m, c in terms.items() if c})

    def add_rule(self, b: str, a: str, rhs, sb: int = 1, sa: int = 1) -> None:
        """Install the rule  b^sb a^sa -> rhs  (b after a in generator order)."""
        kb, ka = self.index[b], self.index[a]
        if kb <= ka:
            raise PresentationError(f"rule lhs {b}*{a} is not out of order")
        terms = rhs.terms if isinstance(rhs, NcPoly) else {m: to_scalar(c) for m, c in rhs.items()}
        lhs_w = self._wsum(((ka, sa), (kb, sb)))
        for m in terms:
            if self.weight_of(m) != lhs_w:
                raise PresentationError(
                    f"rule {b}*{a} is not weight-homogeneous: {self.mono_str(m)}"
                )
        key = (kb, sb, ka, sa)
        self.rule_log.append((key, dict(terms)))
        self.rules.setdefault(key, dict(terms))
        self._mul_cache.clear()
        self._swap_cache.clear()

    def add_alias(self, name: str, value: "NcPoly") -> None:
        self.aliases[name] = dict(value.terms)

    def define(self, name: str, value: "NcPoly") -> None:
        """Record the expression a composite generator stands for."""
        self.definitions[name] = value

    # ------------------------------------------------------------------
    # gradings
    def _wsum(self, m, vecs=None):
        vecs = self._weights if vecs is None else vecs
        r = len(vecs[0]) if vecs else 0
        out = [0] * r
        for k, e in m:
            v = vecs[k]
            for j in range(r):
                if v[j]:
                    out[j] += e * v[j]
        return tuple(_norm(x) for x in out)

    def weight_of(self, m: Monomial) -> tuple:
        w = self._wcache.get(m)
        if w is None:
            w = self._wsum(m) if m else self.cartan.zero()
            self._wcache[m] = w
        return w

    def grade_of(self, m: Monomial) -> tuple:
        if not self._grades:
            return ()
        return self._wsum(m, self._grades)

    def degree_of(self, m: Monomial) -> int:
        return sum(abs(e) * self.gens[k].degree for k, e in m)

    def mono_key(self, m: Monomial):
        """Monomial order: total degree, then reverse-lexicographic exponents."""
        exps = [0] * len(self.gens)
        for k, e in m:
            exps[k] = e
        return (self.degree_of(m), tuple(-x for x in reversed(exps)))

    # ------------------------------------------------------------------
    # rules
    def rule(self, h: int, s: int, g: int, t: int) -> dict:
        key = (h, s, g, t)
        r = self.rules.get(key)
        if r is not None:
            return r
        r = self._derive_rule(h, s, g, t)
        self.rules[key] = r
        return r

    def _derive_rule(self, h, s, g, t) -> dict:
        gh, gg = self.gens[h], self.gens[g]
        if t == -1:
            if not gg.invertible:
                raise PresentationError(f"{gg.name} is not invertible")
            base = self.rule(h, s, g, 1)
            lead = ((g, 1), (h, s))
            c = base.get(lead)
            if c is None:
                raise PresentationError(
                    f"cannot invert: rule {gh.name}^{s}*{gg.name} has no leading term"
                )
            rest = {m: x for m, x in base.items() if m != lead}
            ginv = {((g, -1),): ONE}
            inner = self.mul_terms(self.mul_terms(ginv, rest), ginv)
            out = {((g, -1), (h, s)): c.inv()}
            for m, x in inner.items():
                _acc(out, m, -x / c)
            return out
        if s == -1:
            if not gh.invertible:
                raise PresentationError(f"{gh.name} is not invertible")
            base = self.rule(h, 1, g, t)
            lead = ((g, t), (h, 1))
            c = base.get(lead)
            if c is None:
                raise PresentationError(
                    f"cannot invert: rule {gh.name}*{gg.name} has no leading term"
                )
            rest = {m: x for m, x in base.items() if m != lead}
            hinv = {((h, -1),): ONE}
            inner = self.mul_terms(self.mul_terms(hinv, rest), hinv)
            out = {((g, t), (h, -1)): c.inv()}
            for m, x in inner.items():
                _acc(out, m, -x / c)
            return out
        raise PresentationError(f"missing rule for {gh.name}*{gg.name}")

    # ------------------------------------------------------------------
    # multiplication
    def mul_mono(self, m1: Monomial, m2: Monomial) -> dict:
        if not m1:
            return {m2: ONE}
        if not m2:
            return {m1: ONE}
        key = (m1, m2)
        cache = self._mul_cache
        res = cache.get(key)
        if res is not None:
            return res
        h, f = m1[-1]
        g, e = m2[0]
        if h < g:
            res = {m1 + m2: ONE}
        elif h == g:
            s = f + e
            if s:
                res = {m1[:-1] + ((h, s),) + m2[1:]: ONE}
            else:
                res = self.mul_mono(m1[:-1], m2[1:])
        else:
            res = {}
            left, right = m1[:-1], m2[1:]
            for mono, c in self._swap(h, f, g, e).items():
                for mono2, c2 in self.mul_mono(left, mono).items():
                    cc = c * c2
                    for mono3, c3 in self.mul_mono(mono2, right).items():
                        _acc(res, mono3, cc * c3)
        cache[key] = res
        return res

    def _swap(self, h, f, g, e) -> dict:
        """Normal form of h^f g^e with h > g."""
        key = (h, f, g, e)
        res = self._swap_cache.get(key)
        if res is not None:
            return res
        if abs(f) > 1:
            s = 1 if f > 0 else -1
            res = {}
            for mono, c in self._swap(h, f - s, g, e).items():
                for mono2, c2 in self.mul_mono(((h, s),), mono).items():
                    _acc(res, mono2, c * c2)
        elif abs(e) > 1:
            t = 1 if e > 0 else -1
            res = {}
            tail = ((g, e - t),)
            for mono, c in self._swap(h, f, g, t).items():
                for mono2, c2 in self.mul_mono(mono, tail).items():
                    _acc(res, mono2, c * c2)
        else:
            res = self.rule(h, f, g, e)
        self._swap_cache[key] = res
        return res

    def mul_terms(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                c = c1 * c2
                for m, x in self.mul_mono(m1, m2).items():
                    _acc(out, m, c * x)
        return out

    def normal_form(self, word) -> "NcPoly":
        """Normal form of a raw word: a sequence of names or (name, exp) pairs,
        optionally preceded by a scalar coefficient."""
        coeff = ONE
        res = {(): ONE}
        for item in word:
            if isinstance(item, (RatFunc, int, Fraction)):
                coeff = coeff * to_scalar(item)
                continue
            name, e = (item, 1) if isinstance(item, str) else item
            k = self.index[name]
            if e < 0 and not self.gens[k].invertible:
                raise PresentationError(f"{name} is not invertible")
            res = self.mul_terms(res, {((k, e),): ONE})
        return NcPoly(self, scale_terms(res, coeff))

    def inverse_mono(self, m: Monomial) -> dict:
        res = {(): ONE}
        for k, e in reversed(m):
            if not self.gens[k].invertible:
                raise PresentationError(f"{self.gens[k].name} is not invertible")
            res = self.mul_terms(res, {((k, -e),): ONE})
        return res

    def clear_caches(self) -> None:
        self._mul_cache.clear()
        self._swap_cache.clear()

    # ------------------------------------------------------------------
    # enumeration
    def graded_basis(self, deg: int) -> list[Monomial]:
        """All normal monomials of formal degree exactly ``deg``."""
        out = []
        n = len(self.gens)

        def rec(k, remaining, acc):
            if k == n:
                if remaining == 0:
                    out.append(tuple(acc))
                return
            g = self.gens[k]
            dg = g.degree
            maxe = remaining // dg
            exps = range(-maxe, maxe + 1) if g.invertible else range(0, maxe + 1)
            for e in exps:
                rem = remaining - abs(e) * dg
                if e:
                    acc.append((k, e))
                rec(k + 1, rem, acc)
                if e:
                    acc.pop()

        rec(0, deg, [])
        out.sort(key=self.mono_key)
        return out

    def basis_upto(self, deg: int) -> list[Monomial]:
        out = []
        for d in range(deg + 1):
            out.extend(self.graded_basis(d))
        return out

    @property
    def has_invertibles(self) -> bool:
        return any(g.invertible for g in self.gens)

    # ------------------------------------------------------------------
    # rendering and parsing
    def mono_str(self, m: Monomial) -> str:
        if not m:
            return "1"
        parts = []
        for k, e in m:
            name = self.gens[k].name
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def parse(self, text: str) -> "NcPoly":
        return parse_expr(text, self)

    def __repr__(self):
        return f"Presentation({self.name})"


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


class NcPoly:
    """An element of a Presentation: normal monomial -> RatFunc."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: Presentation, terms: dict):
        self.alg = alg
        self.terms = terms

    def _check(self, other: "NcPoly"):
        if other.alg is not self.alg:
            raise PresentationError(
                f"mixed presentations: {self.alg.name} and {other.alg.name}"
            )

    def _lift(self, other):
        if isinstance(other, NcPoly):
            self._check(other)
            return other
        if isinstance(other, (RatFunc, int, Fraction)):
            return self.alg.scalar(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return NcPoly(self.alg, add_terms(self.terms, o.terms))

    __radd__ = __add__

    def __neg__(self):
        return NcPoly(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return NcPoly(self.alg, sub_terms(self.terms, o.terms))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, NcPoly):
            self._check(other)
            return NcPoly(self.alg, self.alg.mul_terms(self.terms, other.terms))
        if isinstance(other, (RatFunc, int, Fraction)):
            return NcPoly(self.alg, scale_terms(self.terms, to_scalar(other)))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (RatFunc, int, Fraction)):
            return NcPoly(self.alg, scale_terms(self.terms, to_scalar(other)))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (RatFunc, int, Fraction)):
            return self * to_scalar(other).inv()
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1:
                raise PresentationError("only monomials can be inverted")
            (m, c), = self.terms.items()
            return NcPoly(self.alg, scale_terms(self.alg.inverse_mono(m), c.inv())) ** (-n)
        out = self.alg.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, NcPoly) else other
        if o is None:
            return NotImplemented
        return o.alg is self.alg and o.terms == self.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, m: Monomial) -> RatFunc:
        return self.terms.get(m, ZERO)

    def constant(self) -> RatFunc:
        return self.terms.get((), ZERO)

    def is_scalar(self) -> bool:
        return all(m == () for m in self.terms)

    def weights(self) -> set:
        return {self.alg.weight_of(m) for m in self.terms}

    def weight(self):
        ws = self.weights()
        if len(ws) != 1:
            raise PresentationError("element is not weight-homogeneous")
        return next(iter(ws))

    def degree(self) -> int:
        return max((self.alg.degree_of(m) for m in self.terms), default=0)

    def __str__(self):
        if not self.terms:
            return "0"
        alg = self.alg
        items = sorted(self.terms.items(), key=lambda kv: alg.mono_key(kv[0]), reverse=True)
        out = []
        for m, c in items:
            ms = alg.mono_str(m)
            cs = str(c)
            neg = False
            if c.is_laurent() and len(c.laurent_coeffs()) == 1:
                (e, v), = c.laurent_coeffs().items()
                if v < 0:
                    neg = True
                    cs = str(-c)
            elif not c.is_laurent() or len(c.laurent_coeffs()) > 1:
                cs = f"({cs})"
            if m == ():
                body = cs
            elif cs == "1":
                body = ms
            else:
                body = f"{cs}*{ms}"
            out.append(("-" if neg else "+", body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"NcPoly({self})"


# ----------------------------------------------------------------------
# expression parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class ParseError(ValueError):
    def __init__(self, msg, pos, text):
        super().__init__(f"{msg} at position {pos}: {text!r}")
        self.pos = pos


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("id", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3), text)
            toks.append((ch, ch, m.start(3)))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text, alg):
        self.text = text
        self.alg = alg
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        t = self.toks[self.i]
        if kind is not None and t[0] != kind:
            raise ParseError(f"expected {kind!r}, found {t[1]!r}", t[2], self.text)
        self.i += 1
        return t

    def expr(self):
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        val = self.term()
        if sign < 0:
            val = -val
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            val = val + t if op == "+" else val - t
        return val

    def term(self):
        val = self.factor()
        while True:
            k = self.peek()[0]
            if k == "*":
                self.take()
                val = val * self.factor()
            elif k == "/":
                t = self.take()
                d = self.factor()
                if not d.is_scalar() or d.is_zero():
                    raise ParseError("division only by nonzero scalars", t[2], self.text)
                val = val * d.constant().inv()
            elif k in ("int", "id", "("):
                val = val * self.factor()
            else:
                return val

    def factor(self):
        t = self.peek()
        if t[0] == "int":
            self.take()
            base = self.alg.scalar(t[1])
        elif t[0] == "id":
            self.take()
            if t[1] == "q":
                base = self.alg.scalar(qp(1))
            elif t[1] in self.alg.index or t[1] in self.alg.aliases:
                base = self.alg.gen(t[1])
            else:
                raise ParseError(f"unknown generator {t[1]!r}", t[2], self.text)
        elif t[0] == "(":
            self.take()
            base = self.expr()
            self.take(")")
        else:
            raise ParseError(f"unexpected token {t[1]!r}", t[2], self.text)
        if self.peek()[0] == "^":
            self.take()
            neg = False
            if self.peek()[0] == "-":
                self.take()
                neg = True
            n = self.take("int")[1]
            n = -n if neg else n
            if n < 0 and base.is_scalar():
                if base.is_zero():
                    raise ParseError("zero to a negative power", t[2], self.text)
                return self.alg.scalar(base.constant() ** n)
            try:
                base = base ** n
            except PresentationError as exc:
                raise ParseError(str(exc), t[2], self.text) from None
        return base


def parse_expr(text: str, alg: Presentation) -> NcPoly:
    p = _Parser(text, alg)
    if p.peek()[0] == "end":
        raise ParseError("empty expression", 0, text)
    val = p.expr()
    t = p.peek()
    if t[0] != "end":
        raise ParseError(f"unexpected token {t[1]!r}", t[2], text)
    return val


# ----------------------------------------------------------------------
# confluence

def _letters(alg: Presentation):
    out = []
    for k, g in enumerate(alg.gens):
        out.append((k, 1))
        if g.invertible:
            out.append((k, -1))
    return out


def _reducible(a, b) -> bool:
    return a[0] > b[0] or (a[0] == b[0] and a[1] != b[1])


ASSOC_EXHAUSTIVE = 20000
ASSOC_SAMPLES = 1500


def check_local_confluence(alg: Presentation, max_deg: int, *, assoc_samples: int = 0,
                           seed: int = 0) -> VerificationReport:
    """Resolve every overlap of two reductions on a three-letter word.

    Also flags conflicting duplicate rules and, when ``assoc_samples`` > 0 or
    the monomial count is small, checks associativity on triples of normal
    monomials with total degree <= max_deg.
    """
    rep = VerificationReport(f"confluence {alg.name}", {"max_deg": max_deg})
    dup = rep.check("confluence/rule_uniqueness", "rewrite system well-formed", max_deg)
    seen = {}
    for key, terms in alg.rule_log:
        if key in seen and seen[key] != terms:
            h, s, g, t = key
            w = alg.mono_str(((h, s),)) + "*" + alg.mono_str(((g, t),))
            dup.require(False, w, NcPoly(alg, seen[key]), NcPoly(alg, terms))
        else:
            dup.tested += 1
        seen.setdefault(key, terms)

    ov = rep.check("confluence/overlaps", "normal forms unique (diamond lemma)", max_deg)
    letters = _letters(alg)
    for a, b, c in product(letters, repeat=3):
        if not (_reducible(a, b) and _reducible(b, c)):
            continue
        ab = alg.mul_mono((a,), (b,))
        bc = alg.mul_mono((b,), (c,))
        left = alg.mul_terms(ab, {(c,): ONE})
        right = alg.mul_terms({(a,): ONE}, bc)
        word = "*".join(alg.mono_str((x,)) for x in (a, b, c))
        ov.require(left == right, word, NcPoly(alg, left), NcPoly(alg, right))

    asc = rep.check("confluence/associativity", "normal forms unique (diamond lemma)", max_deg)
    by_deg = [alg.graded_basis(d) for d in range(max_deg + 1)]
    splits = [
        (d1, d2, d3)
        for d1 in range(max_deg + 1)
        for d2 in range(max_deg + 1 - d1)
        for d3 in range(max_deg + 1 - d1 - d2)
    ]
    total = sum(len(by_deg[a]) * len(by_deg[b]) * len(by_deg[c]) for a, b, c in splits)
    if total <= ASSOC_EXHAUSTIVE and not assoc_samples:
        triples = (
            t for a, b, c in splits for t in product(by_deg[a], by_deg[b], by_deg[c])
        )
    else:
        rng = random.Random(seed)
        weights = [len(by_deg[a]) * len(by_deg[b]) * len(by_deg[c]) for a, b, c in splits]
        picks = rng.choices(splits, weights=weights, k=assoc_samples or ASSOC_SAMPLES)
        triples = [tuple(rng.choice(by_deg[d]) for d in split) for split in picks]
        asc.note = f"sampled {len(picks)} of {total} triples (seed {seed})"
    for m1, m2, m3 in triples:
        l = alg.mul_terms(alg.mul_mono(m1, m2), {m3: ONE})
        r = alg.mul_terms({m1: ONE}, alg.mul_mono(m2, m3))
        w = f"({alg.mono_str(m1)})*({alg.mono_str(m2)})*({alg.mono_str(m3)})"
        asc.require(l == r, w, NcPoly(alg, l), NcPoly(alg, r))
    if rep.passed:
        alg.confluence_certified_degree = max(alg.confluence_certified_degree, max_deg)
    return rep

"""The q = 1 side: commutative algebras with derivation actions.

Classical objects come from specializing the quantum presets, except the
torus C[T] and the Gauss factorization, which are built directly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .action import ActionTable
from .cartan import CartanData
from .linalg import express, kernel, rank
from .ncpoly import NcPoly, Presentation
from .report import VerificationReport
from .scalar import ONE, RatFunc, qp, specialize_q1

F0 = Fraction(0)
F1 = Fraction(1)


class ClassicalError(ValueError):
    pass


# ----------------------------------------------------------------------
# commutative Laurent polynomials

class CAlgebra:
    """Commutative algebra on named generators, some invertible."""

    def __init__(self, name: str, cartan: CartanData, names, weights, *,
                 invertible=None, degrees=None, source: Presentation | None = None):
        self.name = name
        self.cartan = cartan
        self.names = list(names)
        self.index = {n: k for k, n in enumerate(self.names)}
        self.weights = [tuple(Fraction(x) for x in w) for w in weights]
        self.invertible = list(invertible or [False] * len(self.names))
        self.degrees = list(degrees or [1] * len(self.names))
        self.source = source
        self.meta: dict = {}

    @property
    def n(self) -> int:
        return len(self.names)

    def mono(self, **exps) -> tuple:
        v = [0] * self.n
        for k, e in exps.items():
            v[self.index[k]] = e
        return tuple(v)

    def var(self, name: str, e: int = 1) -> "CPoly":
        k = self.index[name]
        if e < 0 and not self.invertible[k]:
            raise ClassicalError(f"{name} is not invertible")
        v = [0] * self.n
        v[k] = e
        return CPoly(self, {tuple(v): F1})

    def one(self) -> "CPoly":
        return CPoly(self, {(0,) * self.n: F1})

    def zero(self) -> "CPoly":
        return CPoly(self, {})

    def const(self, c) -> "CPoly":
        return CPoly(self, {(0,) * self.n: Fraction(c)} if c else {})

    def weight_of(self, m) -> tuple:
        r = self.cartan.rank
        return tuple(sum((e * w[j] for e, w in zip(m, self.weights)), F0) for j in range(r))

    def degree_of(self, m) -> int:
        return sum(abs(e) * d for e, d in zip(m, self.degrees))

    def basis(self, deg: int) -> list[tuple]:
        """Monomials of formal degree exactly deg."""
        out = []

        def rec(k, remaining, acc):
            if k == self.n:
                if remaining == 0:
                    out.append(tuple(acc))
                return
            d = self.degrees[k]
            for e in range(remaining // d + 1):
                signs = (e, -e) if e and self.invertible[k] else (e,)
                for s in signs:
                    rec(k + 1, remaining - e * d, acc + [s])

        rec(0, deg, [])
        return sorted(out)

    def basis_upto(self, deg: int) -> list[tuple]:
        return [m for d in range(deg + 1) for m in self.basis(d)]

    def mono_str(self, m) -> str:
        parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(self.names, m) if e]
        return "*".join(parts) or "1"

    def __repr__(self):
        return f"CAlgebra({self.name!r}, {self.names})"


class CPoly:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: CAlgebra, terms: dict):
        self.alg = alg
        self.terms = {m: c for m, c in terms.items() if c}

    def _lift(self, other):
        if isinstance(other, CPoly):
            return other
        return self.alg.const(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, F0) + c
        return CPoly(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return CPoly(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, CPoly):
            c = Fraction(other)
            return CPoly(self.alg, {m: x * c for m, x in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, F0) + c1 * c2
        return CPoly(self.alg, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.alg.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, CPoly):
            return self.terms == other.terms
        return self == self.alg.const(other)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            ms = self.alg.mono_str(m)
            if ms == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(ms)
            elif c == -1:
                parts.append("-" + ms)
            else:
                parts.append(f"{c}*{ms}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


# ----------------------------------------------------------------------
# derivation actions

@dataclass
class CAction:
    """e_i / f_i act as derivations fixed by generator images; h_i by weight."""

    alg: CAlgebra
    ops: tuple  # names of the derivations, e.g. ("e1", "e2", "f1", "f2")
    images: dict = field(default_factory=dict)  # (op, generator) -> CPoly

    def __post_init__(self):
        self._memo: dict = {}

    def set_image(self, op: str, name: str, value: CPoly) -> None:
        self.images[(op, name)] = value
        self._memo.clear()

    def image(self, op: str, name: str) -> CPoly:
        return self.images.get((op, name), self.alg.zero())

    def h(self, i: int, p: CPoly) -> CPoly:
        cart = self.alg.cartan
        return CPoly(p.alg, {m: c * Fraction(cart.coroot_pairing(i, self.alg.weight_of(m)))
                             for m, c in p.terms.items()})

    def act_mono(self, op: str, m) -> CPoly:
        key = (op, m)
        res = self._memo.get(key)
        if res is None:
            alg = self.alg
            res = alg.zero()
            for k, e in enumerate(m):
                if e:
                    img = self.image(op, alg.names[k])
                    if img.is_zero():
                        continue
                    rest = list(m)
                    rest[k] -= 1
                    res = res + CPoly(alg, {tuple(rest): Fraction(e)}) * img
            self._memo[key] = res
        return res

    def act(self, op: str, p: CPoly) -> CPoly:
        if op.startswith("h"):
            return self.h(int(op[1:]), p)
        out = self.alg.zero()
        for m, c in p.terms.items():
            out = out + self.act_mono(op, m) * c
        return out


def _weight_fracs(w) -> tuple:
    return tuple(Fraction(x) for x in w)


# ----------------------------------------------------------------------
# specialization

def spec_scalar(c: RatFunc) -> Fraction:
    return specialize_q1(c)


def specialize_poly(calg: CAlgebra, p: NcPoly) -> CPoly:
    src = p.alg
    out: dict = {}
    for m, c in p.terms.items():
        v = [0] * calg.n
        for k, e in m:
            v[calg.index[src.gens[k].name]] += e
        v = tuple(v)
        out[v] = out.get(v, F0) + spec_scalar(c)
    return CPoly(calg, out)


def specialize_algebra(p: Presentation, t: ActionTable | None = None) -> tuple:
    """The q = 1 commutative algebra on the same generators, with e/f derivations."""
    calg = CAlgebra(f"{p.name}|q=1", p.cartan, [g.name for g in p.gens],
                    [g.weight for g in p.gens], invertible=[g.invertible for g in p.gens],
                    degrees=[g.degree for g in p.gens], source=p)
    calg.meta.update(p.meta)
    if t is None:
        return calg, None
    ops = tuple(g.lower() for g in t.hopf.generators)
    act = CAction(calg, ops)
    for (g, name), img in t.images.items():
        act.set_image(g.lower(), name, specialize_poly(calg, img))
    return calg, act


def check_specialization(p: Presentation, t: ActionTable | None, deg: int, *,
                         pair_limit: int = 2000, seed: int = 0) -> VerificationReport:
    """Rules become commutativity, normal forms specialize multiplicatively, actions commute with q -> 1."""
    calg, act = specialize_algebra(p, t)
    rep = VerificationReport(f"specialize {p.name}", {"max_deg": deg, "seed": seed})
    rel = rep.check("specialize/relations", "classical limit", deg)
    for key, terms in sorted(p.rules.items()):
        h, s, g, e = key
        lhs = calg.var(p.gens[h].name, s) * calg.var(p.gens[g].name, e)
        rhs = specialize_poly(calg, NcPoly(p, terms))
        rel.require(lhs == rhs, f"{p.gens[h].name}^{s}*{p.gens[g].name}^{e}", lhs, rhs)
    mul = rep.check("specialize/multiplicative", "classical limit", deg)
    from .action import _pairs

    pairs, total = _pairs(p, deg, pair_limit, random.Random(seed))
    if len(pairs) < total:
        mul.note = f"sampled {len(pairs)} of {total} pairs (seed {seed})"
    for m1, m2 in pairs:
        got = specialize_poly(calg, NcPoly(p, p.mul_mono(m1, m2)))
        want = specialize_poly(calg, NcPoly(p, {m1: ONE})) * specialize_poly(calg, NcPoly(p, {m2: ONE}))
        mul.require(got == want, f"({p.mono_str(m1)})*({p.mono_str(m2)})", want, got)
    if t is not None:
        ac = rep.check("specialize/action", "classical limit", deg)
        for m in p.basis_upto(deg):
            a = NcPoly(p, {m: ONE})
            ca = specialize_poly(calg, a)
            for g in t.hopf.generators:
                got = specialize_poly(calg, t.act(g, a))
                want = act.act(g.lower(), ca)
                ac.require(got == want, f"{g}({p.mono_str(m)})", want, got)
            for i in p.cartan.indices:
                got = specialize_poly(calg, t.act(f"K{i}", a))
                ac.require(got == ca, f"K{i}({p.mono_str(m)})", ca, got)
    return rep


# ----------------------------------------------------------------------
# Poisson bracket on C[U]

def lift(calg: CAlgebra, f: CPoly) -> NcPoly:
    """The normal-ordered quantum monomials with the same exponents."""
    p = calg.source
    if p is None:
        raise ClassicalError("no quantum presentation to lift to")
    out = {}
    for m, c in f.terms.items():
        qm = tuple((p.index[calg.names[k]], e) for k, e in enumerate(m) if e)
        out[qm] = RatFunc.const(c)
    return NcPoly(p, out)


def poisson_bracket(f: CPoly, g: CPoly) -> CPoly:
    """(f~ g~ - g~ f~)/(q - 1) at q = 1."""
    calg = f.alg
    lf, lg = lift(calg, f), lift(calg, g)
    comm = lf * lg - lg * lf
    return specialize_poly(calg, comm * (qp(1) - ONE).inv())


def f_from_bracket(act: CAction, i: int, x: CPoly, xi: CPoly) -> CPoly:
    """f_i(x) = {x_i, x}/(2 d_i) + x_i h_i(x)/2."""
    d = act.alg.cartan.di(i)
    return poisson_bracket(xi, x) * Fraction(1, 2 * d) + xi * act.h(i, x) * Fraction(1, 2)


def epsilon_rec(calg: CAlgebra, i: int, j: int, n: int) -> CPoly:
    """eps(i,j,0) = x_j, eps(i,j,k+1) = {x_i, eps} - d_i (c_ij + 2k) x_i eps."""
    cart = calg.cartan
    simple = calg.meta["simple"]
    xi, xj = calg.var(simple[i - 1]), calg.var(simple[j - 1])
    eps = xj
    for k in range(n):
        eps = poisson_bracket(xi, eps) - xi * eps * (cart.di(i) * (cart.c(i, j) + 2 * k))
    return eps


def check_epsilon(calg: CAlgebra, act: CAction, nmax: int = 3) -> VerificationReport:
    cart = calg.cartan
    simple = calg.meta["simple"]
    rep = VerificationReport(f"epsilon {calg.name}", {"nmax": nmax})
    van = rep.check("epsilon/serre_vanishing", "classical Serre relations for C[U]", None)
    pw = rep.check("epsilon/f_powers", "eps(i,j,n) = (2 d_i)^n f_i^n(x_j)", nmax)
    for i in cart.indices:
        for j in cart.indices:
            if i == j:
                continue
            n0 = 1 - cart.c(i, j)
            e = epsilon_rec(calg, i, j, n0)
            van.require(e.is_zero(), f"eps({i},{j},{n0})", 0, e)
            fx = calg.var(simple[j - 1])
            for n in range(nmax + 1):
                want = fx * Fraction(2 * cart.di(i)) ** n
                got = epsilon_rec(calg, i, j, n)
                pw.require(got == want, f"eps({i},{j},{n})", want, got)
                fx = act.act(f"f{i}", fx)
    return rep


def check_poisson(calg: CAlgebra, act: CAction, deg: int, *, samples: int = 60,
                  seed: int = 0) -> VerificationReport:
    """f_i from the bracket, Jacobi, antisymmetry and the e_i law on brackets."""
    cart = calg.cartan
    simple = calg.meta["simple"]
    rep = VerificationReport(f"poisson {calg.name}", {"max_deg": deg, "seed": seed})
    ff = rep.check("poisson/f_formula", "f_i from the Poisson bracket", deg)
    monos = calg.basis_upto(deg)
    for m in monos:
        x = CPoly(calg, {m: F1})
        for i in cart.indices:
            xi = calg.var(simple[i - 1])
            want = act.act(f"f{i}", x)
            got = f_from_bracket(act, i, x, xi)
            ff.require(got == want, f"f{i}({calg.mono_str(m)})", want, got)
    rng = random.Random(seed)
    jac = rep.check("poisson/jacobi", "Poisson bracket", deg)
    anti = rep.check("poisson/antisymmetric", "Poisson bracket", deg)
    el = rep.check("poisson/e_law", "e_i on brackets", deg)
    for _ in range(samples):
        x, y, z = (CPoly(calg, {rng.choice(monos): F1}) for _ in range(3))
        pb = poisson_bracket
        j = pb(x, pb(y, z)) + pb(y, pb(z, x)) + pb(z, pb(x, y))
        jac.require(j.is_zero(), f"{x},{y},{z}", 0, j)
        s = pb(x, y) + pb(y, x)
        anti.require(s.is_zero(), f"{x},{y}", 0, s)
        for i in cart.indices:
            d = cart.di(i)
            e = f"e{i}"
            got = act.act(e, pb(x, y))
            want = pb(act.act(e, x), y) + pb(x, act.act(e, y)) \
                + act.act(e, x) * act.h(i, y) * d - act.h(i, x) * act.act(e, y) * d
            el.require(got == want, f"{e}({{{x},{y}}})", want, got)
    return rep


# ----------------------------------------------------------------------
# highest weight vectors

def hw_kernel(act: CAction, monos) -> list[CPoly]:
    alg = act.alg
    groups: dict = {}
    for m in monos:
        groups.setdefault(alg.weight_of(m), []).append(m)
    out = []
    es = [op for op in act.ops if op.startswith("e")]
    for key in sorted(groups, key=str):
        ms = groups[key]
        cols = []
        for m in ms:
            v = {}
            for op in es:
                for mm, c in act.act_mono(op, m).terms.items():
                    v[(op, mm)] = c
            cols.append(v)
        for vec in kernel(cols, F1):
            out.append(CPoly(alg, {m: c for m, c in zip(ms, vec) if c}))
    return out


def is_highest_weight(act: CAction, p: CPoly) -> bool:
    return all(act.act(op, p).is_zero() for op in act.ops if op.startswith("e"))


# ----------------------------------------------------------------------
# the b- action f^_i(a) = f_i(a) - h_i(a) x_i

@dataclass
class HatContext:
    act: CAction
    phi: dict  # simple name -> CPoly image of x_i

    def x(self, i: int) -> CPoly:
        return self.phi[self.act.alg.meta.get("simple_names", list(self.phi))[i - 1]]


def hatf_act(ctx: HatContext, i: int, a: CPoly) -> CPoly:
    return ctx.act.act(f"f{i}", a) - ctx.act.h(i, a) * ctx.x(i)


class HatOps:
    """f^_i and h_i as operators; duck-typed like CAction for the relation suite."""

    def __init__(self, ctx: HatContext):
        self.ctx = ctx
        self.alg = ctx.act.alg
        r = self.alg.cartan.rank
        self.ops = tuple(f"f{i}" for i in range(1, r + 1))

    def act(self, op: str, a: CPoly) -> CPoly:
        if op.startswith("h"):
            return self.ctx.act.h(int(op[1:]), a)
        return hatf_act(self.ctx, int(op[1:]), a)


def _ad_power(ops, gi: str, gj: str, n: int, a):
    """(ad g_i)^n (g_j) applied to a: sum_k (-1)^k C(n,k) g_i^(n-k) g_j g_i^k."""
    out = a.alg.zero()
    for k in range(n + 1):
        v = a
        for _ in range(k):
            v = ops.act(gi, v)
        v = ops.act(gj, v)
        for _ in range(n - k):
            v = ops.act(gi, v)
        out = out + v * ((-1) ** k * comb(n, k))
    return out


def lie_suite(ops, monos, families, *, anchor: str, degree=None,
              rep: VerificationReport | None = None, ef: bool = False) -> VerificationReport:
    """Serre for each family, [h_i, g_j] = +/- c_ij g_j and optionally [e_i, f_j] = delta_ij h_i."""
    cart = ops.alg.cartan
    rep = rep or VerificationReport(f"lie {ops.alg.name}", {"max_deg": degree})
    checks = {fam: rep.check(f"lie/serre_{fam}", anchor, degree) for fam in families}
    hc = rep.check("lie/h_conjugation", anchor, degree)
    efc = rep.check("lie/ef_commutator", anchor, degree) if ef else None
    for m in monos:
        a = CPoly(ops.alg, {m: F1})
        ms = ops.alg.mono_str(m)
        for i in cart.indices:
            for j in cart.indices:
                for fam in families:
                    if i != j:
                        v = _ad_power(ops, f"{fam}{i}", f"{fam}{j}", 1 - cart.c(i, j), a)
                        checks[fam].require(v.is_zero(), f"(ad {fam}{i})^n({fam}{j})({ms})", 0, v)
                    sign = 1 if fam == "e" else -1
                    lhs = ops.act(f"h{i}", ops.act(f"{fam}{j}", a)) - ops.act(f"{fam}{j}", ops.act(f"h{i}", a))
                    rhs = ops.act(f"{fam}{j}", a) * (sign * cart.c(i, j))
                    hc.require(lhs == rhs, f"[h{i},{fam}{j}]({ms})", rhs, lhs)
                if efc is not None:
                    lhs = ops.act(f"e{i}", ops.act(f"f{j}", a)) - ops.act(f"f{j}", ops.act(f"e{i}", a))
                    rhs = ops.act(f"h{i}", a) if i == j else ops.alg.zero()
                    efc.require(lhs == rhs, f"[e{i},f{j}]({ms})", rhs, lhs)
    return rep


def check_serre_hatf(ctx: HatContext, max_deg: int, *, hw_deg: int = 3) -> VerificationReport:
    """Classical Serre and h-conjugation for f^_i, and invariance of A+."""
    ops = HatOps(ctx)
    alg = ctx.act.alg
    rep = VerificationReport(f"hatf {alg.name}", {"max_deg": max_deg})
    emb = rep.check("hatf/embedding", "C[U] is a module subalgebra", None)
    cart = alg.cartan
    for i in cart.indices:
        for j in cart.indices:
            v = ctx.act.act(f"e{i}", ctx.x(j))
            emb.require(v == (1 if i == j else 0), f"e{i}(x{j})", int(i == j), v)
    lie_suite(ops, alg.basis_upto(max_deg), ("f",), anchor="b- action on A", degree=max_deg, rep=rep)
    inv = rep.check("hatf/hw_invariance", "b- action on A", hw_deg)
    for h in hw_kernel(ctx.act, alg.basis_upto(hw_deg)):
        for i in cart.indices:
            v = hatf_act(ctx, i, h)
            inv.require(is_highest_weight(ctx.act, v), f"f^{i}({h})", "highest weight", v)
    return rep


# ----------------------------------------------------------------------
# b- module algebras and the crossed product

def fundamental_weights(cartan: CartanData) -> list[tuple]:
    """omega_i in root coordinates: <alpha_j^vee, omega_i> = delta_ij."""
    import sympy

    inv = sympy.Matrix(cartan.matrix).inv()
    r = cartan.rank
    # <alpha_j^vee, sum_k w_k alpha_k> = sum_k c_jk w_k
    return [tuple(Fraction(str(inv[k, i])) for k in range(r)) for i in range(r)]


def torus_bminus(cartan: CartanData, lattice: str = "weight") -> CAction:
    """C[T]: v_i = v_{omega_i} (or v_{alpha_i}), invertible, f = 0, h by weight."""
    if lattice == "weight":
        ws = fundamental_weights(cartan)
    else:
        ws = [cartan.alpha(i) for i in cartan.indices]
    names = [f"v{i}" for i in cartan.indices]
    alg = CAlgebra("C[T]", cartan, names, ws, invertible=[True] * len(names))
    return CAction(alg, tuple(f"f{i}" for i in cartan.indices))


def scalars_bminus(cartan: CartanData) -> CAction:
    return CAction(CAlgebra("scalars", cartan, [], []), tuple(f"f{i}" for i in cartan.indices))


def tensor_bminus(a: CAction, b: CAction, name: str | None = None) -> CAction:
    """Plain tensor product of commutative b- module algebras."""
    A, B = a.alg, b.alg
    clash = set(A.names) & set(B.names)
    if clash:
        raise ClassicalError(f"generator names overlap: {sorted(clash)}")
    alg = CAlgebra(name or f"{A.name}(x){B.name}", A.cartan, A.names + B.names, A.weights + B.weights,
                   invertible=A.invertible + B.invertible, degrees=A.degrees + B.degrees)
    act = CAction(alg, a.ops)
    for src in (a, b):
        for (op, nm), img in src.images.items():
            act.set_image(op, nm, embed_poly(img, alg))
    return act


def embed_poly(p: CPoly, target: CAlgebra) -> CPoly:
    src = p.alg
    out = {}
    for m, c in p.terms.items():
        v = [0] * target.n
        for k, e in enumerate(m):
            v[target.index[src.names[k]]] += e
        out[tuple(v)] = c
    return CPoly(target, out)


def restrict_hatf(ctx: HatContext, names, new_name: str) -> CAction:
    """A+ on generators ``names`` with the b- action f^ (images must stay inside)."""
    A = ctx.act.alg
    idx = [A.index[n] for n in names]
    sub = CAlgebra(new_name, A.cartan, list(names), [A.weights[k] for k in idx],
                   invertible=[A.invertible[k] for k in idx], degrees=[A.degrees[k] for k in idx])
    act = CAction(sub, tuple(f"f{i}" for i in A.cartan.indices))
    keep = set(idx)
    for i in A.cartan.indices:
        for nm in names:
            v = hatf_act(ctx, i, A.var(nm))
            for m in v.terms:
                if any(e and k not in keep for k, e in enumerate(m)):
                    raise ClassicalError(f"f^{i}({nm}) leaves the subalgebra: {v}")
            out = {tuple(m[k] for k in idx): c for m, c in v.terms.items()}
            act.set_image(f"f{i}", nm, CPoly(sub, out))
    return act


def classical_cqU(cartan_or_label) -> tuple:
    from .action import preset_action_cqU
    from .presets import preset_cqU

    p = preset_cqU(cartan_or_label)
    calg, act = specialize_algebra(p, preset_action_cqU(p))
    calg.meta["simple_names"] = list(p.meta["simple"])
    return calg, act


def build_classical_crossed(bm: CAction, *, certify_deg: int | None = None) -> tuple:
    """A (x) C[U] with h additive, e_i(a (x) x) = a (x) e_i(x) and
    f_i(a (x) x) = f_i(a) (x) x + h_i(a) (x) x_i x + a (x) f_i(x)."""
    P = bm.alg
    cartan = P.cartan
    cu, cact = classical_cqU(cartan)
    un = {n: "u" + n[1:] for n in cu.names}
    alg = CAlgebra(f"crossed({P.name})", cartan, P.names + [un[n] for n in cu.names],
                   P.weights + cu.weights, invertible=P.invertible + cu.invertible,
                   degrees=P.degrees + cu.degrees)
    simple = cu.meta["simple_names"]
    alg.meta.update(simple_names=[un[n] for n in simple], plus=bm, rename=un, cqU=(cu, cact))
    ops = tuple([f"e{i}" for i in cartan.indices] + [f"f{i}" for i in cartan.indices])
    act = CAction(alg, ops)

    def from_cu(p: CPoly) -> CPoly:
        return CPoly(alg, {(0,) * P.n + m: c for m, c in p.terms.items()})

    def from_p(p: CPoly) -> CPoly:
        return CPoly(alg, {m + (0,) * cu.n: c for m, c in p.terms.items()})

    for i in cartan.indices:
        xi = alg.var(un[simple[i - 1]])
        for nm in P.names:
            a = P.var(nm)
            act.set_image(f"f{i}", nm, from_p(bm.act(f"f{i}", a)) + from_p(bm.h(i, a)) * xi)
        for nm in cu.names:
            for op in (f"e{i}", f"f{i}"):
                act.set_image(op, un[nm], from_cu(cact.image(op, nm)))
    alg.meta.update(from_plus=from_p, from_cqU=from_cu)
    rep = VerificationReport(f"classical crossed {P.name}")
    if certify_deg is not None:
        lie_suite(act, alg.basis_upto(certify_deg), ("e", "f"), anchor="g action on A (x) C[U]",
                  degree=certify_deg, rep=rep, ef=True)
        rep.extend(crossed_formula_check(act, certify_deg))
    return alg, act, rep


def crossed_formula_check(act: CAction, deg: int) -> VerificationReport:
    alg = act.alg
    bm = alg.meta["plus"]
    cu, cact = alg.meta["cqU"]
    fp, fc = alg.meta["from_plus"], alg.meta["from_cqU"]
    simple = cu.meta["simple_names"]
    rep = VerificationReport(f"classical crossed formulas {bm.alg.name}")
    chk = rep.check("classical_crossed/displayed_action", "g action on A (x) C[U]", deg)
    for d1 in range(deg + 1):
        for a in bm.alg.basis(d1):
            A = CPoly(bm.alg, {a: F1})
            for x in cu.basis_upto(deg - d1):
                X = CPoly(cu, {x: F1})
                elem = fp(A) * fc(X)
                for i in alg.cartan.indices:
                    xi = cu.var(simple[i - 1])
                    want_e = fp(A) * fc(cact.act(f"e{i}", X))
                    chk.require(act.act(f"e{i}", elem) == want_e, f"e{i}({elem})", want_e,
                                act.act(f"e{i}", elem))
                    want_f = fp(bm.act(f"f{i}", A)) * fc(X) + fp(bm.h(i, A)) * fc(xi * X) \
                        + fp(A) * fc(cact.act(f"f{i}", X))
                    got = act.act(f"f{i}", elem)
                    chk.require(got == want_f, f"f{i}({elem})", want_f, got)
                    want_h = fp(bm.h(i, A)) * fc(X) + fp(A) * fc(cact.h(i, X))
                    got = act.act(f"h{i}", elem)
                    chk.require(got == want_h, f"h{i}({elem})", want_h, got)
    return rep


def torus_identity(act: CAction, i: int) -> tuple:
    """((1 (x) v_{-omega_i}) (x) 1) [f_i((1 (x) v_{omega_i}) (x) 1)] and the expected x_i."""
    alg = act.alg
    v = f"v{i}"
    got = alg.var(v, -1) * act.act(f"f{i}", alg.var(v))
    return got, alg.var(alg.meta["simple_names"][i - 1])


# ----------------------------------------------------------------------
# factorization

def classical_verify_factorization(act: CAction, act0: CAction, phi: dict, deg: int, *,
                                   mode: str = "graded", hw_deg: int | None = None,
                                   height: int | None = None) -> VerificationReport:
    """mu: A+ (x) A0 -> A, (a, b) -> a phi(b), is bijective on the tested range.

    ``graded``: per degree d the products of degree d are independent and span A_d.
    ``filtered``: products with hw part of degree <= hw_deg and A0 part of degree
    <= height are independent, and every generator of A (and inverse) is in their
    span; the image of mu is a subalgebra (A is commutative), so it is all of A.
    """
    A, A0 = act.alg, act0.alg
    rep = VerificationReport(f"classical factorization {A.name}", {"max_deg": deg, "mode": mode})
    emb = rep.check("classical_factorization/embedding", "classical factorization", deg)
    cart = A.cartan
    simple = A0.meta["simple_names"]

    def phi_poly(p: CPoly) -> CPoly:
        out = A.zero()
        for m, c in p.terms.items():
            t = A.one()
            for k, e in enumerate(m):
                if e:
                    t = t * phi[A0.names[k]] ** e
            out = out + t * c
        return out

    for i in cart.indices:
        for j in cart.indices:
            v = act.act(f"e{i}", phi[simple[j - 1]])
            emb.require(v == (1 if i == j else 0), f"e{i}(phi(x{j}))", int(i == j), v)
    for m in A0.basis_upto(min(deg, 4)):
        x = CPoly(A0, {m: F1})
        for op in act0.ops:
            got = act.act(op, phi_poly(x))
            want = phi_poly(act0.act(op, x))
            emb.require(got == want, f"{op}(phi({A0.mono_str(m)}))", want, got)
    inj = rep.check("classical_factorization/injective", "classical factorization", deg)
    sur = rep.check("classical_factorization/surjective", "classical factorization", deg)
    vec = lambda p: dict(p.terms)
    if mode == "graded":
        hw = [hw_kernel(act, A.basis(d)) for d in range(deg + 1)]
        for d in range(deg + 1):
            prods = [h * phi_poly(CPoly(A0, {m: F1}))
                     for d1 in range(d + 1) for h in hw[d1] for m in A0.basis(d - d1)]
            dim = len(A.basis(d))
            r = rank([vec(p) for p in prods])
            inj.require(r == len(prods), f"degree {d}", len(prods), r)
            sur.require(r == dim, f"degree {d}", dim, r)
    elif mode == "filtered":
        hw = hw_kernel(act, A.basis_upto(hw_deg if hw_deg is not None else deg))
        h0 = A0.basis_upto(height if height is not None else deg)
        prods = [h * phi_poly(CPoly(A0, {m: F1})) for h in hw for m in h0]
        r = rank([vec(p) for p in prods])
        inj.require(r == len(prods), f"hw deg <= {hw_deg}, A0 deg <= {height}", len(prods), r)
        vs = [vec(p) for p in prods]
        for k, nm in enumerate(A.names):
            for e in ((1, -1) if A.invertible[k] else (1,)):
                target = A.var(nm, e)
                sol = express(vec(target), vs, F1)
                sur.require(sol is not None, f"{nm}^{e}", "in the image of mu", None)
    else:
        raise ClassicalError(f"unknown mode {mode!r}")
    return rep


def classical_localized() -> tuple:
    """Localized C[Mat_{3,2}] by specialization, with x1 -> x21/x11, x2 -> (x11 x32 - x12 x31)/D2."""
    from .action import extend_action_to_localization, preset_action_qmatrix
    from .presets import preset_localized_qmat32, preset_qmatrix

    tq = preset_action_qmatrix(preset_qmatrix(3, 2))
    loc = preset_localized_qmat32()
    t = extend_action_to_localization(tq, loc)
    calg, act = specialize_algebra(loc, t)
    x = calg.var
    phi = {"x1": x("x11", -1) * x("x21"),
           "x2": x("D2", -1) * (x("x11") * x("x32") - x("x12") * x("x31"))}
    # composite root vectors have poles in their defining words; take the
    # limit of the quantum image instead
    from .gstar import localized_context

    for nm, v in localized_context().full_phi().items():
        phi.setdefault(nm, specialize_poly(calg, v))
    calg.meta["simple_names"] = ["x1", "x2"]
    return calg, act, phi


# ----------------------------------------------------------------------
# Gauss factorization of a 3x2 matrix

def gauss_factor_3x2(M):
    """M = L R with L lower unitriangular 3x3 and R upper 3x2 (closed form).

    Entries may be Fractions or sympy expressions.
    """
    (a11, a12), (a21, a22), (a31, a32) = M
    if a11 == 0:
        raise ClassicalError("a11 = 0: no Gauss factorization")
    minor = a11 * a22 - a12 * a21
    if minor == 0:
        raise ClassicalError("leading 2x2 minor vanishes: no Gauss factorization")
    zero, one = a11 * 0, a11 * 0 + 1
    L = [[one, zero, zero],
         [a21 / a11, one, zero],
         [a31 / a11, (a11 * a32 - a12 * a31) / minor, one]]
    R = [[a11, a12],
         [zero, minor / a11],
         [zero, zero]]
    return L, R


def matmul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), A[0][0] * 0)
             for j in range(len(B[0]))] for i in range(len(A))]


def random_matrix(rng: random.Random, bound: int = 9):
    while True:
        M = [[Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(2)]
             for _ in range(3)]
        if M[0][0] != 0 and M[0][0] * M[1][1] - M[0][1] * M[1][0] != 0:
            return M

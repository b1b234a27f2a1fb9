"""Module-algebra actions extended from generator images by coproduct laws.

Every operator ``op`` used here satisfies a law of the form

    op(x y) = op(x) R(y) + L(x) op(y)

with L, R each one of id, K_i, K_i^-1.  K_i acts on a monomial m by
q^{(alpha_i, wt m)}, so both twists are scalars on monomials.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

from .cartan import CartanData
from .ncpoly import NcPoly, Presentation, _acc
from .report import VerificationReport
from .scalar import ONE, RatFunc, q_factorial, qp

# law name -> (power of K_i applied to the left factor, power applied to the right factor)
LAWS = {
    "grouplike": None,
    "skew_E": (0, 1),       # E(xy) = E(x) K(y) + x E(y)
    "skew_F": (-1, 0),      # F(xy) = F(x) y + K^-1(x) F(y)
    "skew_F2": (0, -1),     # F2(xy) = F2(x) K^-1(y) + x F2(y)
    "derivation": (0, 0),
}

HOPF_TAGS = ("Uq_g", "Uq_b_plus", "Uq_b_minus", "Uq_gstar", "U_g_classical", "U_bminus_classical")


class ActionError(ValueError):
    pass


@dataclass(frozen=True)
class HopfSpec:
    tag: str
    cartan: CartanData
    laws: tuple  # ((generator name, simple index, law name), ...)

    def law(self, gen: str):
        for name, i, law in self.laws:
            if name == gen:
                return i, law
        raise ActionError(f"{gen} is not a generator of {self.tag}")

    @property
    def generators(self) -> list[str]:
        return [name for name, _, _ in self.laws]


def hopf_spec(tag: str, cartan: CartanData) -> HopfSpec:
    idx = list(cartan.indices)
    if tag == "Uq_g":
        laws = [(f"E{i}", i, "skew_E") for i in idx] + [(f"F{i}", i, "skew_F") for i in idx]
    elif tag == "Uq_b_plus":
        laws = [(f"E{i}", i, "skew_E") for i in idx]
    elif tag == "Uq_b_minus":
        laws = [(f"F{i}", i, "skew_F") for i in idx]
    elif tag == "Uq_gstar":
        laws = [(f"F{i}_1", i, "skew_F") for i in idx] + [(f"F{i}_2", i, "skew_F2") for i in idx]
    elif tag == "U_g_classical":
        laws = [(f"e{i}", i, "derivation") for i in idx] + [(f"f{i}", i, "derivation") for i in idx]
    elif tag == "U_bminus_classical":
        laws = [(f"f{i}", i, "derivation") for i in idx]
    else:
        raise ActionError(f"unknown Hopf tag {tag!r}")
    return HopfSpec(tag, cartan, tuple(laws))


def k_scalar(alg: Presentation, i: int, power: int, m) -> RatFunc:
    """Eigenvalue of K_i^power on the monomial m."""
    if not power or not m:
        return ONE
    return qp(power * alg.cartan.alpha_pairing(i, alg.weight_of(m)))


def act_k(alg: Presentation, i: int, power: int, a: NcPoly) -> NcPoly:
    return NcPoly(alg, {m: c * k_scalar(alg, i, power, m) for m, c in a.terms.items()})


def weight_shift(hopf_gen: str, cartan: CartanData, i: int):
    sign = 1 if hopf_gen[0] in "Ee" else -1
    return tuple(sign * x for x in cartan.alpha(i))


@dataclass
class ActionTable:
    hopf: HopfSpec
    alg: Presentation
    images: dict = field(default_factory=dict)  # (hopf gen, algebra gen) -> NcPoly
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self._memo: dict = {}
        self._letter: dict = {}

    def set_image(self, hopf_gen: str, alg_gen: str, value) -> None:
        self.hopf.law(hopf_gen)
        if alg_gen not in self.alg.index:
            raise ActionError(f"unknown generator {alg_gen}")
        if not isinstance(value, NcPoly):
            value = self.alg.scalar(value)
        self.images[(hopf_gen, alg_gen)] = value
        self._memo.clear()
        self._letter.clear()

    def image(self, hopf_gen: str, alg_gen: str) -> NcPoly:
        return self.images.get((hopf_gen, alg_gen), self.alg.zero())

    # ------------------------------------------------------------------
    def _letter_image(self, g: str, k: int, s: int) -> dict:
        key = (g, k, s)
        res = self._letter.get(key)
        if res is not None:
            return res
        alg = self.alg
        name = alg.gens[k].name
        base = self.image(g, name).terms
        if s == 1:
            res = base
        else:
            i, law = self.hopf.law(g)
            lp, rp = LAWS[law]
            # 0 = op(x x^-1) = op(x) R(x^-1) + L(x) op(x^-1)
            w = alg.cartan.alpha_pairing(i, alg.gens[k].weight)
            c = -qp(-(lp + rp) * w)
            inv = {((k, -1),): ONE}
            res = {m: x * c for m, x in alg.mul_terms(alg.mul_terms(inv, base), inv).items()}
        self._letter[key] = res
        return res

    def act_mono(self, g: str, m) -> dict:
        if not m:
            return {}
        key = (g, m)
        res = self._memo.get(key)
        if res is not None:
            return res
        alg = self.alg
        i, law = self.hopf.law(g)
        lp, rp = LAWS[law]
        k, e = m[0]
        s = 1 if e > 0 else -1
        rest = (((k, e - s),) if e != s else ()) + m[1:]
        x = ((k, s),)
        res = {}
        ox = self._letter_image(g, k, s)
        if ox:
            r = {rest: k_scalar(alg, i, rp, rest)}
            for mm, c in alg.mul_terms(ox, r).items():
                _acc(res, mm, c)
        orest = self.act_mono(g, rest)
        if orest:
            lc = k_scalar(alg, i, lp, x)
            for mm, c in alg.mul_terms({x: lc}, orest).items():
                _acc(res, mm, c)
        self._memo[key] = res
        return res

    def act(self, g: str, a: NcPoly) -> NcPoly:
        if g.startswith("K"):
            i, power = _parse_k(g)
            return act_k(self.alg, i, power, a)
        out = {}
        for m, c in a.terms.items():
            for mm, x in self.act_mono(g, m).items():
                _acc(out, mm, c * x)
        return NcPoly(self.alg, out)

    def act_seq(self, gens, a: NcPoly) -> NcPoly:
        """Apply gens[0] first."""
        for g in gens:
            a = self.act(g, a)
        return a

    def act_raw(self, g: str, word) -> NcPoly:
        """Apply g to an unreduced word [(name, exp), ...] using the law only."""
        alg = self.alg
        i, law = self.hopf.law(g)
        lp, rp = LAWS[law]
        letters = []
        for item in word:
            name, e = (item, 1) if isinstance(item, str) else item
            k = alg.index[name]
            s = 1 if e > 0 else -1
            letters.extend([(k, s)] * abs(e))
        out = {}
        for pos, (k, s) in enumerate(letters):
            pre = tuple((kk, ss) for kk, ss in letters[:pos])
            suf = tuple((kk, ss) for kk, ss in letters[pos + 1:])
            c = k_scalar(alg, i, lp, _wmono(pre)) * k_scalar(alg, i, rp, _wmono(suf))
            left = {(): ONE}
            for lt in pre:
                left = alg.mul_terms(left, {(lt,): ONE})
            term = alg.mul_terms(left, self._letter_image(g, k, s))
            for lt in suf:
                term = alg.mul_terms(term, {(lt,): ONE})
            for mm, x in term.items():
                _acc(out, mm, c * x)
        return NcPoly(alg, out)

    def divided_E(self, i: int, n: int, a: NcPoly) -> NcPoly:
        return act_divided(self, f"E{i}", n, a)


def _wmono(letters):
    """Letters as a (not necessarily normal) monomial, only used for weights."""
    return tuple(letters)


def _parse_k(g: str):
    body = g[1:]
    power = 1
    if "^" in body:
        body, p = body.split("^")
        power = int(p)
    return int(body), power


def act_divided(t: ActionTable, g: str, n: int, a: NcPoly) -> NcPoly:
    i, _ = t.hopf.law(g)
    d = t.alg.cartan.di(i)
    for _ in range(n):
        a = t.act(g, a)
    return a * q_factorial(n, d).inv() if n else a


def act_divided_E(t: ActionTable, i: int, n: int, a: NcPoly) -> NcPoly:
    return act_divided(t, f"E{i}", n, a)


# ----------------------------------------------------------------------
# certification

def _monomials(alg: Presentation, max_deg: int):
    return alg.basis_upto(max_deg)


def _pairs(alg, max_deg, limit, rng):
    by_deg = [alg.graded_basis(d) for d in range(max_deg + 1)]
    splits = [(a, b) for a in range(max_deg + 1) for b in range(max_deg + 1 - a)]
    total = sum(len(by_deg[a]) * len(by_deg[b]) for a, b in splits)
    if total <= limit:
        return [p for a, b in splits for p in product(by_deg[a], by_deg[b])], total
    weights = [len(by_deg[a]) * len(by_deg[b]) for a, b in splits]
    picks = rng.choices(splits, weights=weights, k=limit)
    return [(rng.choice(by_deg[a]), rng.choice(by_deg[b])) for a, b in picks], total


def check_action_well_defined(t: ActionTable, max_deg: int, *, pair_limit: int = 4000,
                              seed: int = 0, anchor: str = "module-algebra action") -> VerificationReport:
    alg = t.alg
    rep = VerificationReport(f"action {alg.name}", {"max_deg": max_deg, "seed": seed})
    wc = rep.check("action/image_weights", anchor, max_deg)
    for (g, name), img in sorted(t.images.items()):
        i, _ = t.hopf.law(g)
        target = tuple(
            _add(x, y) for x, y in zip(alg.gens[alg.index[name]].weight, weight_shift(g, alg.cartan, i))
        )
        bad = [m for m in img.terms if alg.weight_of(m) != target]
        wc.require(not bad, f"{g}({name})", f"weight {target}", img)

    rc = rep.check("action/rules", anchor, max_deg)
    keys = sorted(alg.rules)
    for key in keys:
        h, s, gg, tt = key
        rhs = NcPoly(alg, alg.rules[key])
        word = [(alg.gens[h].name, s), (alg.gens[gg].name, tt)]
        for g in t.hopf.generators:
            lhs_val = t.act_raw(g, word)
            rhs_val = t.act(g, rhs)
            rc.require(lhs_val == rhs_val, f"{g}({alg.mono_str(((h, s),))}*{alg.mono_str(((gg, tt),))})",
                       rhs_val, lhs_val)

    mc = rep.check("action/module_algebra", anchor, max_deg)
    rng = random.Random(seed)
    pairs, total = _pairs(alg, max_deg, pair_limit, rng)
    if len(pairs) < total:
        mc.note = f"sampled {len(pairs)} of {total} pairs (seed {seed})"
    for g in t.hopf.generators:
        i, law = t.hopf.law(g)
        lp, rp = LAWS[law]
        for m1, m2 in pairs:
            prod = NcPoly(alg, alg.mul_mono(m1, m2))
            got = t.act(g, prod)
            a1 = NcPoly(alg, t.act_mono(g, m1)) * NcPoly(alg, {m2: k_scalar(alg, i, rp, m2)})
            a2 = NcPoly(alg, {m1: k_scalar(alg, i, lp, m1)}) * NcPoly(alg, t.act_mono(g, m2))
            want = a1 + a2
            mc.require(got == want, f"{g}(({alg.mono_str(m1)})*({alg.mono_str(m2)}))", want, got)
    return rep


def _add(x, y):
    from fractions import Fraction

    s = Fraction(x) + Fraction(y)
    return int(s) if s.denominator == 1 else s


def serre_operator(t: ActionTable, gi: str, gj: str, i: int, j: int, a: NcPoly) -> NcPoly:
    """sum_k (-1)^k op_i^(k) op_j op_i^(n-k) applied to a, n = 1 - c_ij."""
    n = 1 - t.alg.cartan.c(i, j)
    out = t.alg.zero()
    for k in range(n + 1):
        v = act_divided(t, gi, n - k, a)
        v = t.act(gj, v)
        v = act_divided(t, gi, k, v)
        out = out + v if k % 2 == 0 else out - v
    return out


def check_hopf_relations(t: ActionTable, max_deg: int, *, monomials=None,
                         anchor: str = "U_q(g) relations") -> VerificationReport:
    """Defining relations of U_q(g) (or the Borel parts present) as operators."""
    alg = t.alg
    cartan = alg.cartan
    rep = VerificationReport(f"hopf relations {alg.name}", {"max_deg": max_deg})
    gens = set(t.hopf.generators)
    basis = monomials if monomials is not None else _monomials(alg, max_deg)
    has_e = all(f"E{i}" in gens for i in cartan.indices)
    has_f = all(f"F{i}" in gens for i in cartan.indices)
    kc = rep.check("hopf/K_conjugation", anchor, max_deg)
    ef = rep.check("hopf/EF_commutator", anchor, max_deg) if has_e and has_f else None
    se = rep.check("hopf/serre_E", anchor, max_deg) if has_e and cartan.rank > 1 else None
    sf = rep.check("hopf/serre_F", anchor, max_deg) if has_f and cartan.rank > 1 else None
    for m in basis:
        a = NcPoly(alg, {m: ONE})
        for i in cartan.indices:
            for g in t.hopf.generators:
                j, _ = t.hopf.law(g)
                lhs = act_k(alg, i, 1, t.act(g, act_k(alg, i, -1, a)))
                sign = 1 if g[0] in "Ee" else -1
                rhs = t.act(g, a) * qp(sign * cartan.pairing(cartan.alpha(i), cartan.alpha(j)))
                kc.require(lhs == rhs, f"K{i} {g} K{i}^-1 ({alg.mono_str(m)})", rhs, lhs)
        if ef is not None:
            for i in cartan.indices:
                for j in cartan.indices:
                    lhs = t.act(f"E{i}", t.act(f"F{j}", a)) - t.act(f"F{j}", t.act(f"E{i}", a))
                    if i == j:
                        qi = qp(cartan.di(i))
                        rhs = (act_k(alg, i, 1, a) - act_k(alg, i, -1, a)) * (qi - qi.inv()).inv()
                    else:
                        rhs = alg.zero()
                    ef.require(lhs == rhs, f"[E{i},F{j}]({alg.mono_str(m)})", rhs, lhs)
        for chk, letter in ((se, "E"), (sf, "F")):
            if chk is None:
                continue
            for i in cartan.indices:
                for j in cartan.indices:
                    if i == j:
                        continue
                    v = serre_operator(t, f"{letter}{i}", f"{letter}{j}", i, j, a)
                    chk.require(v.is_zero(), f"serre_{letter}({i},{j})({alg.mono_str(m)})", 0, v)
    return rep


def check_local_nilpotence(t: ActionTable, max_deg: int) -> VerificationReport:
    alg = t.alg
    rep = VerificationReport(f"nilpotence {alg.name}", {"max_deg": max_deg})
    c = rep.check("action/E_nilpotent", "locally nilpotent raising operators", max_deg)
    for m in _monomials(alg, max_deg):
        for i in alg.cartan.indices:
            a = NcPoly(alg, {m: ONE})
            steps = 0
            while a and steps <= alg.degree_of(m) + 1:
                a = t.act(f"E{i}", a)
                steps += 1
            c.require(not a, f"E{i}^n({alg.mono_str(m)})", 0, a)
    return rep


# ----------------------------------------------------------------------
# presets

def preset_action_cqU(alg: Presentation) -> ActionTable:
    """E_i(x_j) = delta_ij on simple generators; F_i(x) = (x_i x - K_i^-1(x) x_i)/(q_i - q_i^-1)."""
    if alg.meta.get("kind") != "cqU":
        raise ActionError("expected a C_q[U] preset")
    cartan = alg.cartan
    t = ActionTable(hopf_spec("Uq_g", cartan), alg, meta={"preset": "cqU"})
    simple = alg.meta["simple"]
    for i in cartan.indices:
        for j, nm in enumerate(simple, 1):
            t.set_image(f"E{i}", nm, alg.one() if i == j else alg.zero())
    # composite root vectors: apply the law to their defining words
    for nm, raw in alg.meta["root_vectors"].items():
        if nm in simple:
            continue
        for i in cartan.indices:
            val = alg.zero()
            for word, c in raw.items():
                val = val + c * t.act_raw(f"E{i}", list(word))
            t.set_image(f"E{i}", nm, val)
    for i in cartan.indices:
        xi = alg.gen(simple[i - 1])
        qi = qp(cartan.di(i))
        for g in alg.gens:
            x = alg.gen(g.name)
            val = (xi * x - act_k(alg, i, -1, x) * xi) * (qi - qi.inv()).inv()
            t.set_image(f"F{i}", g.name, val)
    return t


def _qmat_table(alg: Presentation, a: int, b: int) -> ActionTable:
    m, n = alg.meta["shape"]
    t = ActionTable(hopf_spec("Uq_g", alg.cartan), alg, meta={"preset": "qmat", "twist": (a, b)})
    for i in range(1, m):
        for k in range(1, n + 1):
            t.set_image(f"E{i}", f"x{i + 1}{k}", alg.gen(f"x{i}{k}") * qp(a))
            t.set_image(f"F{i}", f"x{i}{k}", alg.gen(f"x{i + 1}{k}") * qp(b))
    return t


def preset_action_qmatrix(alg: Presentation, *, search: range = range(-1, 2),
                          certify_deg: int = 3) -> ActionTable:
    """Row action of U_q(sl_m) on quantum m x n matrices.

    E_i(x_{i+1,k}) = q^a x_{i,k} and F_i(x_{i,k}) = q^b x_{i+1,k}.  Every (a, b) in
    the search box is certified; survivors must also give E_i(x_{i,1}^-1 x_{i+1,1}) = 1,
    which forces a = 0.
    """
    if alg.meta.get("kind") != "qmat":
        raise ActionError("expected a quantum matrix preset")
    m, n = alg.meta["shape"]
    if m < 2:
        return ActionTable(hopf_spec("Uq_g", alg.cartan), alg, meta={"preset": "qmat", "twist": (0, 0)})
    passing = []
    for a, b in product(search, repeat=2):
        t = _qmat_table(alg, a, b)
        ok = check_action_well_defined(t, certify_deg, pair_limit=600).passed
        ok = ok and check_hopf_relations(t, min(certify_deg, 2)).passed
        if ok:
            passing.append((a, b))
    # E_i(x_{i,1}^-1 x_{i+1,1}) = x_{i,1}^-1 E_i(x_{i+1,1}) = q^a since x_{i,1} is killed by E_i
    chosen = [(a, b) for a, b in passing if a == 0]
    if len(chosen) != 1:
        raise ActionError(f"no unique certified twist: {passing}")
    t = _qmat_table(alg, *chosen[0])
    t.meta["certified_twists"] = passing
    return t


def extend_action_to_localization(t: ActionTable, loc: Presentation) -> ActionTable:
    """Transport a quantum-matrix action to the localized 3 x 2 presentation."""
    from .presets import _transport

    parent = loc.meta["parent"]
    if t.alg is not parent and t.alg.name != parent.name:
        raise ActionError("action is not on the parent algebra of this localization")
    out = ActionTable(t.hopf, loc, meta=dict(t.meta, localized=True))
    delta = parent.parse("x11*x22 - q^-1*x12*x21")
    for g in t.hopf.generators:
        for gen in loc.gens:
            if gen.name == "D2":
                val = _transport(t.act(g, delta), parent, loc)
            else:
                val = _transport(t.act(g, parent.gen(gen.name)), parent, loc)
            out.set_image(g, gen.name, val)
    return out


def action_from_images(hopf: HopfSpec, alg: Presentation, images: dict) -> ActionTable:
    t = ActionTable(hopf, alg)
    for (g, name), val in images.items():
        t.set_image(g, name, val)
    return t

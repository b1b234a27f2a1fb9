"""Top raising operators, nu-vectors, highest-weight kernels and factorization.

A reduced word w = (i_1, ..., i_m) is applied left to right: first the top
divided power of E_{i_1}, then E_{i_2}, and so on.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .action import ActionTable, act_divided
from .linalg import Echelon, kernel, rank
from .ncpoly import NcPoly, Presentation
from .report import VerificationReport
from .scalar import ONE


class AdaptedError(ValueError):
    pass


def ell(t: ActionTable, i: int, a: NcPoly) -> int:
    if a.is_zero():
        raise AdaptedError("ell of zero")
    n = 0
    cur = a
    while True:
        nxt = t.act(f"E{i}", cur)
        if nxt.is_zero():
            return n
        n += 1
        cur = nxt


def e_top(t: ActionTable, i: int, a: NcPoly) -> NcPoly:
    return act_divided(t, f"E{i}", ell(t, i, a), a)


def _check_word(t: ActionTable, w) -> tuple:
    w = tuple(w)
    if not t.alg.cartan.is_reduced(w):
        raise AdaptedError(f"word {w} is not reduced")
    return w


def e_top_word(t: ActionTable, w, a: NcPoly) -> NcPoly:
    for i in _check_word(t, w):
        a = e_top(t, i, a)
    return a


def nu(t: ActionTable, w, a: NcPoly) -> tuple:
    out = []
    for i in _check_word(t, w):
        n = ell(t, i, a)
        out.append(n)
        a = act_divided(t, f"E{i}", n, a)
    return tuple(out)


def nu_and_top(t: ActionTable, w, a: NcPoly):
    out = []
    for i in w:
        n = ell(t, i, a)
        out.append(n)
        a = act_divided(t, f"E{i}", n, a)
    return tuple(out), a


def is_highest_weight(t: ActionTable, a: NcPoly) -> bool:
    return all(t.act(f"E{i}", a).is_zero() for i in t.alg.cartan.indices)


# ----------------------------------------------------------------------
# highest-weight kernels

def _group(alg: Presentation, monos):
    groups: dict = {}
    for m in monos:
        groups.setdefault((alg.weight_of(m), alg.grade_of(m)), []).append(m)
    return groups


def hw_kernel(t: ActionTable, monos) -> list[NcPoly]:
    """Basis of the elements of span(monos) killed by every E_i."""
    alg = t.alg
    out = []
    groups = _group(alg, monos)
    for key in sorted(groups, key=str):
        ms = groups[key]
        cols = []
        for m in ms:
            v = {}
            for i in alg.cartan.indices:
                for mm, c in t.act_mono(f"E{i}", m).items():
                    v[(i, alg.mono_key(mm), mm)] = c
            cols.append(v)
        for vec in _reduced_kernel(cols):
            out.append(NcPoly(alg, {m: c for m, c in zip(ms, vec) if c}))
    return out


def _reduced_kernel(cols):
    """Kernel basis in reduced echelon form (pivot coefficient 1 on the latest monomial)."""
    ker = kernel(cols, ONE)
    if not ker:
        return []
    n = len(cols)
    e = Echelon()
    for v in ker:
        e.add({n - 1 - k: x for k, x in enumerate(v) if x})
    out = []
    for piv in sorted(e.rows):
        row = e.rows[piv]
        zero = row[piv] - row[piv]
        vec = [zero] * n
        for k, x in row.items():
            vec[n - 1 - k] = x
        out.append(vec)
    return out


def hw_basis(t: ActionTable, deg: int) -> list[NcPoly]:
    return hw_kernel(t, t.alg.graded_basis(deg))


# ----------------------------------------------------------------------
# adapted bases

@dataclass
class AdaptedBasis:
    word: tuple
    entries: dict = field(default_factory=dict)  # nu vector -> NcPoly
    max_deg: int = 0

    def keys_by_degree(self, alg: Presentation) -> dict:
        out: dict = {}
        for k, b in self.entries.items():
            out.setdefault(b.degree(), []).append(k)
        return out


def build_adapted_basis(t: ActionTable, w, deg: int) -> AdaptedBasis:
    """One element per attained nu-value, normalized so that its top value is 1.

    Per degree and weight the monomials are reduced against the elements
    already chosen with the same nu-value; anything left over with a repeated
    nu-value means the top operator does not separate the piece.
    """
    w = _check_word(t, w)
    alg = t.alg
    basis = AdaptedBasis(w, {}, deg)
    for d in range(deg + 1):
        monos = alg.graded_basis(d)
        groups = _group(alg, monos)
        for key in sorted(groups, key=str):
            chosen: dict = {}
            for m in groups[key]:
                a = NcPoly(alg, {m: ONE})
                while not a.is_zero():
                    v, top = nu_and_top(t, w, a)
                    if v not in chosen:
                        break
                    b, btop = chosen[v]
                    c = _scalar_ratio(top, btop)
                    if c is None:
                        raise AdaptedError(
                            f"nu-value {v} is shared by independent elements at {alg.mono_str(m)}"
                        )
                    a = a - b * c
                if a.is_zero():
                    continue
                if not top.is_scalar():
                    raise AdaptedError(f"top of {alg.mono_str(m)} is not a scalar: {top}")
                chosen[v] = (a, top)
            for v, (a, top) in chosen.items():
                if v in basis.entries:
                    raise AdaptedError(f"nu-value {v} attained in two pieces")
                basis.entries[v] = a * top.constant().inv()
    return basis


def _scalar_ratio(x: NcPoly, y: NcPoly):
    if y.is_zero():
        return None
    m = next(iter(y.terms))
    c = x.coeff(m) / y.terms[m]
    return c if x == y * c else None


def check_adapted(t: ActionTable, w, deg: int, samples: int = 20, seed: int = 0,
                  monomials=None) -> VerificationReport:
    w = _check_word(t, w)
    alg = t.alg
    rep = VerificationReport(f"adapted {alg.name} {w}", {"word": list(w), "max_deg": deg,
                                                         "samples": samples, "seed": seed})
    c = rep.check("adapted/top_is_highest_weight", "top operators land in highest weight", deg)
    monos = monomials if monomials is not None else alg.basis_upto(deg)
    for m in monos:
        a = NcPoly(alg, {m: ONE})
        top = e_top_word(t, w, a)
        c.require(is_highest_weight(t, top), alg.mono_str(m), "highest weight", top)
    rng = random.Random(seed)
    by_deg = [[m for m in monos if alg.degree_of(m) == d] for d in range(deg + 1)]
    by_deg = [x for x in by_deg if x]
    for _ in range(samples if by_deg else 0):
        pool = rng.choice(by_deg)
        k = min(len(pool), rng.randint(2, 4))
        a = alg.zero()
        for m in rng.sample(pool, k):
            a = a + NcPoly(alg, {m: ONE}) * rng.randint(-3, 3)
        if a.is_zero():
            continue
        top = e_top_word(t, w, a)
        c.require(is_highest_weight(t, top), a, "highest weight", top)
    c.note = "verified on tested set"
    return rep


# ----------------------------------------------------------------------
# factorization

@dataclass
class FactorizationWitness:
    rows: list = field(default_factory=list)

    def to_json(self):
        return {"rows": self.rows}


def _vec(a: NcPoly) -> dict:
    return dict(a.terms)


def eval_on_images(target: Presentation, src: Presentation, phi: dict, a: NcPoly) -> NcPoly:
    """phi extended multiplicatively from generator images."""
    out = target.zero()
    for m, c in a.terms.items():
        t = target.one()
        for k, e in m:
            img = phi[src.gens[k].name]
            if e < 0:
                raise AdaptedError("embedding of inverse letters is not supported")
            for _ in range(e):
                t = t * img
        out = out + c * t
    return out


def check_embedding(t: ActionTable, t0: ActionTable, phi: dict, *, anchor="embedding") -> VerificationReport:
    """phi respects the relations of the source and intertwines E_i, F_i, K_i on generators."""
    A, A0 = t.alg, t0.alg
    rep = VerificationReport(f"embedding {A0.name} -> {A.name}")
    rel = rep.check("embedding/relations", anchor, None)
    for key, terms in sorted(A0.rules.items()):
        h, s, g, e = key
        if s < 0 or e < 0:
            continue
        lhs = phi[A0.gens[h].name] ** s * phi[A0.gens[g].name] ** e
        rhs = eval_on_images(A, A0, phi, NcPoly(A0, terms))
        rel.require(lhs == rhs, f"{A0.gens[h].name}*{A0.gens[g].name}", rhs, lhs)
    simple = A0.meta.get("simple")
    if simple:
        from .presets import serre_free

        ser = rep.check("embedding/serre", anchor, None)
        cartan = A0.cartan
        for i in cartan.indices:
            for j in cartan.indices:
                if i == j:
                    continue
                val = A.zero()
                for word, c in serre_free(cartan, i, j).items():
                    p = A.one()
                    for a in word:
                        p = p * phi[simple[a]]
                    val = val + c * p
                ser.require(val.is_zero(), f"serre({i},{j})", 0, val)
    eq = rep.check("embedding/equivariance", anchor, None)
    for g in t0.hopf.generators:
        for gen in A0.gens:
            want = eval_on_images(A, A0, phi, t0.act(g, A0.gen(gen.name)))
            got = t.act(g, phi[gen.name])
            eq.require(got == want, f"{g}({gen.name})", want, got)
        for i in A0.cartan.indices:
            for gen in A0.gens:
                want = eval_on_images(A, A0, phi, t0.act(f"K{i}", A0.gen(gen.name)))
                got = t.act(f"K{i}", phi[gen.name])
                eq.require(got == want, f"K{i}({gen.name})", want, got)
    return rep


def verify_factorization(t: ActionTable, t0: ActionTable, phi: dict, deg: int, *,
                         word=None, mode: str = "graded", hw_deg: int | None = None,
                         anchor: str = "factorization") -> tuple[FactorizationWitness, VerificationReport]:
    """Check that (a, b) -> a * phi(b) is bijective from A+ (x) A0 onto A.

    ``graded``: per degree d, dim A_d = sum dim A+_{d1} dim A0_{d2} = rank of mu.
    ``filtered``: for algebras with inverted generators the pieces are the
    spans of monomials of formal degree <= d.  mu must be injective on the
    tested domain and its image must contain every such monomial.
    """
    A, A0 = t.alg, t0.alg
    rep = check_embedding(t, t0, phi, anchor=anchor)
    wit = FactorizationWitness()
    inj = rep.check("factorization/injective", anchor, deg)
    sur = rep.check("factorization/surjective", anchor, deg)
    a0_basis = [A0.graded_basis(d) for d in range(deg + 1)]
    deg0 = deg
    phi_cache = {m: eval_on_images(A, A0, phi, NcPoly(A0, {m: ONE})) for ms in a0_basis for m in ms}
    if mode == "graded":
        hw = [hw_basis(t, d) for d in range(deg + 1)]
        for d in range(deg + 1):
            dim_a = len(A.graded_basis(d))
            imgs = []
            for d1 in range(d + 1):
                for h in hw[d1]:
                    for m in a0_basis[d - d1]:
                        imgs.append(_vec(h * phi_cache[m]))
            r = rank(imgs)
            wit.rows.append({"degree": d, "dim_A": dim_a, "dim_domain": len(imgs), "rank": r})
            inj.require(r == len(imgs), f"degree {d}", len(imgs), r)
            sur.require(r == dim_a, f"degree {d}", dim_a, r)
    elif mode == "filtered":
        if word is None:
            raise AdaptedError("filtered mode needs a reduced word")
        word = _check_word(t, word)
        monos = A.basis_upto(deg)
        # injectivity on the domain of total degree <= deg
        hw_all = hw_kernel(t, A.basis_upto(deg if hw_deg is None else hw_deg))
        hw_by = [[h for h in hw_all if _fdeg(A, h) == d] for d in range(deg + 1)]
        for d in range(deg + 1):
            imgs = [_vec(h * phi_cache[m]) for d1 in range(d + 1) for h in hw_by[d1]
                    for m in a0_basis[d - d1]]
            r = rank(imgs)
            wit.rows.append({"degree": d, "dim_domain": len(imgs), "rank": r})
            inj.require(r == len(imgs), f"domain degree {d}", len(imgs), r)
        # surjectivity: every monomial is reassembled from highest-weight parts
        nus = {m: nu(t, word, NcPoly(A, {m: ONE})) for m in monos}
        height = max((sum(v) for v in nus.values()), default=0)
        basis0 = build_adapted_basis(t0, word, height)
        groups = _group(A, monos)
        for key in sorted(groups, key=str):
            wt, gr = key
            used = {}
            for m in groups[key]:
                a = NcPoly(A, {m: ONE})
                parts = decompose(t, a, basis0, phi, A0)
                back = reassemble(t, parts, basis0, phi, A0)
                sur.require(back == a, A.mono_str(m), a, back)
                for h, v in parts:
                    sur.require(is_highest_weight(t, h), f"part of {A.mono_str(m)}", "highest weight", h)
                    used[(_monic(A, h), v)] = None
            imgs = [_vec(h * eval_on_images(A, A0, phi, basis0.entries[v])) for h, v in used]
            r = rank(imgs)
            wit.rows.append({"weight": [str(x) for x in wt], "grade": list(gr),
                             "dim_A": len(groups[key]), "pairs_used": len(imgs), "rank": r})
            inj.require(r == len(imgs), f"piece {gr}", len(imgs), r)
        inj.note = sur.note = (f"formal degree <= {deg}; no finite grading is preserved, "
                               f"C_q[U] side taken to height {height}")
        deg0 = height
    else:
        raise AdaptedError(f"unknown mode {mode}")
    if word is not None:
        nc = rep.check("factorization/nu_sets", anchor, deg)
        nu_a = {nu(t, word, NcPoly(A, {m: ONE})) for m in A.basis_upto(deg)}
        top = max(deg, deg0)
        nu_0 = {nu(t0, word, NcPoly(A0, {m: ONE})) for m in A0.basis_upto(top)}
        nc.require(nu_a <= nu_0, "nu(A) inside nu(A0)", sorted(nu_0), sorted(nu_a - nu_0))
        small = {nu(t0, word, NcPoly(A0, {m: ONE})) for ms in a0_basis for m in ms}
        nc.require(small <= nu_a or mode == "filtered", "nu(A0) inside nu(A)", sorted(small),
                   sorted(small - nu_a))
        if mode == "filtered":
            via = {nu(t, word, phi_cache[m]) for ms in a0_basis for m in ms}
            nc.require(small == via, "nu(phi(b)) = nu(b)", sorted(small), sorted(via))
    eqv = rep.check("factorization/equivariance", anchor, deg)
    hw_small = hw_kernel(t, A.basis_upto(min(deg, 2)))
    for h in hw_small:
        for ms in a0_basis[: min(deg, 2) + 1]:
            for m in ms:
                prod = h * phi_cache[m]
                for i in A.cartan.indices:
                    got = t.act(f"E{i}", prod)
                    want = h * t.act(f"E{i}", phi_cache[m])
                    eqv.require(got == want, f"E{i}(h*phi({A0.mono_str(m)}))", want, got)
    return wit, rep


def _monic(alg: Presentation, a: NcPoly) -> NcPoly:
    lead = max(a.terms, key=alg.mono_key)
    return a * a.terms[lead].inv()


def _fdeg(alg: Presentation, a: NcPoly) -> int:
    return max(alg.degree_of(m) for m in a.terms)


def _wsub(a, b):
    from fractions import Fraction

    out = []
    for x, y in zip(a, b):
        s = Fraction(x) - Fraction(y)
        out.append(int(s) if s.denominator == 1 else s)
    return tuple(out)


def decompose(t: ActionTable, a: NcPoly, basis: AdaptedBasis, phi=None, src: Presentation = None,
              max_steps: int = 10000) -> list:
    """Peel off top parts: a = sum_k h_k * b_{nu_k} with each h_k highest weight."""
    if a.is_zero():
        raise AdaptedError("decompose of zero")
    out = []
    cur = a
    last = None
    images = {}
    for _ in range(max_steps):
        if cur.is_zero():
            return out
        v, top = nu_and_top(t, basis.word, cur)
        if last is not None and not v < last:
            raise AdaptedError(f"nu did not decrease: {last} -> {v}")
        if v not in basis.entries:
            raise AdaptedError(f"nu-value {v} outside the adapted basis (degree cap)")
        if v not in images:
            b = basis.entries[v]
            images[v] = b if phi is None else eval_on_images(t.alg, src, phi, b)
        out.append((top, v))
        cur = cur - top * images[v]
        last = v
    raise AdaptedError("decompose did not terminate")


def reassemble(t: ActionTable, parts, basis: AdaptedBasis, phi=None, src=None) -> NcPoly:
    out = t.alg.zero()
    for h, v in parts:
        b = basis.entries[v]
        if phi is not None:
            b = eval_on_images(t.alg, src, phi, b)
        out = out + h * b
    return out

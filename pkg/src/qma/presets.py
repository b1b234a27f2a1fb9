"""Built-in presentations.

* ``preset_qmatrix(m, n)``: quantum m x n matrices, generators row-major.
* ``preset_cqU(cartan)``: the algebra generated by x_i (weight -alpha_i) modulo
  the quantum Serre relations, in PBW form.  Composite root vectors are
  q-commutators along the convex order of the reduced word (1, 2, 1, ...) and
  the straightening rules are solved for with the free-quotient oracle.
* ``preset_localized_qmat32()``: quantum 3 x 2 matrices with x11 and the
  leading 2 x 2 minor inverted.
* ``preset_uqgstar(cartan)``: K_i, and two commuting copies of the PBW algebra.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product

from .cartan import CartanData, preset_cartan
from .freequot import FreeQuotient, free_add, free_mul, free_quotient_dims
from .linalg import express, rank
from .ncpoly import GenDecl, NcPoly, Presentation, PresentationError
from .scalar import ONE, q_factorial, qp


# ----------------------------------------------------------------------
# quantum matrices

def sl_epsilon(m: int, j: int) -> tuple:
    """epsilon_j of sl_m in simple-root coordinates (rational)."""
    return tuple(_frac((1 if i >= j else 0) - Fraction(i, m)) for i in range(1, m))


def _frac(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else x


def type_a(m: int) -> CartanData:
    r = m - 1
    C = [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(r)] for i in range(r)]
    return CartanData(C, [1] * r, f"A{r}" if r else "A0")


def qmat_name(i: int, j: int) -> str:
    return f"x{i}{j}"


def preset_qmatrix(m: int, n: int) -> Presentation:
    if m < 1 or n < 1:
        raise PresentationError("need m, n >= 1")
    cartan = type_a(m)
    gens = []
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            grade = tuple(int(k == i) for k in range(1, m + 1)) + tuple(int(k == j) for k in range(1, n + 1))
            gens.append(GenDecl(qmat_name(i, j), sl_epsilon(m, i), grade=grade))
    alg = Presentation(f"qmat({m},{n})", cartan, gens)
    x = lambda i, j: alg.letter(qmat_name(i, j))
    q = qp(1)
    for (i, j), (k, l) in product(product(range(1, m + 1), range(1, n + 1)), repeat=2):
        if (k, l) <= (i, j):
            continue
        b, a = qmat_name(k, l), qmat_name(i, j)
        if k == i:
            rhs = q * (x(i, j) * x(k, l))
        elif l == j:
            rhs = q * (x(i, j) * x(k, l))
        elif l < j:
            rhs = x(i, j) * x(k, l)
        else:
            rhs = x(i, j) * x(k, l) + (q - q.inv()) * (x(i, l) * x(k, j))
        alg.add_rule(b, a, rhs)
    alg.meta["kind"] = "qmat"
    alg.meta["shape"] = (m, n)
    return alg


def qmat_relations_free(m: int, n: int) -> tuple[list, list, list]:
    """Letters, grades and defining relations of quantum matrices as free data."""
    names = [qmat_name(i, j) for i in range(1, m + 1) for j in range(1, n + 1)]
    idx = {nm: k for k, nm in enumerate(names)}
    grades = []
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            grades.append(tuple(int(k == i) for k in range(1, m + 1)) + tuple(int(k == j) for k in range(1, n + 1)))
    q = qp(1)
    rels = []
    cells = list(product(range(1, m + 1), range(1, n + 1)))
    for (i, j), (k, l) in product(cells, repeat=2):
        if (k, l) <= (i, j):
            continue
        b, a = idx[qmat_name(k, l)], idx[qmat_name(i, j)]
        r = {(b, a): ONE}
        if k == i or l == j:
            r[(a, b)] = -q
        elif l < j:
            r[(a, b)] = -ONE
        else:
            r[(a, b)] = -ONE
            r[(idx[qmat_name(i, l)], idx[qmat_name(k, j)])] = -(q - q.inv())
        rels.append(r)
    return names, grades, rels


# ----------------------------------------------------------------------
# quantum Serre relations and the PBW form of C_q[U]

def serre_free(cartan: CartanData, i: int, j: int) -> dict:
    """sum_k (-1)^k y_i^(k) y_j y_i^(1-c_ij-k) as a free polynomial (letters 0-based)."""
    n = 1 - cartan.c(i, j)
    d = cartan.di(i)
    out = {}
    for k in range(n + 1):
        coeff = (q_factorial(k, d) * q_factorial(n - k, d)).inv()
        if k % 2:
            coeff = -coeff
        word = (i - 1,) * k + (j - 1,) + (i - 1,) * (n - k)
        out[word] = coeff
    return out


def serre_relations_free(cartan: CartanData) -> list[dict]:
    return [
        serre_free(cartan, i, j)
        for i in cartan.indices
        for j in cartan.indices
        if i != j
    ]


def root_name(beta, prefix="x") -> str:
    return prefix + "".join(str(i + 1) * int(c) for i, c in enumerate(beta))


@lru_cache(maxsize=None)
def pbw_data(cartan: CartanData):
    """Convex order, root vectors (free polynomials) and straightening rules.

    Returns (roots, root_vectors, rules) where rules maps (b, a) root positions
    with b > a to {exponent tuple over roots: coefficient}.
    """
    r = cartan.rank
    if r == 1:
        return ((1,),), {(1,): {(0,): ONE}}, {}
    if r != 2:
        raise PresentationError("PBW presets are implemented for rank <= 2")
    word = cartan.longest_word()
    roots = tuple(cartan.convex_roots(word))
    pos = {b: k for k, b in enumerate(roots)}
    height = lambda b: sum(b)
    vec: dict = {}
    for beta in sorted(roots, key=height):
        if height(beta) == 1:
            vec[beta] = {(beta.index(1),): ONE}
            continue
        k = pos[beta]
        cands = []
        for gamma in roots[:k]:
            delta = tuple(x - y for x, y in zip(beta, gamma))
            if delta in pos and pos[delta] > k:
                cands.append((max(height(gamma), height(delta)), height(gamma), gamma, delta))
        if not cands:
            raise PresentationError(f"no decomposition for root {beta}")
        _, _, gamma, delta = min(cands)
        dmin = min(_root_d(cartan, gamma), _root_d(cartan, delta))
        pair = cartan.pairing(gamma, delta)
        num = free_add(free_mul(vec[delta], vec[gamma]), free_mul(vec[gamma], vec[delta]), -qp(pair))
        scale = (qp(dmin) - qp(-dmin)).inv()
        vec[beta] = {w: c * scale for w, c in num.items()}
    fq = FreeQuotient([cartan.alpha(1), cartan.alpha(2)], serre_relations_free(cartan))

    def expand(exps):
        poly = {(): ONE}
        for b, e in zip(roots, exps):
            for _ in range(e):
                poly = free_mul(poly, vec[b])
        return poly

    pbw_cache: dict = {}

    def pbw_monos(w):
        if w in pbw_cache:
            return pbw_cache[w]
        out = []
        for exps in _exponents(roots, w):
            _, v = fq.reduce_poly(expand(exps))
            out.append((exps, v))
        n = sum(w)
        dim = fq.piece_dim(n, w)
        if len(out) != dim or rank([v for _, v in out]) != dim:
            raise PresentationError(f"PBW monomials are not a basis in weight {w}")
        pbw_cache[w] = out
        return out

    rules = {}
    for b in range(len(roots)):
        for a in range(b):
            w = tuple(x + y for x, y in zip(roots[a], roots[b]))
            _, target = fq.reduce_poly(free_mul(vec[roots[b]], vec[roots[a]]))
            monos = pbw_monos(w)
            coeffs = express(target, [v for _, v in monos])
            if coeffs is None:
                raise PresentationError("straightening failed")
            rules[(b, a)] = {exps: c for (exps, _), c in zip(monos, coeffs) if c}
    return roots, vec, rules


def _root_d(cartan, beta):
    return cartan.pairing(beta, beta) // 2


def _exponents(roots, w):
    out = []

    def rec(k, rem, acc):
        if k == len(roots):
            if all(x == 0 for x in rem):
                out.append(tuple(acc))
            return
        b = roots[k]
        e = 0
        while all(x >= 0 for x in rem):
            rec(k + 1, rem, acc + [e])
            rem = tuple(x - y for x, y in zip(rem, b))
            e += 1

    rec(0, tuple(w), [])
    return out


def _pbw_presentation(name, cartan, prefix="x", suffix="", extra_gens=(), family_grade=None):
    roots, vec, rules = pbw_data(cartan)
    gens = list(extra_gens)
    off = len(gens)
    for beta in roots:
        gens.append(GenDecl(root_name(beta, prefix) + suffix, tuple(-x for x in beta), degree=sum(beta)))
    return roots, vec, rules, gens, off


def _install_pbw_rules(alg, roots, rules, off, prefix="x", suffix=""):
    names = [root_name(b, prefix) + suffix for b in roots]
    for (b, a), terms in rules.items():
        rhs = {}
        for exps, c in terms.items():
            m = tuple((off + k, e) for k, e in enumerate(exps) if e)
            rhs[m] = c
        alg.add_rule(names[b], names[a], rhs)
    return names


def preset_cqU(cartan: CartanData | str) -> Presentation:
    if isinstance(cartan, str):
        cartan = preset_cartan(cartan)
    if cartan.rank > 2:
        raise PresentationError("C_q[U] presets are implemented for rank <= 2")
    roots, vec, rules, gens, off = _pbw_presentation(None, cartan)
    alg = Presentation(f"CqU({cartan.label or 'custom'})", cartan, gens)
    names = _install_pbw_rules(alg, roots, rules, off)
    simple = [root_name(cartan.alpha(i)) for i in cartan.indices]
    root_vectors = {}
    for beta, nm in zip(roots, names):
        root_vectors[nm] = {tuple(simple[a] for a in w): c for w, c in vec[beta].items()}
    alg.meta.update(kind="cqU", simple=simple, root_vectors=root_vectors)
    return alg


def serre_poly(alg: Presentation, cartan: CartanData, images: dict, i: int, j: int) -> NcPoly:
    """The Serre element evaluated on images of the simple generators."""
    out = alg.zero()
    for word, c in serre_free(cartan, i, j).items():
        t = alg.one()
        for a in word:
            t = t * images[a + 1]
        out = out + c * t
    return out


def eval_root_vector(alg: Presentation, raw: dict, images: dict) -> NcPoly:
    """Evaluate a free polynomial over simple generator names on images."""
    out = alg.zero()
    for word, c in raw.items():
        t = alg.one()
        for nm in word:
            t = t * images[nm]
        out = out + c * t
    return out


# ----------------------------------------------------------------------
# localized 3 x 2 quantum matrices

@lru_cache(maxsize=None)
def preset_localized_qmat32() -> Presentation:
    """Generators D2 = Delta_2 and x11 (both invertible), x12, x21, x31, x32.

    x22 is not a generator: it is the alias x11^-1 (D2 + q^-1 x12 x21).  Every
    rule is obtained by computing the product of the two preimages in the
    unlocalized algebra and mapping the result across.
    """
    qm = preset_qmatrix(3, 2)
    cartan = qm.cartan
    gq = {g.name: g for g in qm.gens}
    gens = [
        GenDecl("D2", tuple(_frac(a + b) for a, b in zip(gq["x11"].weight, gq["x22"].weight)),
                invertible=True, degree=2, grade=(1, 1, 0, 1, 1)),
        GenDecl("x11", gq["x11"].weight, invertible=True, grade=gq["x11"].grade),
    ]
    for nm in ("x12", "x21", "x31", "x32"):
        gens.append(GenDecl(nm, gq[nm].weight, grade=gq[nm].grade))
    loc = Presentation("localized-qmat32", cartan, gens)
    q = qp(1)
    delta_q = qm.parse("x11*x22 - q^-1*x12*x21")

    # Delta_2 is central in the upper 2 x 2 block; these three rules are needed
    # before x22 can be written down and are re-derived below as a check
    for nm in ("x11", "x12", "x21"):
        loc.add_rule(nm, "D2", {loc.mono("D2", 1, nm, 1): ONE})
    upper = [("x12", "x11"), ("x21", "x11"), ("x21", "x12")]
    for b, a in upper:
        loc.add_rule(b, a, _transport(qm.gen(b) * qm.gen(a), qm, loc))
    # x22 through the cancellation x11 * x22 = D2 + q^-1 x12 x21
    x22 = loc.letter("x11", -1) * (loc.letter("D2") + q.inv() * loc.letter("x12") * loc.letter("x21"))
    loc.add_alias("x22", x22)
    image = lambda p: _transport(p, qm, loc)

    pre = {"D2": delta_q}
    for nm in ("x11", "x12", "x21", "x31", "x32"):
        pre[nm] = qm.gen(nm)
    for b in ("x31", "x32"):
        for a in ("D2", "x11", "x12", "x21", "x31"):
            if a != b and loc.index[a] < loc.index[b]:
                loc.add_rule(b, a, image(pre[b] * pre[a]))
    for nm in ("x11", "x12", "x21"):
        got = image(pre[nm] * delta_q)
        want = loc.letter("D2") * loc.letter(nm)
        if got != want:
            raise PresentationError(f"{nm} does not commute with Delta_2: {got}")
    loc.add_alias("Delta2", loc.letter("D2"))
    loc.add_alias("y", loc.letter("x11", -1))
    loc.add_alias("z", loc.letter("D2", -1))
    loc.meta.update(kind="localized-qmat32", parent=qm, image=image,
                    hw_generators=["D2", "x11", "x12"])
    return loc


def _transport(p: NcPoly, src: Presentation, dst: Presentation) -> NcPoly:
    """Map a polynomial across by generator names (aliases allowed in dst)."""
    out = dst.zero()
    for m, c in p.terms.items():
        t = dst.one()
        for k, e in m:
            t = t * (dst.gen(src.gens[k].name) ** e)
        out = out + c * t
    return out


# ----------------------------------------------------------------------
# U_q(g*)

def preset_uqgstar(cartan: CartanData | str) -> Presentation:
    if isinstance(cartan, str):
        cartan = preset_cartan(cartan)
    if cartan.rank > 2:
        raise PresentationError("U_q(g*) presets are implemented for rank <= 2")
    roots, vec, rules = pbw_data(cartan)
    gens = [GenDecl(f"K{i}", cartan.zero(), invertible=True) for i in cartan.indices]
    offs = []
    for fam in (1, 2):
        offs.append(len(gens))
        for beta in roots:
            gens.append(GenDecl(f"{root_name(beta, 'F')}_{fam}", tuple(-x for x in beta), degree=sum(beta)))
    alg = Presentation(f"Uq_gstar({cartan.label or 'custom'})", cartan, gens)
    for i in cartan.indices:
        for j in cartan.indices:
            if j > i:
                alg.add_rule(f"K{j}", f"K{i}", {alg.mono(f"K{i}", 1, f"K{j}", 1): ONE})
    for fam, off in zip((1, 2), offs):
        _install_pbw_rules(alg, roots, rules, off, "F", f"_{fam}")
        for k, beta in enumerate(roots):
            g = alg.gens[off + k]
            for i in cartan.indices:
                c = qp(-cartan.alpha_pairing(i, g.weight))
                alg.add_rule(g.name, f"K{i}", {alg.mono(f"K{i}", 1, g.name, 1): c})
    for b in range(len(roots)):
        for a in range(len(roots)):
            nb = alg.gens[offs[1] + b].name
            na = alg.gens[offs[0] + a].name
            alg.add_rule(nb, na, {alg.mono(na, 1, nb, 1): ONE})
    simple = {fam: [f"F{i}_{fam}" for i in cartan.indices] for fam in (1, 2)}
    alg.meta.update(kind="uqgstar", simple=simple)
    return alg


def uqgstar_family_relations(cartan: CartanData) -> list[dict]:
    return serre_relations_free(cartan)


PRESET_NAMES = {
    "cqU-A1": lambda: preset_cqU("A1"),
    "cqU-A2": lambda: preset_cqU("A2"),
    "cqU-B2": lambda: preset_cqU("B2"),
    "cqU-G2": lambda: preset_cqU("G2"),
    "qmat-1-1": lambda: preset_qmatrix(1, 1),
    "qmat-2-2": lambda: preset_qmatrix(2, 2),
    "qmat-3-2": lambda: preset_qmatrix(3, 2),
    "localized-qmat32": preset_localized_qmat32,
    "uqgstar-A1": lambda: preset_uqgstar("A1"),
    "uqgstar-A2": lambda: preset_uqgstar("A2"),
}


# ----------------------------------------------------------------------
# graded dimensions against the free-quotient oracle

def oracle_dims(alg: Presentation, max_deg: int) -> tuple[list[int], list[int]]:
    """(engine count, free-quotient count) per degree.

    For U_q(g*) only the K-free part is compared: two Serre families that
    commute with each other.
    """
    kind = alg.meta.get("kind")
    cartan = alg.cartan
    if kind == "cqU":
        grades = [cartan.alpha(i) for i in cartan.indices]
        oracle = free_quotient_dims(cartan.rank, serre_relations_free(cartan), max_deg, grades)
        engine = [len(alg.graded_basis(d)) for d in range(max_deg + 1)]
    elif kind == "qmat":
        _, grades, rels = qmat_relations_free(*alg.meta["shape"])
        oracle = free_quotient_dims(len(grades), rels, max_deg, grades)
        engine = [len(alg.graded_basis(d)) for d in range(max_deg + 1)]
    elif kind == "uqgstar":
        r = cartan.rank
        grades = [cartan.alpha(i) + (0,) for i in cartan.indices] + \
                 [cartan.alpha(i) + (1,) for i in cartan.indices]
        rels = []
        for off in (0, r):
            for rel in serre_relations_free(cartan):
                rels.append({tuple(a + off for a in w): c for w, c in rel.items()})
        for i in range(r):
            for j in range(r):
                rels.append({(i, r + j): ONE, (r + j, i): -ONE})
        oracle = free_quotient_dims(2 * r, rels, max_deg, grades)
        kidx = {alg.index[f"K{i}"] for i in cartan.indices}
        engine = [sum(1 for m in alg.graded_basis(d) if not any(k in kidx for k, _ in m))
                  for d in range(max_deg + 1)]
    elif kind == "localized-qmat32":
        engine = [len(alg.graded_basis(d)) for d in range(max_deg + 1)]
        oracle = [_localized_rank(alg, d) for d in range(max_deg + 1)]
    elif all(not g.invertible and g.degree == 1 for g in alg.gens):
        # any polynomial presentation: the rules themselves, as free relations
        rels = []
        for (kb, sb, ka, sa), terms in alg.rule_log:
            rel = {(kb,) * sb + (ka,) * sa: ONE}
            for m, c in terms.items():
                w = tuple(k for k, e in m for _ in range(e))
                rel[w] = rel.get(w, 0) - c
            rels.append({w: c for w, c in rel.items() if c})
        grades = [g.grade if g.grade is not None else g.weight for g in alg.gens]
        oracle = free_quotient_dims(len(alg.gens), rels, max_deg, grades)
        engine = [len(alg.graded_basis(d)) for d in range(max_deg + 1)]
    else:
        raise PresentationError(f"no free-quotient oracle for kind {kind!r}")
    return engine, oracle


def _localized_rank(loc: Presentation, d: int) -> int:
    """Rank of the degree-d normal monomials after clearing denominators.

    D2^a x11^b R (R free of D2, x11) is multiplied on the left by
    x11^Nb D2^Na, which is injective, and lands on Delta_2^(a+Na) x11^(b+Nb) R
    in the unlocalized quantum matrices, whose dimensions the free-quotient
    oracle certifies.  Na, Nb are fixed per (weight, grade) group.
    """
    qm = loc.meta["parent"]
    delta = qm.parse("x11*x22 - q^-1*x12*x21")
    kd, kx = loc.index["D2"], loc.index["x11"]
    groups: dict = {}
    for m in loc.graded_basis(d):
        groups.setdefault((loc.weight_of(m), loc.grade_of(m)), []).append(m)
    total = 0
    for ms in groups.values():
        exps = [(dict(m).get(kd, 0), dict(m).get(kx, 0)) for m in ms]
        na = max(0, -min(a for a, _ in exps))
        nb = max(0, -min(b for _, b in exps))
        vecs = []
        for m, (a, b) in zip(ms, exps):
            p = delta ** (a + na) * qm.gen("x11") ** (b + nb)
            for k, e in m:
                if k not in (kd, kx):
                    p = p * qm.gen(loc.gens[k].name) ** e
            vecs.append(dict(p.terms))
        total += rank(vecs)
    return total


def check_dimensions(alg: Presentation, max_deg: int):
    from .report import VerificationReport

    rep = VerificationReport(f"dims {alg.name}", {"max_deg": max_deg})
    chk = rep.check("presentation/graded_dims", "free-quotient oracle", max_deg)
    engine, oracle = oracle_dims(alg, max_deg)
    for d, (a, b) in enumerate(zip(engine, oracle)):
        chk.require(a == b, f"degree {d}", b, a)
    return rep

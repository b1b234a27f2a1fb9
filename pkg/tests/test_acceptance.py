"""End-to-end acceptance checks, one test per criterion, exact equality throughout."""

import random
import time

import sympy

from qma.action import ActionTable, hopf_spec, preset_action_cqU, preset_action_qmatrix
from qma.adapted import build_adapted_basis, check_embedding, decompose, reassemble, verify_factorization
from qma.braided import TwistedTensorAlgebra, check_twisted, cross_validate_hw
from qma.cartan import preset_cartan
from qma.classical import (HatContext, build_classical_crossed, check_epsilon, check_serre_hatf,
                           check_specialization, classical_cqU, gauss_factor_3x2, matmul, random_matrix,
                           specialize_poly, specialize_algebra, torus_bminus, torus_identity)
from qma.gstar import (build_crossed, check_gstar, eta_check, preset_scalars,
                       preset_weight_torus, restrict_gstar, sub_presentation, torus_table)
from qma.ncpoly import NcPoly, check_local_confluence
from qma.presets import PRESET_NAMES, oracle_dims, preset_cqU
from qma.scalar import ONE

from conftest import record_criterion

A2 = preset_cartan("A2")


def _status(rep, names):
    by = {c.name: c for c in rep.checks}
    return all(n in by and by[n].status == "pass" and by[n].tested > 0 for n in names)


def test_criterion_1_gstar_serre(cq_a2_ctx, loc_ctx):
    t0 = time.time()
    fams = ("gstar/serre_family_1", "gstar/serre_family_2", "gstar/commute_1_2")
    r1 = check_gstar(cq_a2_ctx, 5)
    r2 = check_gstar(loc_ctx, 4)
    ok = _status(r1, fams) and _status(r2, fams) and r1.passed and r2.passed
    tested = sum(c.tested for c in r1.checks + r2.checks if c.name in fams)
    record_criterion(1, "U_q(g*) Serre families and commutators vanish", ok,
                     f"{tested} exact identities, {time.time() - t0:.1f}s")
    assert ok


def test_criterion_2_factorization_showcase(cq_a2, loc_ctx):
    t0 = time.time()
    cq, ct = cq_a2
    lt, L = loc_ctx.table, loc_ctx.alg
    phi = loc_ctx.full_phi()
    assert loc_ctx.phi["x1"] == L.parse("x11^-1*x21")
    assert loc_ctx.phi["x2"] == L.parse("D2^-1*(x11*x32 - q^-1*x12*x31)")
    emb = check_embedding(lt, ct, phi)
    delta = all(lt.act(f"E{i}", loc_ctx.x[j]) == (L.one() if i == j else L.zero())
                for i in (1, 2) for j in (1, 2))
    _, fac = verify_factorization(lt, ct, phi, 4, word=(1, 2, 1), mode="filtered")
    basis = build_adapted_basis(ct, (1, 2, 1), 8)
    rng = random.Random(0)
    monos = L.basis_upto(4)
    roundtrips = 0
    for _ in range(100):
        el = L.zero()
        while el.is_zero():
            el = sum((NcPoly(L, {m: ONE}) * rng.randint(-3, 3) for m in rng.sample(monos, rng.randint(1, 4))),
                     L.zero())
        parts = decompose(lt, el, basis, phi, cq)
        roundtrips += reassemble(lt, parts, basis, phi, cq) == el
    ok = emb.passed and delta and fac.passed and roundtrips == 100
    record_criterion(2, "localized qmat(3,2) factorizes over C_q[U](A2)", ok,
                     f"mu bijective to degree 4, {roundtrips}/100 round trips, {time.time() - t0:.1f}s")
    assert ok


def test_criterion_3_crossed_products(loc_ctx):
    t0 = time.time()
    plus = restrict_gstar(loc_ctx, sub_presentation(loc_ctx.alg, ["D2", "x11", "x12"], "qmat32+"))
    results = {}
    for name, pt in (("scalars", torus_table(preset_scalars(A2))),
                     ("torus", torus_table(preset_weight_torus(A2))),
                     ("qmat32+", plus)):
        C, t, rep = build_crossed(pt, certify_deg=4)
        eta = eta_check(C, t, 4)
        results[name] = rep.passed and eta.passed and any(c.name.startswith("hopf/") for c in rep.checks)
    ok = all(results.values())
    record_criterion(3, "crossed products certified, eta identity holds", ok,
                     f"{results}, degree 4, {time.time() - t0:.1f}s")
    assert ok


def test_criterion_4_classical_suite():
    t0 = time.time()
    cu, ca = classical_cqU("A2")
    hat = check_serre_hatf(HatContext(ca, {n: cu.var(n) for n in cu.meta["simple_names"]}), 5)
    eps = check_epsilon(cu, ca, 3)
    _, act, rep = build_classical_crossed(torus_bminus(A2), certify_deg=3)
    tor = all(torus_identity(act, i)[0] == torus_identity(act, i)[1] for i in (1, 2))
    ok = hat.passed and eps.passed and rep.passed and tor
    record_criterion(4, "classical Serre for f-hat, epsilon recursion, C[T] identity", ok,
                     f"{time.time() - t0:.1f}s")
    assert ok


def test_criterion_5_gauss():
    a11, a12, a21, a22, a31, a32 = sympy.symbols("a11 a12 a21 a22 a31 a32")
    M = [[a11, a12], [a21, a22], [a31, a32]]
    L, R = gauss_factor_3x2(M)
    minor = a11 * a22 - a12 * a21
    L_ref = [[1, 0, 0], [a21 / a11, 1, 0], [a31 / a11, (a11 * a32 - a12 * a31) / minor, 1]]
    R_ref = [[a11, a12], [0, minor / a11], [0, 0]]
    sym_ok = all(sympy.simplify(x - y) == 0 for r1, r2 in zip(L + R, L_ref + R_ref) for x, y in zip(r1, r2))
    prod_ok = all(sympy.simplify(x - y) == 0 for r1, r2 in zip(matmul(L, R), M) for x, y in zip(r1, r2))
    rng = random.Random(0)
    exact = 0
    for _ in range(50):
        N = random_matrix(rng)
        Ln, Rn = gauss_factor_3x2(N)
        exact += matmul(Ln, Rn) == N
    ok = sym_ok and prod_ok and exact == 50
    record_criterion(5, "Gauss factorization: symbolic display and random matrices", ok, f"{exact}/50 exact")
    assert ok


def test_criterion_6_presentation_integrity():
    t0 = time.time()
    bad = []
    for name, make in sorted(PRESET_NAMES.items()):
        alg = make()
        if not check_local_confluence(alg, 4).passed:
            bad.append(f"{name}: confluence")
        engine, oracle = oracle_dims(alg, 6)
        if engine != oracle:
            bad.append(f"{name}: dims {engine} vs {oracle}")
    ok = not bad
    record_criterion(6, "every preset confluent to degree 4, dims match oracle to degree 6", ok,
                     f"{len(PRESET_NAMES)} presets, {time.time() - t0:.1f}s" + (f", {bad}" if bad else ""))
    assert ok


def test_criterion_7_specialization(loc_ctx):
    t0 = time.time()
    bad = []
    for name, make in sorted(PRESET_NAMES.items()):
        if name == "localized-qmat32":
            alg, t = loc_ctx.alg, loc_ctx.table
        else:
            alg = make()
            kind = alg.meta.get("kind")
            t = preset_action_cqU(alg) if kind == "cqU" else preset_action_qmatrix(alg) if kind == "qmat" else None
        if not check_specialization(alg, t, 4).passed:
            bad.append(name)
    a1 = preset_cqU("A1")
    t1 = preset_action_cqU(a1)
    calg, act = specialize_algebra(a1, t1)
    f_quantum = t1.act("F1", a1.gen("x1"))
    nil = f_quantum == a1.parse("-q*x1^2") and specialize_poly(calg, f_quantum) == -(calg.var("x1") ** 2) \
        and act.act("f1", calg.var("x1")) == -(calg.var("x1") ** 2)
    ok = not bad and nil
    record_criterion(7, "q = 1 specialization of every preset and action", ok,
                     f"degree 4, {time.time() - t0:.1f}s" + (f", failing {bad}" if bad else ""))
    assert ok


def test_criterion_8_rank_one_braiding(cq_a1):
    t0 = time.time()
    a, t = cq_a1
    T = TwistedTensorAlgebra(t, t, "sl2")
    assoc = check_twisted(T, 4)
    tor = preset_weight_torus(a.cartan)
    hw = cross_validate_hw(TwistedTensorAlgebra(t, ActionTable(hopf_spec("Uq_g", tor.cartan), tor), "sl2"), 4)
    P, pt = T.export()
    _, fac = verify_factorization(pt, t, {"x1": P.gen("rx1")}, 4, word=(1,))
    ok = assoc.passed and hw.passed and fac.passed
    record_criterion(8, "sl2 braided product associative, hw-twist agreement, factorization", ok,
                     f"degree 4, {time.time() - t0:.1f}s")
    assert ok

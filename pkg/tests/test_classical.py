import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qma.cartan import preset_cartan
from qma.classical import (CPoly, ClassicalError, HatContext, build_classical_crossed, check_epsilon,
                           check_poisson, check_serre_hatf, check_specialization, classical_cqU,
                           classical_localized, classical_verify_factorization, crossed_formula_check,
                           epsilon_rec, gauss_factor_3x2, hatf_act, is_highest_weight, matmul,
                           poisson_bracket, random_matrix, restrict_hatf, scalars_bminus, specialize_algebra,
                           tensor_bminus, torus_bminus, torus_identity)
from qma.presets import PRESET_NAMES, preset_qmatrix

A2 = preset_cartan("A2")


@pytest.fixture(scope="module")
def cu_a2():
    return classical_cqU("A2")


@pytest.fixture(scope="module")
def cloc():
    return classical_localized()


def test_a1_limit():
    cu, ca = classical_cqU("A1")
    x = cu.var("x1")
    assert ca.act("e1", x) == cu.one()
    assert ca.act("f1", x) == -(x * x)


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_cartan_action(label):
    cu, ca = classical_cqU(label)
    cd = cu.cartan
    for i in cd.indices:
        for j in cd.indices:
            xj = cu.var(cu.meta["simple_names"][j - 1])
            assert ca.h(i, xj) == xj * (-cd.c(i, j))


def test_qmat_becomes_polynomial():
    calg, _ = specialize_algebra(preset_qmatrix(3, 2))
    assert calg.names == ["x11", "x12", "x21", "x22", "x31", "x32"]
    a, b = calg.var("x22"), calg.var("x11")
    assert a * b == b * a


def test_poisson_examples(cu_a2):
    cu, ca = cu_a2
    x1 = cu.var("x1")
    assert poisson_bracket(x1, x1).is_zero()
    rng = random.Random(1)
    for m in rng.sample(cu.basis_upto(4), 15):
        x = CPoly(cu, {m: Fraction(1)})
        assert poisson_bracket(x1, x) == ca.act("f1", x) * 2 - x1 * ca.h(1, x)


def test_epsilon_examples(cu_a2):
    cu, ca = cu_a2
    assert epsilon_rec(cu, 1, 2, 0) == cu.var("x2")
    assert epsilon_rec(cu, 1, 2, 2).is_zero()
    assert epsilon_rec(cu, 1, 2, 1) == ca.act("f1", cu.var("x2")) * 2
    assert check_epsilon(cu, ca, 3).passed


def test_poisson_suite(cu_a2):
    cu, ca = cu_a2
    assert check_poisson(cu, ca, 3, samples=30).passed


def test_hatf(cu_a2, cloc):
    cu, ca = cu_a2
    ctx = HatContext(ca, {n: cu.var(n) for n in cu.meta["simple_names"]})
    assert hatf_act(ctx, 1, cu.one()).is_zero()
    assert check_serre_hatf(ctx, 4).passed
    calg, cact, phi = cloc
    lctx = HatContext(cact, phi)
    for txt in ("x11", "x12", "D2"):
        h = calg.var(txt)
        assert is_highest_weight(cact, h)
        for i in (1, 2):
            assert is_highest_weight(cact, hatf_act(lctx, i, h))


def test_crossed_with_scalars_is_CU(cu_a2):
    cu, ca = cu_a2
    alg, act, rep = build_classical_crossed(scalars_bminus(A2), certify_deg=3)
    assert rep.passed
    for (op, nm), img in ca.images.items():
        got = act.image(op, "u" + nm[1:])
        assert str(got) == str(img).replace("x", "u")


def test_crossed_torus_identity():
    alg, act, rep = build_classical_crossed(torus_bminus(A2), certify_deg=3)
    assert rep.passed and crossed_formula_check(act, 3).passed
    for i in (1, 2):
        got, want = torus_identity(act, i)
        assert got == want == alg.var(f"u{i}")


def test_crossed_plus_tensor_torus(cloc):
    calg, cact, phi = cloc
    calg.meta["simple_names"] = ["x1", "x2"]
    plus = restrict_hatf(HatContext(cact, phi), ["D2", "x11", "x12"], "A+")
    alg, act, rep = build_classical_crossed(tensor_bminus(plus, torus_bminus(A2)), certify_deg=2)
    assert rep.passed
    # e acts on the C[U] factor only
    for i in (1, 2):
        assert act.act(f"e{i}", alg.var("x12") * alg.var(f"u{i}")) == alg.var("x12")


def test_factorization(cu_a2, cloc):
    cu, ca = cu_a2
    assert classical_verify_factorization(ca, ca, {n: cu.var(n) for n in cu.names}, 4).passed
    calg, cact, phi = cloc
    rep = classical_verify_factorization(cact, ca, phi, 3, mode="filtered", hw_deg=3, height=2)
    assert rep.passed


@pytest.mark.parametrize("name", ["cqU-A1", "cqU-B2", "qmat-2-2", "uqgstar-A1"])
def test_specialization_presets(name):
    assert check_specialization(PRESET_NAMES[name](), None, 3).passed


def test_gauss_numeric_and_singular():
    M = [[Fraction(2), Fraction(1)], [Fraction(3), Fraction(5)], [Fraction(1, 2), Fraction(4)]]
    L, R = gauss_factor_3x2(M)
    assert matmul(L, R) == M
    with pytest.raises(ClassicalError):
        gauss_factor_3x2([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)], [Fraction(1), Fraction(1)]])
    with pytest.raises(ClassicalError):
        gauss_factor_3x2([[Fraction(0), Fraction(2)], [Fraction(2), Fraction(4)], [Fraction(1), Fraction(1)]])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_gauss_random_property(seed):
    M = random_matrix(random.Random(seed))
    L, R = gauss_factor_3x2(M)
    assert matmul(L, R) == M
    assert all(L[i][i] == 1 for i in range(3)) and L[0][1] == L[0][2] == L[1][2] == 0
    assert R[1][0] == R[2][0] == R[2][1] == 0


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_jacobi_property(cu_a2, data):
    cu, _ = cu_a2
    monos = cu.basis_upto(2)
    f, g, h = (CPoly(cu, {data.draw(st.sampled_from(monos)): Fraction(1)}) for _ in range(3))
    jac = poisson_bracket(f, poisson_bracket(g, h)) + poisson_bracket(g, poisson_bracket(h, f)) \
        + poisson_bracket(h, poisson_bracket(f, g))
    assert jac.is_zero()
    assert poisson_bracket(f, g) == -poisson_bracket(g, f)

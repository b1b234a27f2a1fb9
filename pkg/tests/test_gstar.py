import pytest
from hypothesis import given, settings, strategies as st

from qma.action import preset_action_cqU
from qma.cartan import preset_cartan
from qma.gstar import (GstarError, act_f1, act_f2, act_k_pm, build_crossed, check_gstar, check_gstar_table,
                       coaction_generator_check, cqU_context, crossed_formula_check, eta_check,
                       preset_scalars, preset_weight_torus, psi_check, restrict_gstar, roundtrip_check,
                       sub_presentation, torus_table)
from qma.ncpoly import NcPoly
from qma.presets import preset_cqU
from qma.scalar import ONE, qp

A2 = preset_cartan("A2")
PLUS = ["D2", "x11", "x12"]


@pytest.fixture(scope="module")
def loc_plus(loc_ctx):
    return restrict_gstar(loc_ctx, sub_presentation(loc_ctx.alg, PLUS, "qmat32+"))


@pytest.mark.parametrize("label", ["A1", "A2", "B2", "G2"])
def test_generator_values(label):
    ctx = cqU_context(label)
    cd = ctx.alg.cartan
    for i in cd.indices:
        xi = ctx.x[i]
        assert act_f2(ctx, i, xi) == xi * xi * qp(cd.di(i))
        assert act_f2(ctx, i, ctx.alg.one()).is_zero()
        for j in cd.indices:
            assert act_f1(ctx, i, ctx.x[j]).is_zero()


def test_localized_generator_values(loc_ctx):
    L = loc_ctx.alg
    for i in (1, 2):
        xi = loc_ctx.x[i]
        assert act_f2(loc_ctx, i, xi) == xi * xi * qp(1)
        assert all(act_f1(loc_ctx, i, loc_ctx.x[j]).is_zero() for j in (1, 2))
    assert act_f1(loc_ctx, 1, L.gen("x12")) == L.parse("D2*x11^-1")
    assert act_k_pm(loc_ctx, 1, 1, act_k_pm(loc_ctx, 1, -1, L.gen("x32"))) == L.gen("x32")


def test_rank_one_sanity():
    rep = check_gstar(cqU_context("A1"), 5)
    assert rep.passed
    names = {c.name for c in rep.checks}
    assert "gstar/commute_1_2" in names


def test_b2_suite():
    assert check_gstar(cqU_context("B2"), 3).passed


def test_crossed_with_scalars_is_cqU():
    C, t, rep = build_crossed(torus_table(preset_scalars(A2)), certify_deg=3)
    assert rep.passed
    cq = preset_cqU(A2)
    ct = preset_action_cqU(cq)
    ren = {g.name: "u" + g.name[1:] for g in cq.gens}
    for key, terms in cq.rules.items():
        h, s, g, e = key
        lhs = C.parse(f"{ren[cq.gens[h].name]}^{s}*{ren[cq.gens[g].name]}^{e}")
        assert lhs == C.parse(_rename(str(NcPoly(cq, terms)), ren))
    for (g, nm), img in ct.images.items():
        assert t.act(g, C.gen(ren[nm])) == C.parse(_rename(str(img), ren))


def _rename(text, ren):
    import re

    return re.sub(r"\bx(\d+)\b", lambda m: ren["x" + m.group(1)], text)


def test_crossed_torus_cross_rule():
    C, t, rep = build_crossed(torus_table(preset_weight_torus(A2)), certify_deg=3)
    assert rep.passed
    for i in (1, 2):
        for j in (1, 2):
            for e in (1, -1):
                lam = tuple(e * x for x in A2.alpha(j))
                want = C.parse(f"v{j}^{e}*u{i}") * qp(A2.pairing(A2.alpha(i), lam))
                assert C.parse(f"u{i}*v{j}^{e}") == want
    assert crossed_formula_check(C, t, 3).passed


def test_crossed_e_acts_on_second_factor(loc_plus):
    C, t, rep = build_crossed(loc_plus)
    for a in ("x12", "D2", "x11^-1"):
        for x, ex in (("u1", {1: "1", 2: "0"}), ("u2", {1: "0", 2: "1"})):
            for i in (1, 2):
                assert t.act(f"E{i}", C.parse(f"{a}*{x}")) == C.parse(f"{a}*{ex[i]}")


def test_eta_checks(loc_plus):
    C, t, _ = build_crossed(torus_table(preset_scalars(A2)))
    assert eta_check(C, t, 4).passed
    C, t, _ = build_crossed(torus_table(preset_weight_torus(A2)))
    assert eta_check(C, t, 4).passed
    C, t, _ = build_crossed(loc_plus)
    assert eta_check(C, t, 3).passed


def test_psi_over_itself(cq_a2_ctx):
    assert psi_check(cq_a2_ctx, [], 4, samples=50).passed


def test_psi_localized(loc_ctx):
    assert psi_check(loc_ctx, PLUS, 3, samples=80, mode="filtered").passed


def test_roundtrips(loc_plus):
    assert roundtrip_check(torus_table(preset_weight_torus(A2)), 3).passed
    assert roundtrip_check(loc_plus, 3).passed


def test_restricted_action_is_module_algebra(loc_plus):
    assert check_gstar_table(loc_plus, 4).passed


def test_restrict_rejects_non_closed_subalgebra(loc_ctx):
    with pytest.raises(GstarError):
        restrict_gstar(loc_ctx, sub_presentation(loc_ctx.alg, ["x11", "x12"], "bad"))


@pytest.mark.parametrize("label", ["A1", "A2"])
def test_coaction(label):
    assert coaction_generator_check(preset_cartan(label), 2).passed


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_families_commute_on_localized(loc_ctx, data):
    L = loc_ctx.alg
    monos = L.basis_upto(3)
    a = sum((NcPoly(L, {m: ONE}) * k for m, k in
             data.draw(st.lists(st.tuples(st.sampled_from(monos), st.integers(-2, 2)), min_size=1, max_size=3))),
            L.zero())
    i, j = data.draw(st.sampled_from([1, 2])), data.draw(st.sampled_from([1, 2]))
    assert act_f1(loc_ctx, i, act_f2(loc_ctx, j, a)) == act_f2(loc_ctx, j, act_f1(loc_ctx, i, a))

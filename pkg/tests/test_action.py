import pytest
import sympy
from hypothesis import given, settings, strategies as st

from qma.action import (ActionError, ActionTable, act_divided_E, check_action_well_defined,
                        check_hopf_relations, check_local_nilpotence,
                        hopf_spec, preset_action_cqU)
from qma.cartan import preset_cartan
from qma.ncpoly import NcPoly
from qma.presets import preset_cqU
from qma.scalar import ONE, qp

from conftest import Q_SYM as q, sym_equal


def test_cqU_a1_generator_values(cq_a1):
    a, t = cq_a1
    x = a.gen("x1")
    assert t.act("E1", x) == a.one()
    assert t.act("F1", x) == a.parse("-q*x1^2")
    assert t.act("K1", x) == a.parse("q^-2*x1")
    assert t.act("F1", a.one()).is_zero()


@pytest.mark.parametrize("n", range(1, 6))
def test_cqU_a1_powers_against_closed_forms(cq_a1, n):
    # E(x^n) = sum_k q^{-2k} x^{n-1};  F(x^n) = (1 - q^{2n})/(q - q^-1) x^{n+1}
    a, t = cq_a1
    x = a.gen("x1")
    e_coeff = sympy.Add(*[q ** (-2 * k) for k in range(n)])
    f_coeff = (1 - q ** (2 * n)) / (q - 1 / q)
    assert sym_equal(t.act("E1", x ** n).coeff(a.mono("x1", n - 1)), e_coeff)
    assert sym_equal(t.act("F1", x ** n).coeff(a.mono("x1", n + 1)), f_coeff)


def test_divided_powers(cq_a1):
    a, t = cq_a1
    x = a.gen("x1")
    assert act_divided_E(t, 1, 2, x * x) == a.scalar(qp(-1))
    assert act_divided_E(t, 1, 0, x * x) == x * x
    assert act_divided_E(t, 1, 2, x).is_zero()


def test_ef_commutator_on_x1(cq_a1):
    a, t = cq_a1
    x = a.gen("x1")
    lhs = t.act("E1", t.act("F1", x)) - t.act("F1", t.act("E1", x))
    rhs = (t.act("K1", x) - t.act("K1^-1", x)) * (qp(1) - qp(-1)).inv()
    assert lhs == rhs
    assert rhs == a.parse("-(q + q^-1)*x1")


def test_cqU_a2_composite(cq_a2):
    a, t = cq_a2
    assert t.act("E2", a.gen("x12")) == a.gen("x1")
    assert t.act("E1", a.gen("x12")).is_zero()


def test_cqU_suites(cq_a2):
    _, t = cq_a2
    assert check_action_well_defined(t, 6, pair_limit=1500).passed
    assert check_hopf_relations(t, 5).passed
    assert check_local_nilpotence(t, 4).passed


def test_qmatrix_action(qmat32):
    a, t = qmat32
    assert t.act("E1", a.gen("x21")) == a.gen("x11")
    assert t.act("E1", a.gen("x11")).is_zero() and t.act("E1", a.gen("x12")).is_zero()
    assert t.meta["certified_twists"] == [(-1, 1), (0, 0), (1, -1)]
    assert check_action_well_defined(t, 5, pair_limit=1500).passed
    assert check_hopf_relations(t, 4).passed


def test_localized_action(loc_ctx):
    t = loc_ctx.table
    a = t.alg
    y = a.gen("y")
    assert t.act("K1", y) == y * qp(-1)
    assert t.act("E1", a.gen("z")).is_zero() and t.act("E2", a.gen("z")).is_zero()
    # E1(y x21) by the skew law on the factors
    direct = t.act("E1", y) * t.act("K1", a.gen("x21")) + y * t.act("E1", a.gen("x21"))
    assert t.act("E1", y * a.gen("x21")) == direct == a.one()


def test_perturbed_image_fails(cq_a2):
    a, t = cq_a2
    bad = ActionTable(t.hopf, a, dict(t.images))
    bad.set_image("E1", "x1", a.gen("x1"))
    rep = check_action_well_defined(bad, 2)
    assert not rep.passed and rep.failures()[0].counterexample is not None


def test_scalars_pass_vacuously():
    from qma.gstar import preset_scalars

    p = preset_scalars(preset_cartan("A2"))
    t = ActionTable(hopf_spec("Uq_g", p.cartan), p)
    assert check_hopf_relations(t, 3).passed


def test_unknown_hopf_generator(cq_a1):
    a, t = cq_a1
    with pytest.raises(ActionError):
        t.set_image("E7", "x1", a.one())


@pytest.fixture(scope="module")
def b2():
    p = preset_cqU("B2")
    return p, preset_action_cqU(p)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_twisted_leibniz_property(b2, data):
    a, t = b2
    monos = a.basis_upto(3)
    x = NcPoly(a, {data.draw(st.sampled_from(monos)): ONE})
    y = NcPoly(a, {data.draw(st.sampled_from(monos)): ONE})
    i = data.draw(st.sampled_from([1, 2]))
    assert t.act(f"E{i}", x * y) == t.act(f"E{i}", x) * t.act(f"K{i}", y) + x * t.act(f"E{i}", y)
    assert t.act(f"F{i}", x * y) == t.act(f"F{i}", x) * y + t.act(f"K{i}^-1", x) * t.act(f"F{i}", y)

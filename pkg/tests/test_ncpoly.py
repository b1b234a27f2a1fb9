import random

import pytest
from hypothesis import given, settings, strategies as st

from qma.cartan import preset_cartan
from qma.freequot import free_quotient_dims
from qma.ncpoly import GenDecl, NcPoly, ParseError, Presentation, PresentationError, check_local_confluence
from qma.presets import (PRESET_NAMES, oracle_dims, preset_cqU, preset_localized_qmat32, preset_qmatrix,
                         preset_uqgstar, serre_relations_free)
from qma.scalar import ONE, qp


@pytest.fixture(scope="module")
def qm():
    return preset_qmatrix(3, 2)


@pytest.fixture(scope="module")
def loc():
    return preset_localized_qmat32()


def test_parse_examples(qm):
    assert qm.parse("x21*x11") == qm.parse("q*x11*x21")
    assert qm.parse("0").is_zero()
    p = qm.parse("(q - q^-1)*x12*x21")
    assert p.terms == {qm.mono("x12", 1, "x21", 1): qp(1) - qp(-1)}


def test_normal_form_examples(qm):
    assert qm.parse("x22*x11") == qm.parse("x11*x22 + (q - q^-1)*x12*x21")
    assert qm.parse("x11*x12").terms == {qm.mono("x11", 1, "x12", 1): ONE}


def test_quantum_matrix_families(qm):
    # same column, same row, and the two crossing families
    for i, k, j in [(1, 2, 1), (1, 3, 2), (2, 3, 1)]:
        assert qm.parse(f"x{k}{j}*x{i}{j}") == qm.parse(f"q*x{i}{j}*x{k}{j}")
    for i in (1, 2, 3):
        assert qm.parse(f"x{i}2*x{i}1") == qm.parse(f"q*x{i}1*x{i}2")
    for i, k in [(1, 2), (1, 3), (2, 3)]:
        assert qm.parse(f"x{k}1*x{i}2") == qm.parse(f"x{i}2*x{k}1")
        assert qm.parse(f"x{k}2*x{i}1") == qm.parse(f"x{i}1*x{k}2 + (q - q^-1)*x{i}2*x{k}1")


def test_cqU_a2_straightening():
    a = preset_cqU("A2")
    assert a.parse("x2*x1") == a.parse("q^-1*x1*x2 + (q - q^-1)*x12")
    assert a.parse("x1^2*x2 - (q + q^-1)*x1*x2*x1 + x2*x1^2").is_zero()
    assert a.parse("x2^2*x1 - (q + q^-1)*x2*x1*x2 + x1*x2^2").is_zero()


def test_unit_and_powers():
    a = preset_cqU("A1")
    x = a.gen("x1")
    assert a.one() * x == x
    assert (x * x).terms == {a.mono("x1", 2): ONE}
    assert a.rules == {}


def test_associativity_random_triples(qm):
    rng = random.Random(0)
    monos = qm.basis_upto(3)
    for _ in range(100):
        a, b, c = (NcPoly(qm, {rng.choice(monos): ONE}) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_graded_basis_examples(qm):
    a1 = preset_cqU("A1")
    assert [a1.mono_str(m) for m in a1.graded_basis(3)] == ["x1^3"]
    assert len(qm.graded_basis(1)) == 6
    a2 = preset_cqU("A2")
    assert sorted(a2.mono_str(m) for m in a2.graded_basis(2)) == ["x1*x2", "x12", "x1^2", "x2^2"]


def test_free_quotient_dims_examples():
    assert free_quotient_dims(1, [], 4) == [1, 1, 1, 1, 1]
    a2 = preset_cartan("A2")
    grades = [a2.alpha(i) for i in a2.indices]
    assert free_quotient_dims(2, serre_relations_free(a2), 4, grades) == [1, 2, 4, 6, 9]
    # PBW count a + 2b + c = n
    assert [sum(1 for a in range(n + 1) for b in range(n + 1) for c in range(n + 1) if a + 2 * b + c == n)
            for n in range(5)] == [1, 2, 4, 6, 9]
    e, o = oracle_dims(preset_qmatrix(2, 2), 2)
    assert e[2] == o[2] == 10


def test_confluence_examples():
    assert check_local_confluence(preset_qmatrix(2, 2), 4).passed
    assert check_local_confluence(preset_cqU("A2"), 6).passed


def test_broken_rules_fail_with_witness():
    a1 = preset_cartan("A1")
    p = Presentation("broken", a1, [GenDecl("x1", (-1,)), GenDecl("x2", (-1,))])
    p.add_rule("x2", "x1", {p.mono("x1", 1, "x2", 1): ONE})
    p.add_rule("x2", "x1", {p.mono("x1", 1, "x2", 1): qp(1)})
    rep = check_local_confluence(p, 3)
    assert not rep.passed
    bad = rep.failures()[0]
    assert "x2*x1" in bad.counterexample["input"]


def test_qmatrix_small_presets(qm):
    assert len(qm.gens) == 6
    q11 = preset_qmatrix(1, 1)
    assert len(q11.gens) == 1 and q11.rules == {}


def test_localized_rules(loc):
    assert loc.parse("y*x11") == loc.one()
    # x21 x11 = q x11 x21 gives x21 y = q^-1 y x21 after cancelling x11 on both sides
    assert loc.parse("x21*y") == loc.parse("q^-1*y*x21")
    assert loc.parse("x22*y") == loc.parse("y*x22 - (q - q^-1)*q^-2*y^2*x12*x21")


def _to_qmat(p, qm):
    """Evaluate a localized element with no inverse letters inside qmat(3,2)."""
    delta = qm.parse("x11*x22 - q^-1*x12*x21")
    out = qm.zero()
    for m, c in p.terms.items():
        t = qm.one()
        for k, e in m:
            assert e > 0
            name = p.alg.gens[k].name
            t = t * ((delta if name == "D2" else qm.gen(name)) ** e)
        out = out + t * c
    return out


def test_localized_ore_oracle(loc, qm):
    # clear denominators and compare in the polynomial algebra
    lhs = loc.parse("x11^2*x22*y*x11")
    rhs = loc.parse("x11^2*(y*x22 - (q - q^-1)*q^-2*y^2*x12*x21)*x11")
    assert _to_qmat(lhs, qm) == _to_qmat(rhs, qm) == qm.parse("x11^2*x22")
    assert _to_qmat(loc.parse("x11*x21*y*x11"), qm) == qm.parse("x11*x21")


def test_uqgstar_examples():
    u = preset_uqgstar("A1")
    assert u.parse("F1_2*F1_1") == u.parse("F1_1*F1_2")
    assert u.parse("K1*F1_1*K1^-1") == u.parse("q^-2*F1_1")
    e, o = oracle_dims(preset_uqgstar("A2"), 4)
    assert e == o


@pytest.mark.parametrize("name", sorted(PRESET_NAMES))
def test_every_preset_dims_to_six(name):
    e, o = oracle_dims(PRESET_NAMES[name](), 6)
    assert e == o


def test_parse_errors_carry_positions():
    a = preset_cqU("A2")
    with pytest.raises(ParseError) as exc:
        a.parse("x1 + y7")
    assert exc.value.pos == 5
    with pytest.raises(ParseError):
        a.parse("")
    with pytest.raises(ParseError):
        a.parse("x1^-1")


def test_rule_must_be_homogeneous():
    a1 = preset_cartan("A1")
    p = Presentation("bad", a1, [GenDecl("x1", (-1,)), GenDecl("x2", (-1,))])
    with pytest.raises(PresentationError):
        p.add_rule("x2", "x1", {p.mono("x1", 1): ONE})


@pytest.fixture(scope="module")
def b2():
    return preset_cqU("B2")


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_associativity_property_b2(b2, data):
    monos = b2.basis_upto(3)
    pick = st.lists(st.tuples(st.sampled_from(monos), st.integers(-2, 2)), min_size=1, max_size=3)
    a, b, c = (NcPoly(b2, {}) + sum((NcPoly(b2, {m: ONE}) * k for m, k in data.draw(pick)), b2.zero())
               for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_print_parse_roundtrip(loc, data):
    monos = loc.basis_upto(3)
    terms = data.draw(st.lists(st.tuples(st.sampled_from(monos), st.integers(-3, 3)), max_size=4))
    p = sum((NcPoly(loc, {m: ONE}) * (qp(k) + k) for m, k in terms), loc.zero())
    assert loc.parse(str(p)) == p

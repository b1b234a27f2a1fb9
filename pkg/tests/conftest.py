import sympy
import pytest

from qma.action import preset_action_cqU, preset_action_qmatrix
from qma.presets import preset_cqU, preset_qmatrix

Q_SYM = sympy.Symbol("q")


def to_sympy(f):
    """Independent view of a RatFunc as a sympy expression in q."""
    num = sum(sympy.Rational(str(c)) * Q_SYM ** k for k, c in enumerate(f.num.coeffs()))
    den = sum(sympy.Rational(str(c)) * Q_SYM ** k for k, c in enumerate(f.den.coeffs()))
    return num * Q_SYM ** f.shift / den


def sym_equal(f, expr) -> bool:
    return sympy.simplify(to_sympy(f) - expr) == 0


@pytest.fixture(scope="session")
def cq_a1():
    p = preset_cqU("A1")
    return p, preset_action_cqU(p)


@pytest.fixture(scope="session")
def cq_a2():
    p = preset_cqU("A2")
    return p, preset_action_cqU(p)


@pytest.fixture(scope="session")
def qmat32():
    p = preset_qmatrix(3, 2)
    return p, preset_action_qmatrix(p)


@pytest.fixture(scope="session")
def loc_ctx():
    from qma.gstar import localized_context

    return localized_context()


@pytest.fixture(scope="session")
def cq_a2_ctx():
    from qma.gstar import cqU_context

    return cqU_context("A2")


ACCEPTANCE: dict = {}


def record_criterion(n: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {n} [{'PASS' if ok else 'FAIL'}] {title}"
    ACCEPTANCE[n] = line + (f" ({detail})" if detail else "")
    print(ACCEPTANCE[n])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])

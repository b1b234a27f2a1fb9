"""JSON definitions of presentations and actions.

Algebra file::

    {"cartan": "A1",
     "generators": [{"name": "a", "weight": [-1]}, {"name": "b", "weight": [-1]}],
     "rules": [{"lhs": ["b", "a"], "rhs": "q^2*a*b"}]}

``cartan`` is a type label, ``{"type": ...}`` or ``{"C": [[...]], "d": [...]}``.
Generators take optional ``invertible`` (false) and ``degree`` (1).  A rule
``lhs`` lists the later generator first; either entry may carry a power such
as ``"y^-1"``.  ``{"preset": name}`` alone loads a built-in presentation.

Action file::

    {"hopf": "Uq_g",
     "images": {"E1": {"x1": "1"}, "F1": {"x1": "-q*x1^2"}},
     "embedding": {"x1": "x1"},
     "plus": []}

``embedding`` (images of the simple generators of C_q[U]) and ``plus`` (names
spanning the highest-weight part) are optional; the suites that need them say so.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .action import ActionError, ActionTable, hopf_spec
from .cartan import CartanError, cartan_from_json
from .ncpoly import GenDecl, NcPoly, ParseError, Presentation, PresentationError


class InputError(ValueError):
    """Malformed input; the message starts with ``file:line:col``."""


_POWER = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\^\s*(-?\d+))?\s*$")


def _line_col(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


class _Source:
    def __init__(self, path: str):
        self.path = path
        try:
            with open(path, encoding="utf-8") as fh:
                self.text = fh.read()
        except OSError as exc:
            raise InputError(f"{path}: cannot read: {exc.strerror}") from None
        try:
            self.data = json.loads(self.text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
        self._cursor = 0

    def error(self, where: str, msg: str, value=None, inner: int = 0) -> InputError:
        """Point at the first occurrence of ``value`` after the last located one."""
        pos = None
        if isinstance(value, str):
            k = self.text.find(json.dumps(value), self._cursor)
            if k < 0:
                k = self.text.find(json.dumps(value))
            if k >= 0:
                pos = k + 1 + inner
        if pos is None:
            return InputError(f"{self.path}: {where}: {msg}")
        line, col = _line_col(self.text, pos)
        return InputError(f"{self.path}:{line}:{col}: {where}: {msg}")

    def advance(self, value: str) -> None:
        k = self.text.find(json.dumps(value), self._cursor)
        if k >= 0:
            self._cursor = k

    def expr(self, alg: Presentation, text, where: str) -> NcPoly:
        if isinstance(text, (int, float)) and not isinstance(text, bool):
            text = str(text)
        if not isinstance(text, str):
            raise self.error(where, "expected an expression string")
        self.advance(text)
        try:
            return alg.parse(text)
        except ParseError as exc:
            raise self.error(where, str(exc), text, exc.pos) from None
        except PresentationError as exc:
            raise self.error(where, str(exc), text) from None


def _weight(x, src: _Source, where: str) -> tuple:
    if not isinstance(x, list):
        raise src.error(where, "weight must be a list")
    out = []
    for v in x:
        try:
            f = Fraction(str(v))
        except (ValueError, ZeroDivisionError):
            raise src.error(where, f"bad weight entry {v!r}", str(v)) from None
        out.append(int(f) if f.denominator == 1 else f)
    return tuple(out)


def _lhs_letter(alg: Presentation, s, src: _Source, where: str) -> tuple[str, int]:
    m = _POWER.match(s) if isinstance(s, str) else None
    if m is None or m.group(1) not in alg.index:
        raise src.error(where, f"expected a generator (optionally ^n), got {s!r}",
                        s if isinstance(s, str) else None)
    return m.group(1), int(m.group(2) or 1)


def presentation_from_json(data, src: _Source) -> Presentation:
    from .presets import PRESET_NAMES

    if not isinstance(data, dict):
        raise src.error("top level", "expected an object")
    if "preset" in data:
        name = data["preset"]
        if name not in PRESET_NAMES:
            raise src.error("preset", f"unknown preset {name!r}; known: {sorted(PRESET_NAMES)}", name)
        return PRESET_NAMES[name]()
    for key in ("cartan", "generators"):
        if key not in data:
            raise src.error("top level", f"missing key {key!r}")
    try:
        cartan = cartan_from_json(data["cartan"])
    except (CartanError, KeyError, TypeError, ValueError) as exc:
        raise src.error("cartan", f"bad Cartan data: {exc}") from None
    gens = []
    for k, g in enumerate(data["generators"]):
        where = f"generators[{k}]"
        if not isinstance(g, dict) or "name" not in g or "weight" not in g:
            raise src.error(where, "expected {name, weight, invertible?, degree?}")
        w = _weight(g["weight"], src, where)
        if len(w) != cartan.rank:
            raise src.error(where, f"weight has {len(w)} entries, rank is {cartan.rank}", g["name"])
        gens.append(GenDecl(str(g["name"]), w, bool(g.get("invertible", False)), int(g.get("degree", 1))))
    try:
        alg = Presentation(str(data.get("name", src.path)), cartan, gens)
    except PresentationError as exc:
        raise src.error("generators", str(exc)) from None
    alg.meta["kind"] = "file"
    for k, r in enumerate(data.get("rules", [])):
        where = f"rules[{k}]"
        if not isinstance(r, dict) or "lhs" not in r or "rhs" not in r:
            raise src.error(where, "expected {lhs: [g, g], rhs: expr}")
        if not isinstance(r["lhs"], list) or len(r["lhs"]) != 2:
            raise src.error(where + ".lhs", "expected two generators")
        (b, sb), (a, sa) = (_lhs_letter(alg, s, src, where + ".lhs") for s in r["lhs"])
        rhs = src.expr(alg, r["rhs"], where + ".rhs")
        try:
            alg.add_rule(b, a, rhs, sb, sa)
        except PresentationError as exc:
            raise src.error(where, str(exc), r["rhs"]) from None
    return alg


def load_presentation(path: str) -> Presentation:
    src = _Source(path)
    return presentation_from_json(src.data, src)


@dataclass
class ActionSpec:
    table: ActionTable
    embedding: dict | None = None
    plus: list = field(default_factory=list)


def load_action(path: str, alg: Presentation) -> ActionSpec:
    src = _Source(path)
    data = src.data
    if not isinstance(data, dict) or "images" not in data:
        raise src.error("top level", "expected an object with key 'images'")
    try:
        hopf = hopf_spec(data.get("hopf", "Uq_g"), alg.cartan)
    except ActionError as exc:
        raise src.error("hopf", str(exc), data.get("hopf")) from None
    t = ActionTable(hopf, alg)
    images = data["images"]
    if not isinstance(images, dict):
        raise src.error("images", "expected {operator: {generator: expr}}")
    for g, row in images.items():
        if g not in hopf.generators:
            raise src.error("images", f"{g} is not a generator of {hopf.tag}", g)
        src.advance(g)
        if not isinstance(row, dict):
            raise src.error(f"images.{g}", "expected {generator: expr}")
        for name, text in row.items():
            if name not in alg.index:
                raise src.error(f"images.{g}", f"unknown generator {name!r}", name)
            t.set_image(g, name, src.expr(alg, text, f"images.{g}.{name}"))
    spec = ActionSpec(t)
    if "embedding" in data:
        emb = data["embedding"]
        if not isinstance(emb, dict):
            raise src.error("embedding", "expected {x_i: expr}")
        spec.embedding = {nm: src.expr(alg, v, f"embedding.{nm}") for nm, v in emb.items()}
    plus = data.get("plus", [])
    for nm in plus:
        if nm not in alg.index:
            raise src.error("plus", f"unknown generator {nm!r}", nm)
    spec.plus = list(plus)
    return spec


def load_matrix(path: str):
    """A JSON array of rows; entries are rationals ("3/4") or sympy expressions."""
    import sympy

    src = _Source(path)
    data = src.data
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise src.error("top level", "expected an array of rows")
    out = []
    for i, row in enumerate(data):
        vals = []
        for j, v in enumerate(row):
            s = str(v)
            try:
                vals.append(Fraction(s))
                continue
            except (ValueError, ZeroDivisionError):
                pass
            try:
                vals.append(sympy.sympify(s, rational=True))
            except (sympy.SympifyError, SyntaxError, TypeError):
                raise src.error(f"[{i}][{j}]", f"cannot read entry {s!r}",
                                v if isinstance(v, str) else None) from None
        out.append(vals)
    if any(not isinstance(v, Fraction) for row in out for v in row):
        out = [[sympy.Rational(v.numerator, v.denominator) if isinstance(v, Fraction) else v
                for v in row] for row in out]
    return out

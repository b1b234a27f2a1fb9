"""Graded pieces of a free algebra modulo a two-sided ideal, by linear algebra.

This is deliberately independent of the rewriting engine: it only sees the
defining relations.  With I the ideal generated by homogeneous relations R,

    I_n = V.I_{n-1} + R.V^{n-k},    so    A_n = (V (x) A_{n-1}) / span(r.u)

where u runs over a basis of A_{n-k}.  Each piece A_n (split further by a
multigrading) is stored as a reduced echelon form on the columns
``(letter, index into A_{n-1})``; the non-pivot columns are a basis of standard
words.
"""

from __future__ import annotations

from .linalg import Echelon
from .scalar import ONE


class _Piece:
    __slots__ = ("ech", "basis", "pos")

    def __init__(self, ech, basis):
        self.ech = ech
        self.basis = basis  # list of (column, word)
        self.pos = {col: k for k, (col, _) in enumerate(basis)}


class FreeQuotient:
    """The quotient of the free algebra on letters 0..n-1 by homogeneous relations.

    ``grades[a]`` is the multidegree of letter ``a``; ``relations`` are dicts
    ``word (tuple of letters) -> scalar``.
    """

    def __init__(self, grades, relations, one=ONE):
        self.grades = [tuple(g) for g in grades]
        self.n = len(self.grades)
        self.one = one
        width = len(self.grades[0]) if self.grades else 0
        self.zero_grade = (0,) * width
        self.relations = []
        for r in relations:
            r = {tuple(w): c for w, c in r.items() if c}
            if not r:
                continue
            lens = {len(w) for w in r}
            grs = {self._grade(w) for w in r}
            if len(lens) != 1 or len(grs) != 1:
                raise ValueError("relations must be homogeneous")
            self.relations.append((r, lens.pop(), grs.pop()))
        self.levels = [{self.zero_grade: _Piece(Echelon(), [(None, ())])}]
        self._pi = {(): {0: one}}

    def _grade(self, word):
        g = [0] * len(self.zero_grade)
        for a in word:
            for j, x in enumerate(self.grades[a]):
                g[j] += x
        return tuple(g)

    def _add(self, g, h, sign=1):
        return tuple(x + sign * y for x, y in zip(g, h))

    def build(self, max_deg: int) -> None:
        while len(self.levels) <= max_deg:
            self._build_level(len(self.levels))

    def _build_level(self, n: int) -> None:
        prev = self.levels[n - 1]
        grades = sorted({self._add(u, self.grades[a]) for u in prev for a in range(self.n)})
        level = {}
        self.levels.append(level)
        for w in grades:
            cols = []
            for a in range(self.n):
                lower = prev.get(self._add(w, self.grades[a], -1))
                if lower is not None:
                    cols.extend(((a, j), (a,) + word) for j, (_, word) in enumerate(lower.basis))
            ech = Echelon()
            for r, k, gr in self.relations:
                if k > n:
                    continue
                base = self.levels[n - k].get(self._add(w, gr, -1))
                if base is None:
                    continue
                for _, u in base.basis:
                    vec = {}
                    for word, c in r.items():
                        a = word[0]
                        for j, x in self.pi(word[1:] + u).items():
                            key = (a, j)
                            nv = vec.get(key)
                            nv = c * x if nv is None else nv + c * x
                            if nv:
                                vec[key] = nv
                            else:
                                del vec[key]
                    ech.add(vec)
            basis = [(col, word) for col, word in cols if col not in ech.rows]
            level[w] = _Piece(ech, basis)

    def pi(self, word) -> dict:
        """Coordinates of a word in the standard basis of its piece."""
        word = tuple(word)
        res = self._pi.get(word)
        if res is not None:
            return res
        n = len(word)
        self.build(n)
        a = word[0]
        lower = self.pi(word[1:])
        piece = self.levels[n][self._grade(word)]
        vec = {(a, j): x for j, x in lower.items()}
        red = piece.ech.reduce(vec)
        res = {piece.pos[col]: x for col, x in red.items()}
        self._pi[word] = res
        return res

    def reduce_poly(self, poly: dict):
        """Coordinates of a homogeneous free polynomial; returns (grade, vector)."""
        out = {}
        grade = None
        for word, c in poly.items():
            g = (len(word), self._grade(word))
            if grade is None:
                grade = g
            elif g != grade:
                raise ValueError("polynomial is not homogeneous")
            for j, x in self.pi(word).items():
                nv = out.get(j)
                nv = c * x if nv is None else nv + c * x
                if nv:
                    out[j] = nv
                else:
                    del out[j]
        return grade, out

    def piece_dim(self, n: int, grade) -> int:
        self.build(n)
        p = self.levels[n].get(tuple(grade))
        return len(p.basis) if p else 0

    def dims(self, max_deg: int) -> list[int]:
        self.build(max_deg)
        return [sum(len(p.basis) for p in self.levels[n].values()) for n in range(max_deg + 1)]

    def standard_words(self, n: int, grade) -> list[tuple]:
        self.build(n)
        p = self.levels[n].get(tuple(grade))
        return [w for _, w in p.basis] if p else []


def free_quotient_dims(num_letters: int, relations, max_deg: int, grades=None, one=ONE) -> list[int]:
    """Dimensions of the graded pieces (by word length) of the quotient."""
    if grades is None:
        grades = [tuple(1 if j == a else 0 for j in range(num_letters)) for a in range(num_letters)]
    return FreeQuotient(grades, relations, one).dims(max_deg)


def free_mul(p: dict, r: dict) -> dict:
    out = {}
    for w1, c1 in p.items():
        for w2, c2 in r.items():
            w = w1 + w2
            nv = out.get(w)
            c = c1 * c2
            nv = c if nv is None else nv + c
            if nv:
                out[w] = nv
            else:
                del out[w]
    return out


def free_add(p: dict, r: dict, c=None) -> dict:
    out = dict(p)
    for w, x in r.items():
        x = x if c is None else c * x
        nv = out.get(w)
        nv = x if nv is None else nv + x
        if nv:
            out[w] = nv
        else:
            del out[w]
    return out

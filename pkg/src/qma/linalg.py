"""Sparse exact Gaussian elimination over any field whose elements support
+, -, *, / and truthiness (RatFunc, Fraction).

Vectors are dicts ``column -> value`` with no zero entries.  Columns may be any
hashable, totally ordered keys.
"""

from __future__ import annotations

from fractions import Fraction


class Echelon:
    """Incrementally maintained reduced row space.

    ``add`` reduces a vector against the stored pivots and keeps it if it is
    independent.  Stored rows are kept fully reduced with respect to each other
    only at pivot positions of earlier rows, which is all that ``reduce``
    needs.
    """

    def __init__(self):
        self.rows: dict = {}  # pivot column -> row with row[pivot] == 1
        self.order: list = []

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict) -> dict:
        v = dict(vec)
        rows = self.rows
        # rows vanish at each other's pivots, so one pass suffices
        for col in [c for c in v if c in rows]:
            c = v[col]
            for k, x in rows[col].items():
                nv = v.get(k)
                nv = -c * x if nv is None else nv - c * x
                if nv:
                    v[k] = nv
                else:
                    del v[k]
        return v

    def add(self, vec: dict) -> bool:
        return self.add_reduced(self.reduce(vec))

    def add_reduced(self, v: dict) -> bool:
        if not v:
            return False
        piv = min(v, key=_sort_key)
        inv = 1 / v[piv]
        row = {k: x * inv for k, x in v.items()}
        # back-substitute into existing rows so every row is zero at all pivots
        for p, r in self.rows.items():
            c = r.get(piv)
            if c:
                for k, x in row.items():
                    nv = r.get(k)
                    nv = -c * x if nv is None else nv - c * x
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
        self.rows[piv] = row
        self.order.append(piv)
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)


def _sort_key(k):
    return k


def rank(vectors) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return len(e)


def field_one(*vector_lists):
    """The unit of the field the given vectors live in."""
    for vs in vector_lists:
        for v in vs:
            for x in v.values():
                return x / x
    return Fraction(1)


def express(target: dict, vectors: list[dict], one=None):
    """Coefficients c with sum c_k vectors[k] == target, or None."""
    one = field_one([target], vectors) if one is None else one
    # augment each vector with a tag column to track combinations
    e = Echelon()
    for k, v in enumerate(vectors):
        aug = {(0, col): x for col, x in v.items()}
        aug[(1, k)] = one
        e.add(aug)
    red = e.reduce({(0, col): x for col, x in target.items()})
    if any(key[0] == 0 for key in red):
        return None
    # red = target - (combination) expressed in tag columns with sign flipped
    coeffs = [one - one] * len(vectors)
    for (kind, k), x in red.items():
        coeffs[k] = -x
    return coeffs


def kernel(columns: list[dict], one=None) -> list[list]:
    """Basis of {c : sum c_k columns[k] = 0}, each as a dense coefficient list."""
    n = len(columns)
    one = field_one(columns) if one is None else one
    e = Echelon()
    out = []
    for k, v in enumerate(columns):
        aug = {(0, col): x for col, x in v.items()}
        aug[(1, k)] = one
        red = e.reduce(aug)
        if not any(key[0] == 0 for key in red):
            vec = [one - one] * n
            for (kind, j), x in red.items():
                vec[j] = x
            out.append(vec)
        else:
            e.add_reduced(red)
    return out

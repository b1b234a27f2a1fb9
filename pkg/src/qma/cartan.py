"""Cartan data of finite type, weights, and reduced words.

Indices of simple roots are 1-based everywhere in the public API.  Weights are
tuples of coordinates in the basis of simple roots.  Coordinates are normally
integers; rational coordinates are allowed for weights such as the rows of a
quantum matrix (epsilon_j of sl_m), as long as every pairing that ends up in an
exponent of q is integral.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

Weight = tuple


class CartanError(ValueError):
    pass


@dataclass(frozen=True)
class CartanData:
    matrix: tuple[tuple[int, ...], ...]
    d: tuple[int, ...]
    label: str = ""
    _sym: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(int(x) for x in row) for row in self.matrix))
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        validate_cartan(self)
        r = self.rank
        object.__setattr__(
            self, "_sym", tuple(tuple(self.d[i] * self.matrix[i][j] for j in range(r)) for i in range(r))
        )

    @property
    def rank(self) -> int:
        return len(self.d)

    @property
    def indices(self) -> range:
        return range(1, self.rank + 1)

    def c(self, i: int, j: int) -> int:
        return self.matrix[i - 1][j - 1]

    def di(self, i: int) -> int:
        return self.d[i - 1]

    def zero(self) -> Weight:
        return (0,) * self.rank

    def alpha(self, i: int) -> Weight:
        return tuple(1 if k == i - 1 else 0 for k in range(self.rank))

    def pairing(self, lam: Weight, mu: Weight):
        """(lam, mu) = sum lam_i mu_j d_i c_ij."""
        s = 0
        sym = self._sym
        for i, li in enumerate(lam):
            if li:
                row = sym[i]
                for j, mj in enumerate(mu):
                    if mj:
                        s += li * mj * row[j]
        return _normalize(s)

    def alpha_pairing(self, i: int, mu: Weight):
        """(alpha_i, mu)."""
        row = self._sym[i - 1]
        return _normalize(sum(row[j] * mj for j, mj in enumerate(mu)))

    def coroot_pairing(self, i: int, mu: Weight):
        """<alpha_i^vee, mu> = 2 (alpha_i, mu) / (alpha_i, alpha_i)."""
        return _normalize(Fraction(self.alpha_pairing(i, mu), self.di(i)))

    def reflect(self, i: int, mu: Weight) -> Weight:
        k = self.coroot_pairing(i, mu)
        return tuple(_normalize(m - k) if j == i - 1 else m for j, m in enumerate(mu))

    def positive_roots(self) -> list[Weight]:
        seen = {self.alpha(i) for i in self.indices}
        queue = deque(seen)
        while queue:
            beta = queue.popleft()
            for i in self.indices:
                gamma = self.reflect(i, beta)
                if all(x >= 0 for x in gamma) and gamma not in seen:
                    seen.add(gamma)
                    queue.append(gamma)
        return sorted(seen, key=lambda w: (sum(w), w))

    def num_positive_roots(self) -> int:
        return len(self.positive_roots())

    def braid_order(self, i: int, j: int) -> int:
        """Order of s_i s_j in the Weyl group."""
        if i == j:
            return 1
        return {0: 2, 1: 3, 2: 4, 3: 6}[self.c(i, j) * self.c(j, i)]

    def is_reduced(self, word) -> bool:
        """Root-tracking test: s_{i1}...s_{i(k-1)}(alpha_{ik}) must stay positive."""
        for i in word:
            if not 1 <= i <= self.rank:
                raise CartanError(f"index {i} out of range")
        for k, i in enumerate(word):
            beta = self.alpha(i)
            for j in reversed(word[:k]):
                beta = self.reflect(j, beta)
            if not all(x >= 0 for x in beta):
                return False
        return True

    def convex_roots(self, word) -> list[Weight]:
        """beta_k = s_{i1}...s_{i(k-1)}(alpha_{ik}) for a reduced word."""
        out = []
        for k, i in enumerate(word):
            beta = self.alpha(i)
            for j in reversed(word[:k]):
                beta = self.reflect(j, beta)
            out.append(beta)
        return out

    def longest_word(self) -> tuple[int, ...]:
        """One reduced word of w_o, built greedily."""
        n = self.num_positive_roots()
        word: tuple[int, ...] = ()
        while len(word) < n:
            for i in self.indices:
                if self.is_reduced(word + (i,)):
                    word = word + (i,)
                    break
        return word

    def reduced_words_longest(self) -> set[tuple[int, ...]]:
        """All reduced words of w_o, by BFS over braid moves."""
        start = self.longest_word()
        moves = []
        for i in self.indices:
            for j in self.indices:
                if i < j:
                    m = self.braid_order(i, j)
                    a = tuple(i if k % 2 == 0 else j for k in range(m))
                    b = tuple(j if k % 2 == 0 else i for k in range(m))
                    moves.append((a, b))
                    moves.append((b, a))
        seen = {start}
        queue = deque([start])
        while queue:
            w = queue.popleft()
            for a, b in moves:
                m = len(a)
                for pos in range(len(w) - m + 1):
                    if w[pos:pos + m] == a:
                        v = w[:pos] + b + w[pos + m:]
                        if v not in seen:
                            seen.add(v)
                            queue.append(v)
        return seen

    def to_json(self) -> dict:
        if self.label:
            return {"type": self.label}
        return {"C": [list(r) for r in self.matrix], "d": list(self.d)}


def _normalize(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def _minor_det(m) -> Fraction:
    m = [[Fraction(x) for x in row] for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for k in range(c, n):
                m[r][k] -= f * m[c][k]
    return det


def validate_cartan(cd: CartanData) -> None:
    C, d = cd.matrix, cd.d
    r = len(d)
    if len(C) != r or any(len(row) != r for row in C):
        raise CartanError("Cartan matrix must be square of size len(d)")
    if any(x <= 0 for x in d):
        raise CartanError("symmetrizers must be positive")
    for i in range(r):
        if C[i][i] != 2:
            raise CartanError("diagonal entries must be 2")
        for j in range(r):
            if i != j:
                if C[i][j] > 0:
                    raise CartanError("off-diagonal entries must be <= 0")
                if (C[i][j] == 0) != (C[j][i] == 0):
                    raise CartanError("c_ij = 0 iff c_ji = 0")
                if d[i] * C[i][j] != d[j] * C[j][i]:
                    raise CartanError("d_i c_ij must be symmetric")
    sym = [[d[i] * C[i][j] for j in range(r)] for i in range(r)]
    for k in range(1, r + 1):
        if _minor_det([row[:k] for row in sym[:k]]) <= 0:
            raise CartanError("not of finite type")


_PRESETS = {
    "A1": ([[2]], [1]),
    "A2": ([[2, -1], [-1, 2]], [1, 1]),
    "A3": ([[2, -1, 0], [-1, 2, -1], [0, -1, 2]], [1, 1, 1]),
    "B2": ([[2, -2], [-1, 2]], [1, 2]),
    "G2": ([[2, -3], [-1, 2]], [1, 3]),
}


def preset_cartan(label: str) -> CartanData:
    if label not in _PRESETS:
        raise CartanError(f"unknown Cartan type {label!r}; known: {sorted(_PRESETS)}")
    C, d = _PRESETS[label]
    return CartanData(C, d, label)


def cartan_from_json(obj) -> CartanData:
    if isinstance(obj, str):
        return preset_cartan(obj)
    if "type" in obj:
        return preset_cartan(obj["type"])
    return CartanData(obj["C"], obj["d"])


def all_words(rank: int, length: int):
    return product(range(1, rank + 1), repeat=length)

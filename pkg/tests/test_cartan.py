import pytest
from hypothesis import given, settings, strategies as st

from qma.cartan import CartanData, CartanError, all_words, cartan_from_json, preset_cartan


def _reflection_matrices(cd):
    """s_i in root coordinates: s_i(alpha_j) = alpha_j - c_ij alpha_i."""
    r = cd.rank
    mats = []
    for i in range(r):
        m = [[int(a == b) for b in range(r)] for a in range(r)]
        for j in range(r):
            m[i][j] -= cd.matrix[i][j]
        mats.append(tuple(tuple(row) for row in m))
    return mats


def _mul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _lengths(cd):
    """Weyl group by breadth-first search: element -> length."""
    gens = _reflection_matrices(cd)
    e = tuple(tuple(int(i == j) for j in range(cd.rank)) for i in range(cd.rank))
    seen = {e: 0}
    frontier = [e]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = _mul(g, s)
                if h not in seen:
                    seen[h] = seen[g] + 1
                    nxt.append(h)
        frontier = nxt
    return seen, gens


def _oracle_reduced(cd, w):
    lengths, gens = _lengths(cd)
    g = tuple(tuple(int(i == j) for j in range(cd.rank)) for i in range(cd.rank))
    for i in w:
        g = _mul(g, gens[i - 1])
    return lengths[g] == len(w)


def test_pairing_a2():
    a2 = preset_cartan("A2")
    assert a2.pairing(a2.alpha(1), a2.alpha(1)) == 2
    assert a2.pairing(a2.alpha(1), a2.alpha(2)) == -1
    assert a2.pairing((3, -2), a2.zero()) == 0


def test_presets():
    assert preset_cartan("A2").matrix == ((2, -1), (-1, 2)) and preset_cartan("A2").d == (1, 1)
    assert preset_cartan("A1").matrix == ((2,),) and preset_cartan("A1").d == (1,)
    b2 = preset_cartan("B2")
    assert all(b2.d[i] * b2.matrix[i][j] == b2.d[j] * b2.matrix[j][i] for i in range(2) for j in range(2))


def test_is_reduced_examples():
    assert preset_cartan("A2").is_reduced((1, 2, 1))
    assert not preset_cartan("A1").is_reduced((1, 1))
    assert not preset_cartan("A2").is_reduced((1, 2, 1, 2))


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "B2", "G2"])
def test_is_reduced_matches_weyl_group(label):
    cd = preset_cartan(label)
    lengths, _ = _lengths(cd)
    top = max(lengths.values())
    for n in range(0, min(top + 2, 7)):
        for w in all_words(cd.rank, n):
            assert cd.is_reduced(w) == _oracle_reduced(cd, w), w


def test_reduced_words_longest():
    assert preset_cartan("A1").reduced_words_longest() == {(1,)}
    assert preset_cartan("A2").reduced_words_longest() == {(1, 2, 1), (2, 1, 2)}
    b2 = preset_cartan("B2").reduced_words_longest()
    assert len(b2) == 2 and all(len(w) == 4 for w in b2)
    g2 = preset_cartan("G2").reduced_words_longest()
    assert len(g2) == 2 and all(len(w) == 6 for w in g2)


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "B2", "G2"])
def test_positive_roots_count_matches_longest_length(label):
    cd = preset_cartan(label)
    lengths, _ = _lengths(cd)
    assert cd.num_positive_roots() == max(lengths.values()) == len(cd.longest_word())


def test_invalid_cartan_rejected():
    with pytest.raises(CartanError):
        CartanData(((2, -1), (-2, 3)), (1, 1))
    with pytest.raises(CartanError):
        preset_cartan("E9")


def test_cartan_json_roundtrip():
    for label in ("A2", "G2"):
        cd = preset_cartan(label)
        assert cartan_from_json(cd.to_json()) == cd
    cd = cartan_from_json({"C": [[2, -2], [-1, 2]], "d": [1, 2]})
    assert cd.matrix == preset_cartan("B2").matrix


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["A2", "B2", "G2"]), st.lists(st.integers(-3, 3), min_size=2, max_size=2),
       st.lists(st.integers(-3, 3), min_size=2, max_size=2), st.integers(1, 2))
def test_pairing_symmetric_and_reflection_invariant(label, lam, mu, i):
    cd = preset_cartan(label)
    lam, mu = tuple(lam), tuple(mu)
    assert cd.pairing(lam, mu) == cd.pairing(mu, lam)
    assert cd.pairing(cd.reflect(i, lam), cd.reflect(i, mu)) == cd.pairing(lam, mu)

import pytest
from hypothesis import given, strategies as st

from schubfgl.rootdata import DATA, parse_word, root_datum

FINITE = ("A2", "B2", "G2")
words = st.lists(st.sampled_from([1, 2]), max_size=14).map(tuple)


def test_b2_reduction_example():
    B2 = root_datum("B2")
    w = B2.element((1, 2, 1, 2, 1))
    assert str(w) == "s2s1s2" and w.length == 3
    assert len(B2.window(10)) == 8


@pytest.mark.parametrize("name,j", [("A2", 1), ("B2", 2), ("G2", 3)])
def test_s1_on_a2(name, j):
    R = root_datum(name)
    a1, a2 = R.alpha(1), R.alpha(2)
    assert R.act(R.s(1), a2) == tuple(j * x + y for x, y in zip(a1, a2))
    assert R.act(R.s(2), a1) == tuple(x + y for x, y in zip(a1, a2))


def test_b2_weight_coordinates():
    B2 = root_datum("B2")
    assert B2.alpha(1) == (2, -1) and B2.alpha(2) == (-2, 2)


@pytest.mark.parametrize("name", DATA)
def test_simple_reflections_are_involutions(name):
    R = root_datum(name)
    for i in (1, 2):
        assert R.element((i, i)).is_identity
        assert R.act(R.s(i), R.alpha(i)) == tuple(-c for c in R.alpha(i))
        assert R.pairing(R.alpha(i), i) == 2


@pytest.mark.parametrize("name,m", [("A2", 3), ("B2", 4), ("G2", 6)])
def test_braid_relation_and_order(name, m):
    R = root_datum(name)
    assert R.element((1, 2) * m).is_identity
    for k in range(1, m):
        assert not R.element((1, 2) * k).is_identity
    assert len(R.window()) == R.order == 2 * m
    assert R.longest.length == m


@pytest.mark.parametrize("L", [0, 1, 4, 7])
def test_affine_window_size(L):
    assert len(root_datum("A1aff").window(L)) == 2 * L + 1


def test_affine_needs_window():
    with pytest.raises(ValueError):
        root_datum("A1aff").window()
    with pytest.raises(ValueError):
        root_datum("A1aff").longest


def test_unknown_datum():
    with pytest.raises(ValueError, match="unknown"):
        root_datum("C3")


def test_parse_word_forms():
    assert parse_word("s1s2s1") == (1, 2, 1)
    assert parse_word("121") == (1, 2, 1)
    assert parse_word("e") == ()


@pytest.mark.parametrize("name", DATA)
@given(word=words)
def test_element_matches_matrix(name, word):
    """Canonical words represent the same linear map (faithfulness in rank 2)."""
    R = root_datum(name)
    w = R.element(word)
    direct = (1, 0), (0, 1)
    for i in reversed(word):
        direct = tuple(R.act(R.s(i), v) for v in direct)
    assert tuple(R.act(w, v) for v in ((1, 0), (0, 1))) == direct


@pytest.mark.parametrize("name", FINITE)
def test_distinct_elements_act_distinctly(name):
    R = root_datum(name)
    probe = (1, 3) if name != "A1aff" else (1, 0)
    images = {R.act(w, probe) for w in R.window()}
    assert len(images) == R.order


@pytest.mark.parametrize("name", DATA)
@given(u=words, v=words)
def test_multiplication_associates_with_action(name, u, v):
    R = root_datum(name)
    a, b = R.element(u), R.element(v)
    lam = (2, -1)
    assert R.act(R.mul(a, b), lam) == R.act(a, R.act(b, lam))
    assert R.mul(a, R.inverse(a)).is_identity


@pytest.mark.parametrize("name", DATA)
@given(word=words)
def test_length_is_inversion_count(name, word):
    R = root_datum(name)
    w = R.element(word)
    inv = R.inversion_set(w)
    assert len(inv) == w.length
    assert len(set(inv)) == len(inv)
    assert all(R.is_positive_root(b) for b in inv)
    # an inversion of w is sent negative by w^{-1}
    winv = R.inverse(w)
    assert all(not R.is_positive_root(R.act(winv, b)) for b in inv)


@pytest.mark.parametrize("name", FINITE)
def test_positive_root_count(name):
    R = root_datum(name)
    roots = R.positive_roots()
    assert len(roots) == R.m12
    for beta, refl in roots:
        assert R.act(refl, beta) == tuple(-c for c in beta)
        assert refl.length % 2 == 1


def test_affine_roots_by_height():
    R = root_datum("A1aff")
    roots = [b for b, _ in R.positive_roots(3)]
    assert roots[:2] == [(0, 1), (1, 0)] or roots[:2] == [(1, 0), (0, 1)]
    assert all(abs(b[0] - b[1]) == 1 for b in roots)
    assert max(R.height(b) for b in roots) == 3


@pytest.mark.parametrize("name", DATA)
def test_bruhat_closed_form_matches_subwords(name):
    R = root_datum(name)
    W = R.window(5)
    for u in W:
        for w in W:
            assert R.bruhat_leq(u, w) == R.subword_leq(u, w), (u, w)


@pytest.mark.parametrize("name", FINITE)
def test_coset_representatives(name):
    R = root_datum(name)
    reps = R.coset_representatives((1,))
    assert len(reps) == R.m12
    for w in R.window():
        u = R.coset_representative(w, (1,))
        assert u.length <= w.length
        assert u in (w, R.mul(R.s(1), w))

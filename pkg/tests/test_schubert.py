import pytest
from hypothesis import given, strategies as st

from schubfgl.algebra import LocalizedElement
from schubfgl.momentgraph import TensorElement, gkm_check, phi, x_multiply
from schubfgl.rank2 import (PRODUCTS, Terms, b2_generic_expansion, check_expansion,
                            difference_closed_form, product_rule)
from schubfgl.schubert import (SINGULAR_LOCI, Unsupported, bott_samelson, bs_minus_schubert,
                               chain_sum_expansion, correction_factor_N, delta_121, delta_212,
                               demazure_apply, expand_in_basis, pieri_chevalley, point_class,
                               schubert_basis, schubert_class, schubert_product)

from conftest import FINITE, LAWS, ORACLE, chern_monomial, gkm_sections, model, oracle_mismatch

weights = st.tuples(st.integers(-2, 2), st.integers(-2, 2))


def loc(series):
    return LocalizedElement.of(series)


# Demazure operators and Bott-Samelson classes


@pytest.mark.parametrize("name", FINITE)
def test_first_demazure_step(name):
    m = model(name, "universal", 6)
    z1 = demazure_apply(1, point_class(m))
    d = m.datum
    want = m.y_R().div_exact(m.y_neg(d.alpha(1)))
    assert set(z1.support()) == {d.identity, d.s(1)}
    assert z1[d.identity] == want and z1[d.s(1)] == want


def test_demazure_of_zero():
    m = model("B2", "universal", 6)
    assert demazure_apply(2, m.section({})) == m.section({})


@pytest.mark.parametrize("m", [model("A2", "universal", 6), model("B2", "universal", 6)], ids=["A2", "B2"])
@pytest.mark.parametrize("i", [1, 2])
@given(data=st.data())
def test_demazure_square(m, i, data):
    s = data.draw(gkm_sections(m))
    once = demazure_apply(i, s)
    assert gkm_check(once)["passed"]
    alpha = m.datum.alpha(i)
    p = m.section({z: m.law.p_of(m.y_at(z, alpha), m.y_at(z, tuple(-c for c in alpha))) for z in m.window})
    assert demazure_apply(i, once).first_difference(p * once) is None


@pytest.mark.parametrize("name", FINITE)
def test_bott_samelson_recursion(name):
    m = model(name, "multiplicative", 6)
    for word in [(1,), (2, 1), (1, 2, 1), (2, 1, 2, 1)]:
        for i in (1, 2):
            assert bott_samelson(m, (i,) + word) == demazure_apply(i, bott_samelson(m, word))
    assert bott_samelson(m, ()) == point_class(m)


@pytest.mark.parametrize("name", FINITE)
@pytest.mark.parametrize("kind", LAWS)
def test_bott_samelson_words_are_gkm(name, kind):
    m = model(name, kind, 5)
    for word in [(1, 2, 1, 2), (2, 1, 1), (1, 1, 2, 2), (2, 1, 2)]:
        assert gkm_check(bott_samelson(m, word))["passed"]


def test_z212_values_at_identity_and_s2():
    m = model("B2", "universal", 6)
    z = bott_samelson(m, (2, 1, 2))
    d212 = delta_212(m).to_series()
    assert z[m.datum.identity] == d212 and z[m.datum.s(2)] == d212


# classes against the independent oracle


def _oracle_cases(law):
    for name in FINITE:
        for word in ORACLE["bott_samelson_reduced"][f"{name}/{law}"]:
            yield name, word


@pytest.mark.parametrize("law", ["additive", "multiplicative"])
def test_bott_samelson_matches_oracle(law):
    for name, word in _oracle_cases(law):
        m = model(name, law, 8)
        table = ORACLE["bott_samelson_reduced"][f"{name}/{law}"][word]
        got = bott_samelson(m, () if word == "e" else tuple(int(c) for c in word))
        vertices = {m.datum.element("" if v == "e" else v): v for v in table}
        assert set(got.support()) == set(vertices), (name, word)
        for w, key in vertices.items():
            assert oracle_mismatch(got[w], table[key], 8) == [], (name, word, key)


@pytest.mark.parametrize("law", ["additive", "multiplicative"])
def test_schubert_classes_match_oracle(law):
    checked = 0
    for name, word in _oracle_cases(law):
        m = model(name, law, 8)
        w = m.datum.element("" if word == "e" else word)
        if str(w).replace("s", "") != word.replace("e", "") and word != "e":
            continue  # the other reduced word of the longest element
        try:
            cls = schubert_class(m, w)
        except Unsupported:
            assert name == "G2" and w.length in (4, 5)
            continue
        table = ORACLE["bott_samelson_reduced"][f"{name}/{law}"][word]
        for v in m.window:
            key = str(v).replace("s", "") or "e"
            assert oracle_mismatch(cls[v], table.get(key, {}), 8) == [], (name, word, key)
        checked += 1
    assert checked >= 14


@pytest.mark.parametrize("name,j", [("A2", 1), ("B2", 2), ("G2", 3)])
def test_correction_factor(name, j):
    assert correction_factor_N(model(name, "additive", 8)) == model(name, "additive", 8).one().scale(j)
    N = correction_factor_N(model(name, "multiplicative", 8))
    assert oracle_mismatch(N, ORACLE["k_theory_N"][name], 8) == []


def test_correction_factor_trivial_in_a2():
    assert correction_factor_N(model("A2", "universal", 6)) == model("A2", "universal", 6).one()


# closed forms for the value at the identity


@pytest.mark.parametrize("name", FINITE)
def test_delta_closed_forms(name):
    m = model(name, "universal", 6)
    d = m.datum
    e = d.identity
    assert bott_samelson(m, (1, 2, 1))[e] == delta_121(m).to_series()
    assert bott_samelson(m, (2, 1, 2))[e] == delta_212(m).to_series()
    # the sum form, with the roles of the two simple roots as for Z_121
    a1, a2 = d.alpha(1), d.alpha(2)
    s1a2 = d.act(d.s(1), a2)
    neg = lambda w: tuple(-c for c in w)
    one = loc(m.y_R())
    first = one.divide_by(neg(a1), m.y_neg(a1)).divide_by(neg(a2), m.y_neg(a2)).divide_by("b", m.y_neg(a1))
    second = one.divide_by(a1, m.y(a1)).divide_by(neg(s1a2), m.y_neg(s1a2)).divide_by("c", m.y_neg(a1))
    assert (first + second).to_series() == delta_121(m).to_series()


@pytest.mark.parametrize("name", FINITE)
@pytest.mark.parametrize("kind", ["additive", "multiplicative"])
def test_delta_is_corrected_value(name, kind):
    m = model(name, kind, 7)
    t = Terms(m)
    assert delta_121(m).first_difference(t.N * t.R("a1", "a2", "s1a2")) is None


# Schubert classes and the basis


@pytest.mark.parametrize("name", FINITE)
@pytest.mark.parametrize("kind", LAWS)
def test_basis_support_and_normalization(name, kind):
    m = model(name, kind, 5)
    basis = schubert_basis(m)
    d = m.datum
    for w in m.window:
        if w not in basis:
            continue
        cls = basis[w]
        assert all(d.bruhat_leq(v, w) for v in cls.support())
        diag = m.one()
        for beta in basis.diagonal_roots(w):
            diag = diag * m.y_neg(beta)
        assert cls[w] == diag
        assert len(basis.diagonal_roots(w)) == d.m12 - w.length


def test_point_and_simple_classes():
    m = model("B2", "universal", 6)
    assert schubert_class(m, "e") == point_class(m)
    assert schubert_class(m, "s1") == bott_samelson(m, (1,))
    assert schubert_class(m, m.datum.longest) == m.section({w: m.one() for w in m.window})


def test_singular_class_uses_n_at_singular_locus():
    m = model("B2", "universal", 6)
    t = Terms(m)
    cls = schubert_class(m, "s1s2s1")
    e, s1 = m.datum.identity, m.datum.s(1)
    want = (t.N * t.R("a1", "a2", "s1a2")).to_series()
    assert cls[e] == want and cls[s1] == want


@pytest.mark.parametrize("word", ["1212", "2121", "12121", "21212"])
def test_g2_singular_classes_unsupported(word):
    m = model("G2", "additive", 4)
    with pytest.raises(Unsupported, match="singular"):
        schubert_class(m, word)
    assert tuple(int(c) for c in word) in SINGULAR_LOCI["G2"]


def test_affine_classes_unsupported():
    with pytest.raises(Unsupported):
        schubert_class(model("A1aff", "additive", 4), "1")


@pytest.mark.parametrize("word", ["e", "1", "2", "12", "21"])
def test_a2_bott_samelson_equals_schubert(word):
    for kind in ("additive", "multiplicative"):
        m = model("A2", kind, 7)
        bs = bott_samelson(m, () if word == "e" else tuple(int(c) for c in word))
        assert bs == schubert_class(m, "" if word == "e" else word)


# expansions


@pytest.mark.parametrize("name", FINITE)
def test_expand_basis_class(name):
    m = model(name, "universal", 5)
    basis = schubert_basis(m)
    for w in m.window:
        if w not in basis:
            continue
        r = expand_in_basis(basis[w], basis)
        assert not r.residual
        assert set(r.nonzero()) == {w} and r[w] == m.one()


def _combination(m, data):
    basis = schubert_basis(m)
    coeffs = {}
    total = m.section({})
    for w in m.window:
        if w not in basis or not data.draw(st.booleans()):
            continue
        c = chern_monomial(m, data.draw(st.lists(weights, max_size=2)))
        if c.is_zero():
            continue
        coeffs[w] = c
        total = total + basis[w].scale(c)
    return coeffs, total


@pytest.mark.parametrize("name", ["A2", "B2"])
@given(data=st.data())
def test_expansion_round_trip(name, data):
    m = model(name, "universal", 6)
    coeffs, total = _combination(m, data)
    r = expand_in_basis(total, schubert_basis(m))
    assert not r.residual
    # compared within tracked precision: a coefficient can sit wholly above it
    for w in m.window:
        got = r[w] if r[w] is not None else m.zero()
        assert got.first_difference(coeffs.get(w, m.zero())) is None


@given(data=st.data())
def test_expansion_round_trip_recovers_every_coefficient(data):
    m = model("B2", "universal", 8)
    coeffs, total = _combination(m, data)
    r = expand_in_basis(total, schubert_basis(m))
    assert not r.residual
    assert set(r.nonzero()) == set(coeffs)
    for w, c in coeffs.items():
        assert r[w].first_difference(c) is None


@pytest.mark.parametrize("name", ["A2", "B2"])
@given(data=st.data())
def test_chain_sum_agrees_with_elimination(name, data):
    m = model(name, "multiplicative", 6)
    basis = schubert_basis(m)
    _, total = _combination(m, data)
    chains = chain_sum_expansion(total, basis)
    r = expand_in_basis(total, basis)
    for w in m.window:
        got = chains.get(w)
        got = got.to_series() if got is not None else m.zero()
        want = r[w] if r[w] is not None else m.zero()
        assert got.first_difference(want) is None


def test_non_gkm_section_leaves_residual():
    m = model("B2", "additive", 6)
    r = expand_in_basis(m.section({m.datum.identity: m.one()}), schubert_basis(m))
    assert r.residual and r.diagnostics


def test_z212_expansion():
    m = model("B2", "universal", 6)
    basis = schubert_basis(m)
    r = expand_in_basis(bott_samelson(m, (2, 1, 2)), basis)
    coeff, w = difference_closed_form(Terms(m), "212")
    assert not r.residual
    assert r[m.datum.element("212")] == m.one()
    assert coeff.first_difference(r[m.datum.element(w)]) is None
    assert set(r.nonzero()) == {m.datum.element("212"), m.datum.element("2")}


@given(data=st.data())
def test_b2_generic_expansion(data):
    m = model("B2", "universal", 6)
    _, total = _combination(m, data)
    r = expand_in_basis(total, schubert_basis(m))
    closed = b2_generic_expansion(Terms(m), total)
    yR = m.y_R()
    for word, value in closed.items():
        c = r[m.datum.element(word)]
        got = yR * c if c is not None else m.zero()
        assert value.first_difference(got) is None, word


# products


KNOWN_PRODUCT_GAPS = {
    ("B2", "multiplicative", ("s1s2s1", "s2s1s2")),
    ("G2", "additive", ("s1s2s1", "s2s1s2")),
    ("G2", "multiplicative", ("s1s2s1", "s2s1s2")),
    *((n, "universal", p) for n in ("B2", "G2")
      for p in [("s2s1", "s1s2s1"), ("s1s2s1", "s1s2s1"), ("s1s2s1", "s2s1s2")]),
}


def _product_cases():
    for name in FINITE:
        for kind in LAWS:
            for pair in PRODUCTS:
                if name == "A2" and pair == ("s1s2s1", "s2s1s2"):
                    continue
                marks = []
                if (name, kind, pair) in KNOWN_PRODUCT_GAPS:
                    marks = [pytest.mark.xfail(strict=True, reason="printed product differs; see notes")]
                yield pytest.param(name, kind, pair, marks=marks, id=f"{name}-{kind}-{pair[0]}x{pair[1]}")


@pytest.mark.parametrize("name,kind,pair", list(_product_cases()))
def test_product_table(name, kind, pair):
    m = model(name, kind, 6)
    t = Terms(m)
    result = schubert_product(schubert_basis(m), *pair)
    assert check_expansion(t, result, PRODUCTS[pair](t)) == []


def test_leading_product_coefficient():
    m = model("B2", "universal", 6)
    basis = schubert_basis(m)
    u, v = m.datum.element("21"), m.datum.element("2")
    r = schubert_product(basis, u, v)
    assert r[v] == basis[u][v]


@pytest.mark.parametrize("name", FINITE)
def test_pieri_trivial_cases(name):
    m = model(name, "universal", 6)
    basis = schubert_basis(m)
    assert pieri_chevalley(basis, (0, 0), m.datum.element("12")).nonzero() == {}
    r = pieri_chevalley(basis, (1, -1), m.datum.identity)
    assert r.nonzero() == {m.datum.identity: m.y((1, -1))}


@pytest.mark.parametrize("name", FINITE)
@pytest.mark.parametrize("word", ["e", "s1", "s2", "s1s2", "s2s1"])
def test_pieri_matches_product_rule(name, word):
    m = model(name, "universal", 6)
    basis = schubert_basis(m)
    t = Terms(m)
    for lam in [(1, 0), (-1, 2)]:
        g = phi(m, TensorElement.of(m.one(), m.y(lam)))
        expected = product_rule(t, g, word)
        result = pieri_chevalley(basis, lam, m.datum.element("" if word == "e" else word))
        assert check_expansion(t, result, expected) == []


# Bott-Samelson minus Schubert


@pytest.mark.parametrize("name", FINITE)
@pytest.mark.parametrize("kind", ["additive", "multiplicative"])
@pytest.mark.parametrize("case", ["121", "212"])
def test_differences_vanish(name, kind, case):
    m = model(name, kind, 7)
    assert bs_minus_schubert(m, case).support() in ([], ())


@pytest.mark.parametrize("name", FINITE)
@pytest.mark.parametrize("case", ["121", "212"])
def test_universal_differences(name, case):
    m = model(name, "universal", 6)
    coeff, w = difference_closed_form(Terms(m), case)
    diff = bs_minus_schubert(m, case)
    cls = schubert_class(m, w)
    for v in m.window:
        assert (coeff * cls[v]).first_difference(diff[v]) is None, str(v)


def test_universal_difference_nonzero_in_b2():
    m = model("B2", "universal", 6)
    assert bs_minus_schubert(m, "121").support()

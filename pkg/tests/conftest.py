import json
import pathlib
from functools import lru_cache

import pytest
import sympy as sp
from hypothesis import HealthCheck, settings

from schubfgl.algebra import Poly
from schubfgl.fgl import fgl_build
from schubfgl.momentgraph import MomentGraphModel

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("default")

ORACLE = json.loads((pathlib.Path(__file__).with_name("data") / "oracle.json").read_text())
FINITE = ("A2", "B2", "G2")
LAWS = ("additive", "multiplicative", "universal")


@lru_cache(maxsize=None)
def law(kind, order=8):
    return fgl_build(kind, order)


@lru_cache(maxsize=None)
def model(name, kind="universal", order=6, window=None):
    return MomentGraphModel(name, law(kind, order), window=window)


_M = sp.symbols("m1:40")


def to_sympy(c):
    """An engine coefficient as a sympy number or polynomial in m1, m2, ..."""
    if isinstance(c, Poly):
        total = sp.Integer(0)
        for mono, q in c.terms.items():
            term = sp.Rational(int(q.numerator), int(q.denominator))
            for i, e in enumerate(mono):
                term *= _M[i] ** e
            total += term
        return sp.expand(total)
    return sp.Rational(int(c.numerator), int(c.denominator))


def oracle_mismatch(series, terms, order):
    """Degrees below min(series.prec, order) where the series and frozen terms disagree."""
    limit = min(series.prec, order)
    want = {tuple(int(k) for k in key.split(",")): sp.sympify(v) for key, v in terms.items()}
    bad = set()
    for e in set(want) | set(series.terms):
        if sum(e) >= limit:
            continue
        got = to_sympy(series.terms[e]) if e in series.terms else sp.Integer(0)
        if sp.expand(got - want.get(e, 0)) != 0:
            bad.add(sum(e))
    return sorted(bad)


@pytest.fixture
def oracle():
    return ORACLE


def chern_monomial(m, weights):
    out = m.one()
    for w in weights:
        out = out * m.y(w)
    return out


def gkm_sections(m, max_pairs=2):
    """Strategy: Phi of a random tensor sum of Chern-class monomials (always GKM)."""
    from hypothesis import strategies as st
    from schubfgl.momentgraph import TensorElement, phi

    weight = st.tuples(st.integers(-2, 2), st.integers(-2, 2)).filter(lambda w: w != (0, 0))
    mono = st.lists(weight, max_size=2).map(lambda ws: chern_monomial(m, ws))
    pair = st.tuples(mono, mono).map(lambda fg: TensorElement.of(*fg))
    return st.lists(pair, min_size=1, max_size=max_pairs).map(
        lambda ps: phi(m, sum(ps[1:], ps[0])))


ACCEPTANCE = []


def record(number, title, passed, detail, seconds):
    line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {title}: {detail} ({seconds:.1f} s)"
    ACCEPTANCE.append((number, line))
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)

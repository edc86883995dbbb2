"""Closed-form rank-2 formulas, written as localized elements.

Every formula is a function of a :class:`Terms` object, which supplies the
Chern classes of the negated roots a1, a2, s1a2, s2a1, s1s2a1, s2s1a2 and
the factor N.  The expansions returned by :mod:`schubfgl.schubert` are
compared with these as fractions, by cross-multiplying denominators.

>>> from schubfgl.momentgraph import MomentGraphModel
>>> from schubfgl.schubert import schubert_basis, schubert_product
>>> model = MomentGraphModel("B2", "universal")
>>> terms = Terms(model)
>>> got = schubert_product(schubert_basis(model), "s1", "s2")
>>> check_expansion(terms, got, PRODUCTS[("s1", "s2")](terms))
[]
"""

from __future__ import annotations

from .algebra import LocalizedElement
from .schubert import correction_factor_N

__all__ = [
    "ROOT_NAMES",
    "Terms",
    "PRODUCTS",
    "product_rule",
    "b2_generic_expansion",
    "difference_closed_form",
    "check_expansion",
]

ROOT_NAMES = ("a1", "a2", "s1a2", "s2a1", "s1s2a1", "s2s1a2")


class Terms:
    """Chern classes of the rank-2 roots needed by the closed forms."""

    def __init__(self, model):
        self.model = model
        d = model.datum
        s1, s2 = d.s(1), d.s(2)
        a1, a2 = d.alpha(1), d.alpha(2)
        self.roots = {
            "a1": a1,
            "a2": a2,
            "s1a2": d.act(s1, a2),
            "s2a1": d.act(s2, a1),
            "s1s2a1": d.act(d.element("12"), a1),
            "s2s1a2": d.act(d.element("21"), a2),
        }
        self.j = d.j
        self._N = None

    def weight(self, name, sign=-1, multiple=1):
        return tuple(sign * multiple * c for c in self.roots[name])

    def y_series(self, name, sign=-1, multiple=1):
        return self.model.y(self.weight(name, sign, multiple))

    def one(self):
        return LocalizedElement.of(self.model.one())

    def Y(self, *names):
        """prod y_{-root}."""
        out = self.model.one()
        for n in names:
            out = out * self.y_series(n)
        return LocalizedElement.of(out)

    def I(self, *names):
        """1 / prod y_{-root}."""
        out = self.one()
        for n in names:
            out = out.divide_by(self.weight(n), self.y_series(n))
        return out

    def R(self, *names):
        """y_R / prod y_{-root}."""
        return self.I(*names) * self.model.y_R()

    def p(self, first, second):
        """p(y_u, y_v) for weights u, v given as ``(name, sign, multiple)`` triples."""
        u = self.y_series(*first)
        v = self.y_series(*second)
        return LocalizedElement.of(self.model.law.p_of(u, v))

    @property
    def N(self):
        if self._N is None:
            self._N = LocalizedElement.of(correction_factor_N(self.model))
        return self._N


def _products():
    # (u, v) -> function of Terms returning {w: coefficient of [X_w]}
    P = {}
    P[("e", "e")] = lambda t: {"e": t.R()}
    P[("e", "s1")] = lambda t: {"e": t.R("a1")}
    P[("e", "s2")] = lambda t: {"e": t.R("a2")}
    P[("e", "s1s2")] = lambda t: {"e": t.R("a1", "a2")}
    P[("e", "s2s1")] = lambda t: {"e": t.R("a2", "a1")}
    P[("e", "s1s2s1")] = lambda t: {"e": t.N * t.R("a1", "a2", "s1a2")}
    P[("e", "s2s1s2")] = lambda t: {"e": t.R("a2", "a1", "s2a1")}
    P[("s1", "s1")] = lambda t: {"s1": t.R("a1")}
    P[("s1", "s1s2")] = lambda t: {"s1": t.R("a1", "a2")}
    P[("s1", "s1s2s1")] = lambda t: {"s1": t.N * t.R("a1", "a2", "s1a2")}
    P[("s1", "s2")] = lambda t: {"e": t.R("a1", "a2")}
    P[("s1", "s2s1")] = lambda t: {
        "s1": t.R("a1", "s1a2"),
        "e": t.R("a2", "a1", "s1a2") * (t.Y("s1a2") - t.Y("a2")) * t.I("a1"),
    }
    P[("s1", "s2s1s2")] = lambda t: {
        "s1": t.R("a2", "a1", "s1a2"),
        "e": t.R("a1", "a2", "s1a2", "s2a1") * (t.Y("s1a2") - t.Y("s2a1")) * t.I("a1"),
    }
    P[("s2", "s2")] = lambda t: {"s2": t.R("a2")}
    P[("s2", "s2s1")] = lambda t: {"s2": t.R("a2", "a1")}
    P[("s2", "s2s1s2")] = lambda t: {"s2": t.R("a2", "a1", "s2a1")}
    P[("s2", "s1s2")] = lambda t: {
        "s2": t.R("a2", "s2a1"),
        "e": t.R("a1", "a2", "s2a1") * (t.Y("s2a1") - t.Y("a1")) * t.I("a2"),
    }
    P[("s2", "s1s2s1")] = lambda t: {
        "s2": t.R("a1", "a2", "s2a1"),
        "e": t.R("a1", "a2", "s1a2", "s2a1") * (t.N * t.Y("s2a1") - t.Y("s1a2")) * t.I("a2"),
    }
    P[("s1s2", "s1s2")] = lambda t: {
        "s1s2": t.R("a2", "s2a1"),
        "s1": t.R("a2", "a1", "s2a1") * (t.Y("s2a1") - t.Y("a1")) * t.I("a2"),
    }
    P[("s1s2", "s2s1")] = lambda t: {
        "s1": t.R("a1", "a2", "s1a2"),
        "s2": t.R("a1", "a2", "s2a1"),
        "e": t.R("a1", "a2", "s1a2", "s2a1")
        * ((t.Y("s2a1") - t.Y("a1")) * t.I("a2") * (t.Y("s1a2") - t.Y("a2")) * t.I("a1") - t.one()),
    }
    P[("s1s2", "s1s2s1")] = lambda t: {
        "s1s2": t.R("a1", "a2", "s2a1"),
        "s1": t.R("a1", "a2", "s1a2", "s2a1") * (t.N * t.Y("s2a1") - t.Y("s1a2")) * t.I("a2"),
    }
    P[("s1s2", "s2s1s2")] = lambda t: {
        "s1s2": t.R("a2", "s2a1", "s2s1a2"),
        "s1": t.R("a1", "a2", "s2a1", "s1a2", "s2s1a2")
        * (t.Y("s2a1", "s2s1a2") - t.Y("a1", "s1a2")) * t.I("a2"),
        "s2": t.R("a1", "a2", "s2a1", "s2s1a2") * (t.Y("s2s1a2") - t.Y("a1")) * t.I("s2a1"),
        "e": t.R("a2", "a2") * (
            t.I("a1", "a1", "s2a1") - t.I("s2a1", "s2a1", "a1")
            - t.I("a1", "a1", "s1a2") + t.I("s2a1", "s2a1", "s2s1a2")
        ),
    }
    P[("s2s1", "s2s1")] = lambda t: {
        "s2s1": t.R("a1", "s1a2"),
        "s2": t.R("a1", "a2", "s1a2") * (t.Y("s1a2") - t.Y("a2")) * t.I("a1"),
    }
    P[("s2s1", "s1s2s1")] = lambda t: {
        "s2s1": t.R("a1", "s1a2", "s1s2a1"),
        "s1": t.R("a1", "s1a2", "s1a2") * (t.N * t.I("a2") - t.I("s1s2a1")),
        "s2": t.R("a1", "a1") * (t.I("s2a1", "a2") - t.I("s1s2a1", "s1a2")),
        "e": t.R("a1", "a1") * (
            t.N * t.I("a2", "a2", "s1a2") - t.N * t.I("a2", "s1a2", "s1a2")
            - t.I("a2", "a2", "s2a1") + t.I("s1a2", "s1a2", "s1s2a1")
        ),
    }
    P[("s2s1", "s2s1s2")] = lambda t: {
        "s2s1": t.R("a2", "a1", "s1a2"),
        "s2": t.R("a2", "a1", "a1") * (t.I("s2a1") - t.I("s1a2")),
    }
    # the squared root y_{-a1^2} is read as y_{-a1}^2; in both squares the last
    # term is printed against [X_1] but has the degree of (and matches) the
    # coefficient of [X_s1], resp. [X_s2]
    P[("s1s2s1", "s1s2s1")] = lambda t: {
        "s1s2s1": t.R("a1", "s1a2", "s1s2a1"),
        "s1s2": t.R("a1", "a1") * (t.I("a2", "s2a1") - t.I("s1a2", "s1s2a1")),
        "s1": t.R("a1", "a2") * (
            t.N * t.N * t.I("a2", "s1a2", "s1a2") - t.N * t.I("s1a2", "s1a2", "s1s2a1")
            - t.I("a1", "a2", "s2a1") + t.I("a1", "s1a2", "s1s2a1")
        ),
    }
    P[("s1s2s1", "s2s1s2")] = lambda t: {
        "s1s2": t.R("a1", "a2", "s2a1", "s2s1a2"),
        "s2s1": t.R("a1", "a2", "s1a2", "s1s2a1"),
        "s1": t.R("a1", "a2") * (
            t.N * t.I("a2", "s1a2", "s1a2") - t.I("a2", "s2a1", "s2s1a2") - t.I("s1a2", "s1a2", "s1s2a1")
        ),
        "s2": t.R("a1", "a2") * (
            t.I("a1", "s2a1", "s2a1") - t.I("a1", "s1a2", "s1s2a1") - t.I("s2a1", "s2a1", "s2s1a2")
        ),
    }
    P[("s2s1s2", "s2s1s2")] = lambda t: {
        "s2s1s2": t.R("a2", "s2a1", "s2s1a2"),
        "s2s1": t.R("a2", "a2") * (t.I("a1", "s1a2") - t.I("s2a1", "s2s1a2")),
        "s2": t.R("a1", "a2") * (
            t.I("a1", "s2a1", "s2a1") - t.I("s2a1", "s2a1", "s2s1a2")
            - t.I("a1", "a2", "s1a2") + t.I("a2", "s2a1", "s2s1a2")
        ),
    }
    return P


PRODUCTS = _products()


def product_rule(terms, g, w):
    """Coefficients of g [X_w] for w of length <= 2, from the values of the section g."""
    s = lambda word: LocalizedElement.of(g[word])
    t = terms
    g1_s1 = (s("e") - s("s1")) * t.I("a1")
    g1_s2 = (s("e") - s("s2")) * t.I("a2")
    if w == "e":
        return {"e": s("e")}
    if w == "s1":
        return {"s1": s("s1"), "e": g1_s1}
    if w == "s2":
        return {"s2": s("s2"), "e": g1_s2}
    if w == "s1s2":
        gs1 = (s("s1") - s("s1s2")) * t.I("a2")
        gs2 = (s("s2") - s("s1s2")) * t.I("s2a1")
        return {"s1s2": s("s1s2"), "s1": gs1, "s2": gs2, "e": (g1_s1 - gs2) * t.I("a2")}
    if w == "s2s1":
        gs1 = (s("s1") - s("s2s1")) * t.I("s1a2")
        gs2 = (s("s2") - s("s2s1")) * t.I("a1")
        return {"s2s1": s("s2s1"), "s1": gs1, "s2": gs2, "e": (g1_s2 - gs1) * t.I("a1")}
    raise ValueError(f"no product rule for X_{w}")


def b2_generic_expansion(terms, f):
    """y_R times the Schubert coefficients of a type B2 section f.

    The coefficient of the longest class uses the root s1s2s1a2 (which is a2).
    """
    if terms.model.datum.name != "B2":
        raise ValueError("the closed form is specific to type B2")
    v = lambda word: LocalizedElement.of(f[word])
    t = terms
    top = "s1s2s1s2"
    last_root = terms.model.datum.act(terms.model.datum.element("121"), terms.roots["a2"])
    y_last = LocalizedElement.of(terms.model.y(tuple(-c for c in last_root)))
    return {
        top: v(top) * t.Y("a1", "s1a2", "s1s2a1") * y_last,
        "s1s2s1": (v("s1s2s1") - v(top)) * t.Y("a1", "s1a2", "s1s2a1"),
        "s2s1s2": (v("s2s1s2") - v(top)) * t.Y("a2", "s2a1", "s2s1a2"),
        "s1s2": (v("s1s2") - v("s2s1s2")) * t.Y("a2", "s2a1")
        + (v(top) - v("s1s2s1")) * t.Y("s1a2", "s1s2a1"),
        "s2s1": (v("s2s1") - v("s1s2s1")) * t.Y("a1", "s1a2")
        + (v(top) - v("s2s1s2")) * t.Y("s2a1", "s2s1a2"),
        "s1": (v("s1") - v("s2s1")) * t.Y("a1")
        + (v("s2s1s2") - v("s1s2")) * t.Y("s2a1")
        + (v(top) - v("s1s2s1"))
        * (t.N * t.Y("s1s2a1", "a1") * t.I("a2") - t.Y("s1a2", "s1s2a1") * t.I("a2") - t.Y("a1")),
        "s2": (v("s2") - v("s1s2")) * t.Y("a2")
        + (v("s1s2s1") - v("s2s1")) * t.Y("s1a2")
        + (v(top) - v("s2s1s2"))
        * (t.Y("s2s1a2", "a2") * t.I("a1") - t.Y("s2a1", "s2s1a2") * t.I("a1") - t.Y("a2")),
        "e": v("e") - v("s1") - v("s2") + v("s1s2") + v("s2s1") - v("s1s2s1") - v("s2s1s2") + v(top),
    }


def difference_closed_form(terms, case, variant="reduced"):
    """Closed forms for [Z_212] - [X_{s2s1s2}] and [Z_121] - [X_{s1s2s1}].

    Returns ``(coefficient, w)`` with the difference equal to ``coefficient [X_w]``.
    For case 212, ``variant="printed"`` keeps the extra factor y_{-a1} y_{-a2} / y_R
    of the last printed line, which does not hold.
    """
    t = terms
    if str(case) == "212":
        pdiff = t.p(("a2", 1, 1), ("a2", -1, 1)) - t.p(("a1", -1, 1), ("a2", -1, 1))
        coeff = pdiff * t.I("s2a1")
        if variant == "printed":
            coeff = coeff * t.Y("a1", "a2") * _inverse_R(t)
        return coeff, "s2"
    if str(case) == "121":
        pdiff = t.p(("a1", 1, 1), ("a1", -1, 1)) - t.p(("a2", -1, 1), ("a1", -1, t.j))
        return pdiff * t.I("s1a2"), "s1"
    raise ValueError("case must be 121 or 212")


def _inverse_R(t):
    """1 / y_R."""
    out = t.one()
    for beta, _ in t.model.datum.positive_roots():
        neg = tuple(-c for c in beta)
        out = out.divide_by(neg, t.model.y(neg))
    return out


def check_expansion(terms, result, expected):
    """Words where an expansion and a closed form disagree (empty when they match).

    ``result`` is an ExpansionResult; ``expected`` maps words to localized
    elements, absent words meaning zero.
    """
    datum = terms.model.datum
    bad = []
    wanted = {}
    for word, value in expected.items():
        w = datum.element(word)
        wanted[w] = wanted[w] + value if w in wanted else value
    for w in sorted(set(result.nonzero()) | set(wanted)):
        word = str(w)
        got = result.coefficients.get(w)
        want = wanted.get(w)
        got = LocalizedElement.of(got if got is not None else terms.model.zero())
        if want is None:
            if not got.is_zero():
                bad.append(word)
        elif got.first_difference(want) is not None:
            bad.append(word)
    if result.residual:
        bad.append("residual")
    return bad

"""Demazure operators, Bott-Samelson classes, Schubert classes and expansions.

Classes are :class:`~schubfgl.momentgraph.Section` objects.  The Schubert
class of a smooth Schubert variety X_w is given vertex by vertex by

    [X_w]_v = prod of y_{-beta} over positive roots beta with v s_beta not <= w,

(the quotient of y_R = prod_{beta > 0} y_{-beta} by the labels of the edges
of X_w at v).  For the singular variety X_{s1s2s1} in types B2 and G2 the
same values are used except at the singular locus {1, s1}, where they are
multiplied by the conjectural correction factor N.  The longest element
has the constant class 1.  Other singular classes raise :class:`Unsupported`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import EXACT, LocalizedElement, NotDivisible, TruncatedSeries
from .momentgraph import (MomentGraphModel, Section, WindowError, euler_pushforward,
                          schubert_inclusion, x_multiply)

__all__ = [
    "Unsupported",
    "SINGULAR_LOCI",
    "demazure_apply",
    "bott_samelson",
    "point_class",
    "schubert_class",
    "correction_factor_N",
    "delta_121",
    "delta_212",
    "SchubertBasis",
    "ExpansionResult",
    "schubert_basis",
    "expand_in_basis",
    "chain_sum_expansion",
    "schubert_product",
    "pieri_chevalley",
    "bs_minus_schubert",
    "naive_pushforward",
]


class Unsupported(NotImplementedError):
    """The requested class has no definition implemented here."""


# singular Schubert varieties in rank 2 and their singular loci
SINGULAR_LOCI = {
    "B2": {(1, 2, 1): (1,)},
    "G2": {
        (1, 2, 1): (1,),
        (1, 2, 1, 2): (1, 2),
        (2, 1, 2, 1): (2, 1),
        (1, 2, 1, 2, 1): (1, 2, 1),
        (2, 1, 2, 1, 2): (2,),
    },
}


def _neg(weight):
    return tuple(-c for c in weight)


def demazure_apply(i, section):
    """The push-pull operator A_i on a section.

    (A_i s)_z = (s_z - s_{s_i z}) / y_{-z^-1 a_i} + s_{s_i z} p(y_{z^-1 a_i}, y_{-z^-1 a_i}).
    Raises NotDivisible if ``section`` fails the GKM condition on an s_i edge.
    """
    model = section.model
    datum = model.datum
    alpha = datum.alpha(i)
    si = datum.s(i)
    law = model.law
    for w, value in section.values.items():
        partner = datum.mul(si, w)
        if not model.contains(partner) and not value.is_zero():
            raise WindowError(f"A_{i} needs the vertex {partner} outside the window")
    out = {}
    for z in model.window:
        here = section.values.get(z)
        partner = datum.mul(si, z)
        there = section.values.get(partner) if model.contains(partner) else None
        if here is None and there is None:
            continue
        here = here if here is not None else model.zero()
        there = there if there is not None else model.zero()
        pos = model.y_at(z, alpha)
        neg = model.y_at(z, _neg(alpha))
        value = (here - there).div_exact(neg)
        if not there.is_zero():
            value = value + there * law.p_of(pos, neg)
        out[z] = value
    return Section(model, out)


def point_class(model):
    """[Z_pt] = [X_1]: y_R at the identity, zero elsewhere."""
    if not model.datum.finite:
        raise Unsupported("the point class needs a finite root system")
    return Section(model, {model.datum.identity: model.y_R()})


def bott_samelson(model, word):
    """A_{i1} A_{i2} ... A_{il} [Z_pt]; the last letter acts first."""
    word = tuple(word)
    if not model.datum.finite and len(word) > model.window_length:
        raise WindowError("word longer than the window")
    out = point_class(model)
    for i in reversed(word):
        out = demazure_apply(i, out)
    return out


def correction_factor_N(model):
    """N = 1 + (1 - p(y_{-a2}, y_{-j a1}) y_{-a2}) sum_{k=1}^{j-1} (1 - p(y_{-a1}, y_{-k a1}) y_{-k a1})."""
    datum, law = model.datum, model.law
    a1, a2, j = datum.alpha(1), datum.alpha(2), datum.j
    one = model.one()

    def y(weight):
        return model.y(weight)

    def scaled(k, w):
        return tuple(k * c for c in w)

    total = TruncatedSeries.zero(2, EXACT)
    for k in range(1, j):
        ykneg = y(scaled(-k, a1))
        total = total + (one - law.p_of(y(_neg(a1)), ykneg) * ykneg)
    head = one - law.p_of(y(_neg(a2)), y(scaled(-j, a1))) * y(_neg(a2))
    return one + head * total


def _rank2_roots(model):
    d = model.datum
    s1, s2 = d.s(1), d.s(2)
    a1, a2 = d.alpha(1), d.alpha(2)
    return a1, a2, d.act(s1, a2), d.act(s2, a1)


def delta_121(model):
    """Closed form of the value of [Z_121] at the identity, as a localized element."""
    a1, a2, s1a2, _ = _rank2_roots(model)
    return _delta(model, a1, a2, s1a2)


def delta_212(model):
    a1, a2, _, s2a1 = _rank2_roots(model)
    return _delta(model, a2, a1, s2a1)


def _delta(model, first, second, moved):
    law = model.law
    yf, ys, ym = (model.y(_neg(w)) for w in (first, second, moved))
    prefactor = LocalizedElement.of(model.y_R())
    for w, val in ((first, yf), (second, ys), (moved, ym)):
        prefactor = prefactor.divide_by(_neg(w), val)
    inner = LocalizedElement.of(ym - ys).divide_by(_neg(first), yf) + law.p_of(model.y(first), yf) * ys
    return prefactor * inner


def _smooth_value(model, w, v):
    datum = model.datum
    out = model.one()
    for beta, refl in datum.positive_roots():
        if not datum.bruhat_leq(datum.mul(v, refl), w):
            out = out * model.y_neg(beta)
    return out


def naive_pushforward(model, w):
    """Pushforward of 1 along X_w -> G/B by the fixed-point formula, with no correction."""
    if isinstance(w, str):
        w = model.datum.element(w)
    fmap = schubert_inclusion(model, w)
    return euler_pushforward(model, fmap, {v: model.one() for v in fmap.source})


def schubert_class(model, w):
    """[X_w] as a section; see the module docstring for the cases covered."""
    datum = model.datum
    if isinstance(w, str):
        w = datum.element(w)
    if not datum.finite:
        raise Unsupported("Schubert classes need a finite root system")
    if w == datum.longest:
        return Section(model, {v: model.one() for v in model.window})
    singular = SINGULAR_LOCI.get(datum.name, {})
    if w.word in singular and w.word != (1, 2, 1):
        raise Unsupported(
            f"X_{w} is singular in type {datum.name} (singular locus X_{datum.element(singular[w.word])}); "
            "no class is defined for it"
        )
    values = {v: _smooth_value(model, w, v) for v in model.window if datum.bruhat_leq(v, w)}
    if w.word in singular:
        N = correction_factor_N(model)
        for v in (datum.identity, datum.s(1)):
            values[v] = N * values[v]
    return Section(model, values)


@dataclass
class ExpansionResult:
    """Coefficients c_w with sum c_w [X_w] equal to the expanded section."""

    coefficients: dict
    residual: bool = False
    diagnostics: list = field(default_factory=list)

    def __getitem__(self, w):
        return self.coefficients.get(w)

    def nonzero(self):
        return {w: c for w, c in self.coefficients.items() if not c.is_zero()}

    def to_json(self):
        return {
            "coefficients": {str(w): c.to_json() for w, c in sorted(self.nonzero().items())},
            "residual": self.residual,
            "diagnostics": self.diagnostics,
        }


class SchubertBasis:
    """Schubert classes of a finite model, built on first use and cached."""

    def __init__(self, model):
        self.model = model
        self._classes = {}

    def __contains__(self, w):
        try:
            self[w]
        except Unsupported:
            return False
        return True

    def __getitem__(self, w):
        if isinstance(w, str):
            w = self.model.datum.element(w)
        if w not in self._classes:
            try:
                self._classes[w] = schubert_class(self.model, w)
            except Unsupported as exc:
                self._classes[w] = exc
        hit = self._classes[w]
        if isinstance(hit, Unsupported):
            raise hit
        return hit

    def diagonal(self, w):
        """[X_w]_w."""
        return self[w][w]

    def diagonal_roots(self, w):
        """Positive roots beta with w beta > 0; [X_w]_w is the product of their y_{-beta}."""
        datum = self.model.datum
        return [beta for beta, _ in datum.positive_roots() if datum.is_positive_root(datum.act(w, beta))]

    def elements(self):
        return list(self.model.window)

    def descending(self):
        """Window elements by decreasing length; ties keep window order."""
        return sorted(self.model.window, key=lambda w: -w.length)


def schubert_basis(model):
    """The basis attached to ``model``, created once and memoized on it."""
    basis = model.__dict__.get("_schubert_basis")
    if basis is None:
        basis = model.__dict__["_schubert_basis"] = SchubertBasis(model)
    return basis


def expand_in_basis(section, basis):
    """Triangular expansion of a section in Schubert classes.

    Works from the longest elements down: at each w the remaining value is
    divided by [X_w]_w and that multiple of [X_w] is subtracted.  A failed
    division or a nonzero remainder sets the residual flag.
    """
    residual = section
    coefficients = {}
    diagnostics = []
    for w in basis.descending():
        value = residual[w]
        if value.is_zero() and (value.prec >= EXACT or w not in basis):
            continue
        # an inexact zero still bounds the coefficient's precision
        cls = basis[w]
        try:
            c = value.div_exact(cls[w])
        except NotDivisible as exc:
            diagnostics.append({"vertex": str(w), "degree": exc.degree})
            continue
        coefficients[w] = c
        residual = residual - cls.scale(c)
    leftover = [str(w) for w in residual.support()]
    if leftover and not diagnostics:
        diagnostics.append({"remainder": leftover})
    return ExpansionResult(coefficients, bool(diagnostics), diagnostics)


def chain_sum_expansion(section, basis):
    """The same expansion as a sum over strictly decreasing Bruhat chains.

    The coefficient of [X_z] is the sum over chains w_1 > ... > w_k = z of
    (-1)^(k-1) f_{w_1} prod [X_{w_i}]_{w_(i+1)} / [X_{w_i}]_{w_i}, divided by
    [X_z]_z.  Terms are summed as localized elements and divided out at the end.
    """
    model = section.model
    datum = model.datum
    window = list(model.window)
    below = {w: [v for v in window if v != w and datum.bruhat_leq(v, w)] for w in window}

    def inverse_diagonal(w):
        out = LocalizedElement.of(model.one())
        for beta in basis.diagonal_roots(w):
            out = out.divide_by(_neg(beta), model.y_neg(beta))
        return out

    inv_diag = {w: inverse_diagonal(w) for w in window}
    # weight[w][z] = sum over chains from w down to z of the signed ratio products
    chains = {}
    for z in window:
        chains[(z, z)] = LocalizedElement.of(model.one())
    for w in sorted(window, key=lambda u: u.length):
        for z in below[w]:
            total = None
            for u in below[w]:
                if not (u == z or (z in below[u])):
                    continue
                step = inv_diag[w] * basis[w][u] * chains[(u, z)]
                total = -step if total is None else total - step
            chains[(w, z)] = total
    coefficients = {}
    for z in window:
        total = None
        for w in window:
            if (w, z) not in chains or section[w].is_zero():
                continue
            term = chains[(w, z)] * section[w]
            total = term if total is None else total + term
        if total is None:
            continue
        coefficients[z] = total * inv_diag[z]
    return coefficients


def schubert_product(basis, u, v):
    """Expand [X_u][X_v] in the Schubert basis."""
    return expand_in_basis(basis[u] * basis[v], basis)


def pieri_chevalley(basis, weight, w):
    """Expand x_weight [X_w] in the Schubert basis."""
    return expand_in_basis(x_multiply(weight, basis[w]), basis)


def bs_minus_schubert(model, case):
    """[Z_121] - [X_{s1s2s1}] or [Z_212] - [X_{s2s1s2}] as a section."""
    word = {"121": (1, 2, 1), "212": (2, 1, 2)}[str(case)]
    return bott_samelson(model, word) - schubert_class(model, model.datum.element(word))


def all_products(basis, max_length=3):
    """Products of all pairs of classes up to the given length, keyed by (u, v)."""
    elements = [w for w in basis.elements() if w.length <= max_length]
    out = {}
    for u, v in itertools.combinations_with_replacement(elements, 2):
        out[(u, v)] = schubert_product(basis, u, v)
    return out

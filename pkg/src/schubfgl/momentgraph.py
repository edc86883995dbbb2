"""Moment-graph sections and the operators acting on them.

A :class:`Section` assigns a series to each Weyl group element of a window.
The series live in the ring generated by the Chern classes y_1, y_2 of the
lattice basis.  The map ``phi`` sends a tensor ``f (x) g`` to the section
``w -> f * (w^-1 g)``, where ``w`` acts on a series by replacing y_i with
``y_{w b_i}``.  Along the edge ``(w, w s_beta)`` (label ``-beta``) an element
of the image satisfies the GKM condition: the difference of the two values
is divisible by ``y_{-beta}``.

Group elements act on sections by ``(t_v s)_z = s_{v^-1 z}`` and weights by
``(x_lam s)_w = y_{w^-1 lam} s_w``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import EXACT, LocalizedElement, NotDivisible, TruncatedSeries
from .fgl import FormalGroupLaw, fgl_build
from .rootdata import RootDatum, WeylElement, root_datum

__all__ = [
    "WindowError",
    "MomentGraphModel",
    "Section",
    "TensorElement",
    "FixedPointMap",
    "phi",
    "section_product",
    "gkm_check",
    "hecke_t_action",
    "x_multiply",
    "pushforward_pi",
    "pullback_pi",
    "euler_pushforward",
    "iota_change_of_groups",
    "format_root",
]


class WindowError(ValueError):
    """An operation needed a Weyl group element outside the section window."""


def format_root(datum, weight, negate=False):
    """Write a weight in simple-root coordinates, e.g. ``2a1+a2`` or ``-(a1+a2)``."""
    coords = datum.root_coordinates(weight)
    if negate:
        coords = tuple(-c for c in coords)
    parts = []
    for i, c in enumerate(coords, start=1):
        if c == 0:
            continue
        c = Fraction(c)
        mag = abs(c)
        text = f"a{i}" if mag == 1 else f"{mag}a{i}"
        parts.append(("-" if c < 0 else "+") + text)
    if not parts:
        return "0"
    if all(p.startswith("-") for p in parts) and len(parts) > 1:
        return "-(" + "+".join(p[1:] for p in parts) + ")"
    out = "".join(parts)
    return out[1:] if out.startswith("+") else out


class MomentGraphModel:
    """A root datum, a formal group law and a window of Weyl group elements."""

    def __init__(self, datum, law, window=None):
        if isinstance(datum, str):
            datum = root_datum(datum)
        if isinstance(law, str):
            law = fgl_build(law, 8)
        self.datum: RootDatum = datum
        self.law: FormalGroupLaw = law
        if window is None and not datum.finite:
            window = 6
        self.window_length = window if window is not None else datum.m12
        self.window = tuple(datum.window(self.window_length))
        self._index = {w: k for k, w in enumerate(self.window)}
        self._inverse = {w: datum.inverse(w) for w in self.window}
        self._action = {}

    def __repr__(self):
        return f"MomentGraphModel({self.datum.name}, {self.law.kind}, order={self.law.order})"

    @property
    def prec(self):
        return self.law.order

    @property
    def gens(self):
        return 2

    def contains(self, w):
        return w in self._index

    def y(self, weight):
        return self.law.chern(weight)

    def y_neg(self, weight):
        return self.law.chern(tuple(-c for c in weight))

    def y_at(self, w, weight):
        """y_{w^-1 weight}: the value at w of the section x_weight."""
        inv = self._inverse.get(w) or self.datum.inverse(w)
        return self.law.chern(self.datum.act(inv, weight))

    def one(self):
        return TruncatedSeries.constant(1, 2, EXACT)

    def zero(self):
        return TruncatedSeries.zero(2, EXACT)

    def act_on_series(self, w, g):
        """w g: replace each generator y_i by y_{w b_i}."""
        if w.is_identity or g.is_zero():
            return g
        images = self._action.get(w)
        if images is None:
            images = [self.y(self.datum.act(w, b)) for b in ((1, 0), (0, 1))]
            self._action[w] = images
        return g.substitute(images)

    def y_R(self):
        """Product of y_{-beta} over the positive roots (finite types)."""
        out = self.one()
        for beta, _ in self.datum.positive_roots():
            out = out * self.y_neg(beta)
        return out

    def roots_with_reflections(self):
        if self.datum.finite:
            return self.datum.positive_roots()
        return self.datum.positive_roots(self.window_length + 1)

    def edges(self):
        """Graph edges ``(w, w s_beta, beta, internal)`` with w first in window order."""
        out = []
        for w in self.window:
            for beta, refl in self.roots_with_reflections():
                v = self.datum.mul(w, refl)
                if v in self._index:
                    if self._index[v] > self._index[w]:
                        out.append((w, v, beta, True))
                else:
                    out.append((w, v, beta, False))
        return out

    def section(self, values):
        return Section(self, dict(values))


@dataclass(frozen=True)
class Section:
    """Finitely supported map from the model window to series (absent = 0)."""

    model: MomentGraphModel
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for w, v in self.values.items():
            if isinstance(w, str):
                w = self.model.datum.element(w)
            if not self.model.contains(w):
                raise WindowError(f"{w} lies outside the window of length {self.model.window_length}")
            clean[w] = v
        object.__setattr__(self, "values", clean)

    def __getitem__(self, w):
        if isinstance(w, str):
            w = self.model.datum.element(w)
        v = self.values.get(w)
        return self.model.zero() if v is None else v

    def support(self):
        return [w for w in self.model.window if w in self.values and not self.values[w].is_zero()]

    def map(self, fn):
        return Section(self.model, {w: fn(w, v) for w, v in self.values.items()})

    def __add__(self, other):
        keys = set(self.values) | set(other.values)
        return Section(self.model, {w: self[w] + other[w] for w in keys})

    def __sub__(self, other):
        keys = set(self.values) | set(other.values)
        return Section(self.model, {w: self[w] - other[w] for w in keys})

    def __neg__(self):
        return self.map(lambda w, v: -v)

    def scale(self, c):
        """Multiply every value by the same series or scalar."""
        return self.map(lambda w, v: v * c)

    def __mul__(self, other):
        if isinstance(other, Section):
            return section_product(self, other)
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, Section):
            return NotImplemented
        return self.first_difference(other) is None

    __hash__ = None

    def first_difference(self, other):
        """First vertex (window order) where the values disagree, or None."""
        for w in self.model.window:
            if w in self.values or w in other.values:
                if self[w].first_difference(other[w]) is not None:
                    return w
        return None

    @property
    def precision(self):
        precs = [v.prec for v in self.values.values()]
        return min(precs) if precs else EXACT

    def to_json(self):
        return {
            "datum": self.model.datum.name,
            "window": self.model.window_length,
            "values": {str(w): self[w].to_json() for w in self.model.window if w in self.values},
        }

    @classmethod
    def from_json(cls, model, data):
        if data["datum"] != model.datum.name:
            raise ValueError("section belongs to a different root datum")
        values = {model.datum.element(k): TruncatedSeries.from_json(v) for k, v in data["values"].items()}
        return cls(model, values)


@dataclass(frozen=True)
class TensorElement:
    """A formal sum of tensors f (x) g, kept as a tuple of pairs."""

    pairs: tuple

    @classmethod
    def of(cls, f, g):
        return cls(((f, g),))

    def __add__(self, other):
        return TensorElement(self.pairs + other.pairs)

    def __mul__(self, other):
        return TensorElement(tuple((f1 * f2, g1 * g2) for f1, g1 in self.pairs for f2, g2 in other.pairs))


def phi(model, tensor):
    """The section w -> sum f * (w^-1 g)."""
    values = {}
    for w in model.window:
        winv = model._inverse[w]
        total = None
        for f, g in tensor.pairs:
            term = f * model.act_on_series(winv, g)
            total = term if total is None else total + term
        if total is not None:
            values[w] = total
    return Section(model, values)


def section_product(a, b):
    keys = set(a.values) & set(b.values)
    return Section(a.model, {w: a[w] * b[w] for w in keys})


def gkm_check(section):
    """Test the GKM condition on every edge of the moment graph.

    Returns a dict with ``passed`` (bool) and ``edges``: a list of
    ``[w, w s_beta, label, status]`` with status ``pass``, ``fail`` or
    ``untested`` (edge leaves the window), plus ``failures`` giving the
    degree at which exact division broke down for each failing edge.
    """
    model = section.model
    edges, failures = [], []
    for w, v, beta, internal in model.edges():
        label = format_root(model.datum, beta, negate=True)
        if not internal:
            if section[w].is_zero():
                continue
            edges.append([str(w), str(v), label, "untested"])
            continue
        diff = section[w] - section[v]
        try:
            diff.div_exact(model.y_neg(beta))
            status = "pass"
        except NotDivisible as exc:
            status = "fail"
            failures.append({"edge": [str(w), str(v)], "label": label, "degree": exc.degree})
        edges.append([str(w), str(v), label, status])
    return {"passed": not failures, "edges": edges, "failures": failures}


def hecke_t_action(v, section):
    """(t_v s)_z = s_{v^-1 z}."""
    model = section.model
    out = {}
    for w, value in section.values.items():
        z = model.datum.mul(v, w)
        if not model.contains(z):
            if value.is_zero():
                continue
            raise WindowError(f"t_{v} moves support {w} to {z}, outside the window")
        out[z] = value
    return Section(model, out)


def x_multiply(weight, section):
    """(x_lam s)_w = y_{w^-1 lam} s_w."""
    model = section.model
    return section.map(lambda w, v: model.y_at(w, weight) * v)


def _x_J_roots(model, J):
    return [beta for beta, refl in model.datum.positive_roots()
            if all(i in J for i in refl.word)] if model.datum.finite else \
        [model.datum.alpha(i) for i in J]


def pushforward_pi(J, section):
    """(pi_J)_! = (sum_{v in W_J} t_v) (1 / x_J), x_J = prod x_{-alpha}, alpha in R_J^+.

    The result is constant on the cosets W_J z permuted by the left action of
    t_v; it is returned as a dict from minimal coset representatives to values.
    """
    model = section.model
    datum = model.datum
    J = tuple(sorted(J))
    if not J:
        return dict(section.values)
    negatives = [tuple(-c for c in alpha) for alpha in _x_J_roots(model, J)]
    group = datum.parabolic_subgroup(J)
    out = {}
    for z in model.window:
        rep = left_coset_representative(datum, z, J)
        if rep in out:
            continue
        # the single terms need not be divisible; only their sum is
        total = None
        for v in group:
            u = datum.mul(datum.inverse(v), z)
            if not model.contains(u):
                if u in section.values:
                    raise WindowError(f"{u} outside window")
                continue
            value = section[u]
            if value.is_zero():
                continue
            dens = []
            for weight in negatives:
                moved = datum.act(model._inverse.get(u) or datum.inverse(u), weight)
                dens.append((moved, model.y(moved)))
            term = LocalizedElement(value, tuple(dens))
            total = term if total is None else total + term
        if total is not None:
            series = total.to_series()
            if not series.is_zero():
                out[rep] = series
    return out


def left_coset_representative(datum, w, J):
    """Minimal-length element of W_J w."""
    return datum.coset_representative(w, J)


def pullback_pi(model, J, coset_values):
    """(pi_J^* c)_w = c at the representative of W_J w."""
    J = tuple(sorted(J))
    if not J:
        return Section(model, dict(coset_values))
    out = {}
    for w in model.window:
        rep = left_coset_representative(model.datum, w, J)
        if rep in coset_values:
            out[w] = coset_values[rep]
    return Section(model, out)


@dataclass(frozen=True)
class FixedPointMap:
    """A map of fixed-point sets with tangent weights at each point.

    ``target_of`` sends each source vertex to a window element.  The Euler
    class at a vertex is the product of ``y`` over its listed weights.
    """

    source: tuple
    target_of: dict
    source_weights: dict
    target_weights: dict


def schubert_inclusion(model, w):
    """The inclusion of the moment graph of X_w into that of G/B."""
    datum = model.datum
    roots = model.roots_with_reflections()
    source = tuple(v for v in model.window if datum.bruhat_leq(v, w))
    src = {}
    for v in source:
        src[v] = [tuple(-c for c in beta) for beta, refl in roots
                  if datum.bruhat_leq(datum.mul(v, refl), w)]
    tgt = {v: [tuple(-c for c in beta) for beta, _ in roots] for v in model.window}
    return FixedPointMap(source, {v: v for v in source}, src, tgt)


def identity_map(model):
    roots = model.roots_with_reflections()
    weights = {v: [tuple(-c for c in beta) for beta, _ in roots] for v in model.window}
    return FixedPointMap(tuple(model.window), {v: v for v in model.window}, weights, dict(weights))


def euler_pushforward(model, fmap, gamma):
    """(f_! gamma)_v = sum over w -> v of gamma_w * e_target(v) / e_source(w).

    ``gamma`` maps source vertices to series.  Weights common to both Euler
    classes cancel symbolically; the remaining quotient is an exact series
    division and raises :class:`NotDivisible` naming the vertex.
    """
    out = {}
    for w in fmap.source:
        g = gamma.get(w)
        if g is None or g.is_zero():
            continue
        v = fmap.target_of[w]
        num = list(fmap.target_weights[v])
        den = []
        for weight in fmap.source_weights[w]:
            if weight in num:
                num.remove(weight)
            else:
                den.append(weight)
        value = g
        for weight in num:
            value = value * model.y(weight)
        for weight in den:
            try:
                value = value.div_exact(model.y(weight))
            except NotDivisible as exc:
                raise NotDivisible(exc.degree, f"Euler ratio does not divide at vertex {w}") from exc
        out[v] = out[v] + value if v in out else value
    return Section(model, out)


def iota_change_of_groups(model, J, tensor):
    """sum over w in W_J of w(f / y_J) (x) g, with y_J = prod y_{-alpha}, alpha in R_J^+."""
    J = tuple(sorted(J))
    if not J:
        return tensor
    roots = _x_J_roots(model, J)
    group = model.datum.parabolic_subgroup(J)
    pairs = []
    for f, g in tensor.pairs:
        total = None
        for w in group:
            num = model.act_on_series(w, f)
            dens = []
            for alpha in roots:
                moved = model.datum.act(w, tuple(-c for c in alpha))
                dens.append((moved, model.y(moved)))
            term = LocalizedElement(num, tuple(dens))
            total = term if total is None else total + term
        pairs.append((total.to_series(), g))
    return TensorElement(tuple(pairs))

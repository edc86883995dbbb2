"""The nil affine Hecke algebra in rank 2, acting on moment-graph sections.

An operator is a finite sum ``sum_w c_w t_w`` with localized coefficients in
the generators x_1, x_2 (Chern classes x_lambda of the lattice basis),
always stored with the coefficients on the left.  Moving a coefficient
across ``t_w`` uses ``t_w c = (w c) t_w``, where w acts on x_lambda by
x_lambda -> x_{w lambda}; denominators are keyed by their weights, so the
action on them is a relabelling.

The push-pull operators are A_i = (1 + t_{s_i}) (1 / x_{-a_i}), whose normal
form is ``1/x_{-a_i} + (1/x_{a_i}) t_{s_i}``.
"""

from __future__ import annotations

from .algebra import EXACT, LocalizedElement, NotDivisible, TruncatedSeries
from .momentgraph import MomentGraphModel, Section, WindowError

__all__ = [
    "HeckeOperator",
    "act_localized",
    "op_multiply",
    "a_word_to_t",
    "t_word_to_a",
    "a_expansion_to_operator",
    "op_apply_to_section",
    "verify_operator_identities",
    "verify_section8",
]


def _neg(weight):
    return tuple(-c for c in weight)


def act_localized(model, w, c):
    """w acting on a localized coefficient (keys of denominators must be weights)."""
    if w.is_identity:
        return c
    num = model.act_on_series(w, c.numerator)
    dens = []
    for key, _ in c.denominators:
        moved = model.datum.act(w, key)
        dens.append((moved, model.y(moved)))
    return LocalizedElement(num, tuple(dens))


def _invert(c, prec):
    """1 / c for a coefficient whose numerator is a unit."""
    num = c.numerator
    if not num.constant_term():
        raise NotDivisible(0, "numerator is not invertible")
    prec = min(prec, num.prec)
    out = TruncatedSeries.constant(1, num.n, prec).div_exact(num.truncate(prec))
    for _, d in c.denominators:
        out = out * d
    return LocalizedElement.of(out)


class HeckeOperator:
    """``sum_w c_w t_w`` with localized left coefficients."""

    __slots__ = ("model", "terms")

    def __init__(self, model, terms=None):
        self.model = model
        clean = {}
        for w, c in (terms or {}).items():
            if isinstance(w, str):
                w = model.datum.element(w)
            if not model.contains(w):
                raise WindowError(f"t_{w} lies outside the window")
            if isinstance(c, TruncatedSeries):
                c = LocalizedElement.of(c)
            clean[w] = c
        self.terms = clean

    # constructors

    @classmethod
    def identity(cls, model):
        return cls(model, {model.datum.identity: LocalizedElement.of(model.one())})

    @classmethod
    def coefficient(cls, model, c):
        if isinstance(c, TruncatedSeries):
            c = LocalizedElement.of(c)
        return cls(model, {model.datum.identity: c})

    @classmethod
    def x(cls, model, weight):
        """Multiplication by x_weight."""
        return cls.coefficient(model, model.y(weight))

    @classmethod
    def t(cls, model, w):
        if isinstance(w, str):
            w = model.datum.element(w)
        return cls(model, {w: LocalizedElement.of(model.one())})

    @classmethod
    def A(cls, model, i):
        alpha = model.datum.alpha(i)
        one = LocalizedElement.of(model.one())
        return cls(model, {
            model.datum.identity: one.divide_by(_neg(alpha), model.y(_neg(alpha))),
            model.datum.s(i): one.divide_by(alpha, model.y(alpha)),
        })

    # arithmetic

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return HeckeOperator(self.model, out)

    def __neg__(self):
        return HeckeOperator(self.model, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HeckeOperator):
            return op_multiply(self, other)
        return op_multiply(self, HeckeOperator.coefficient(self.model, other))

    def __rmul__(self, other):
        return op_multiply(HeckeOperator.coefficient(self.model, other), self)

    def first_difference(self, other):
        """Lowest degree at which some coefficient differs, or None."""
        worst = None
        zero = LocalizedElement.of(self.model.zero())
        for w in set(self.terms) | set(other.terms):
            d = self.terms.get(w, zero).first_difference(other.terms.get(w, zero))
            if d is not None and (worst is None or d < worst):
                worst = d
        return worst

    def __eq__(self, other):
        if not isinstance(other, HeckeOperator):
            return NotImplemented
        return self.first_difference(other) is None

    __hash__ = None

    def support(self):
        return sorted(w for w, c in self.terms.items() if not c.is_zero())

    @property
    def precision(self):
        precs = [c.precision for c in self.terms.values()]
        return min(precs) if precs else EXACT

    def __repr__(self):
        parts = [f"{c!r} t_{w}" for w, c in sorted(self.terms.items())]
        return "HeckeOperator(" + " + ".join(parts) + ")"


def op_multiply(a, b):
    """(c t_u)(d t_v) = c (u d) t_{uv}, extended bilinearly."""
    model = a.model
    datum = model.datum
    out = {}
    for u, c in a.terms.items():
        for v, d in b.terms.items():
            uv = datum.mul(u, v)
            if not model.contains(uv):
                raise WindowError(f"product t_{u} t_{v} leaves the window")
            term = c * act_localized(model, u, d)
            out[uv] = out[uv] + term if uv in out else term
    return HeckeOperator(model, out)


def a_word_to_t(model, word):
    """A_{i1} ... A_{ik} in t-normal form."""
    out = HeckeOperator.identity(model)
    for i in word:
        out = out * HeckeOperator.A(model, i)
    return out


def _chosen_words(model, top_word):
    """One reduced A-word per group element, using ``top_word`` for its own element."""
    datum = model.datum
    words = {w: w.word for w in model.window}
    if top_word:
        words[datum.element(top_word)] = tuple(top_word)
    return words


def t_word_to_a(model, word, side="left"):
    """Expand t_{s_i1} ... t_{s_ik} in products of A's.

    ``side="left"`` gives ``sum c_a A_a`` and ``side="right"`` gives
    ``sum A_a c_a``.  Returns a dict from A-words (tuples) to coefficients.
    The result is converted back and compared with the t-word; a mismatch
    raises RuntimeError.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    datum = model.datum
    target = HeckeOperator.identity(model)
    for i in word:
        target = target * HeckeOperator.t(model, datum.s(i))
    reduced = len(datum.element(word).word) == len(word)
    words = _chosen_words(model, tuple(word) if reduced else ())
    residual = target
    out = {}
    prec = model.prec
    while True:
        support = residual.support()
        if not support:
            break
        top = max(w.length for w in support)
        for w in [u for u in support if u.length == top]:
            a = words[w]
            lead = a_word_to_t(model, a).terms[w]
            ratio = residual.terms[w] * _invert(lead, prec)
            if side == "left":
                c = ratio
                piece = HeckeOperator.coefficient(model, c) * a_word_to_t(model, a)
            else:
                c = act_localized(model, datum.inverse(w), ratio)
                piece = a_word_to_t(model, a) * HeckeOperator.coefficient(model, c)
            out[a] = out[a] + c if a in out else c
            residual = residual - piece
        if any(u.length >= top for u in residual.support()):
            raise RuntimeError("t-to-A expansion did not reduce the leading term")
    back = a_expansion_to_operator(model, out, side)
    if back.first_difference(target) is not None:
        raise RuntimeError(f"t-to-A expansion of {word} failed its round trip")
    return out


def a_expansion_to_operator(model, expansion, side="left"):
    """Rebuild ``sum c_a A_a`` (or ``sum A_a c_a``) in t-normal form."""
    total = HeckeOperator(model, {})
    for a, c in expansion.items():
        op = a_word_to_t(model, a)
        coeff = HeckeOperator.coefficient(model, c)
        total = total + (coeff * op if side == "left" else op * coeff)
    return total


def op_apply_to_section(op, section):
    """(sum c_w t_w) s at vertex z: sum_w c_w(x -> y_{z^-1 .}) s_{w^-1 z}."""
    model = section.model
    datum = model.datum
    out = {}
    for z in model.window:
        zinv = datum.inverse(z)
        total = None
        for w, c in op.terms.items():
            src = datum.mul(datum.inverse(w), z)
            if not model.contains(src):
                if src in section.values:
                    raise WindowError(f"needs vertex {src}")
                continue
            value = section.values.get(src)
            if value is None or value.is_zero():
                continue
            term = act_localized(model, zinv, c) * value
            total = term if total is None else total + term
        if total is not None:
            out[z] = total.to_series()
    return Section(model, out)


# the identity catalogue


class _Words:
    """Shorthand for the weights and operators used by the displayed identities."""

    def __init__(self, model):
        self.m = model
        self.d = model.datum

    def root(self, word, i):
        """s_word a_i as a weight."""
        return self.d.act(self.d.element(word), self.d.alpha(i))

    def x(self, weight):
        return HeckeOperator.x(self.m, weight)

    def inv(self, *weights):
        out = LocalizedElement.of(self.m.one())
        for w in weights:
            out = out.divide_by(w, self.m.y(w))
        return HeckeOperator.coefficient(self.m, out)

    def ratio(self, weight):
        """x_weight / x_{-weight}."""
        return self.x(weight) * self.inv(_neg(weight))

    def xm(self, weight):
        return self.x(_neg(weight))

    def A(self, *word):
        return a_word_to_t(self.m, word)

    def t(self, *word):
        out = HeckeOperator.identity(self.m)
        for i in word:
            out = out * HeckeOperator.t(self.m, self.d.s(i))
        return out

    def one(self):
        return HeckeOperator.identity(self.m)

    def c(self, series):
        return HeckeOperator.coefficient(self.m, series)


def _displays(W):
    """(name, lhs, rhs) for the expansion displays; lhs and rhs are thunks."""
    r = W.root
    a1, a2 = r("", 1), r("", 2)
    s2a1, s1a2 = r("2", 1), r("1", 2)
    s1s2a1, s2s1a2 = r("12", 1), r("21", 2)
    s2s1s2a1 = r("212", 1)
    x, xm, q, inv, A, t, one = W.x, W.xm, W.ratio, W.inv, W.A, W.t, W.one
    out = []
    out.append(("t_s1 = x_a1 A1 - x_a1/x_-a1 (left)", lambda: t(1),
                lambda: x(a1) * A(1) - q(a1)))
    out.append(("t_s2 t_s1 (left)", lambda: t(2, 1), lambda: (
        x(s2a1) * x(a2) * A(2, 1) - x(s2a1) * q(a2) * A(1)
        - q(s2a1) * x(a2) * A(2) + q(s2a1) * q(a2))))
    out.append(("t_s1 t_s2 t_s1 (left)", lambda: t(1, 2, 1), lambda: (
        x(s1s2a1) * x(s1a2) * x(a1) * A(1, 2, 1)
        - x(s1s2a1) * x(s1a2) * q(a1) * A(2, 1)
        - q(s1s2a1) * x(s1a2) * x(a1) * A(1, 2)
        + q(s2s1a2) * x(s2a1) * q(a2) * A(1)
        + q(s1s2a1) * x(s1a2) * q(a1) * A(2)
        - q(s1s2a1) * q(s1a2) * q(a1)
        + (q(s1a2) * q(s1s2a1) * x(a1) - q(s1a2) * x(s1s2a1) - q(s2s1a2) * x(s2a1) * q(a2)) * A(1))))
    # printed under the label t_s1 t_s2 t_s1 t_s2; its leading term A2A1A2A1 identifies it as t_s2 t_s1 t_s2 t_s1
    out.append(("t_s2 t_s1 t_s2 t_s1 (left)", lambda: t(2, 1, 2, 1), lambda: (
        x(s2s1s2a1) * x(s2s1a2) * x(s2a1) * x(a2) * A(2, 1, 2, 1)
        - x(s2s1s2a1) * x(s2s1a2) * x(s2a1) * q(a2) * A(1, 2, 1)
        - q(s2s1s2a1) * x(s2s1a2) * x(s2a1) * x(a2) * A(2, 1, 2)
        + q(s2s1s2a1) * x(s2s1a2) * x(s2a1) * q(a2) * A(1, 2)
        + (q(s2s1s2a1) * q(s2s1a2) * x(s2a1) * x(a2) - x(s2s1s2a1) * q(s2s1a2) * x(a2)
           - x(s2s1s2a1) * x(s2s1a2) * q(s2a1)) * A(2, 1)
        - (q(s2s1s2a1) * q(s2s1a2) * x(s2a1) - x(s2s1s2a1) * q(s2s1a2)) * q(a2) * A(1)
        + (q(s2s1s2a1) * x(s2s1a2) * q(s2a1) - q(s2s1s2a1) * q(s2s1a2) * q(s2a1) * x(a2)) * A(2)
        + q(s2s1s2a1) * q(s2s1a2) * q(s2a1) * q(a2))))
    out.append(("t_s1 = A1 x_-a1 - 1 (right)", lambda: t(1), lambda: A(1) * xm(a1) - one()))
    out.append(("t_s1 t_s2 (right)", lambda: t(1, 2), lambda: (
        A(1, 2) * xm(a2) * xm(s2a1) - A(1) * xm(s2a1) - A(2) * xm(a2) + one())))
    out.append(("t_s1 t_s2 t_s1 (right)", lambda: t(1, 2, 1), lambda: (
        A(1, 2, 1) * xm(a1) * xm(s1a2) * xm(s1s2a1) - A(1, 2) * xm(s1a2) * xm(s1s2a1)
        - A(2, 1) * xm(a1) * xm(s1a2) + A(1) * xm(s2a1) + A(2) * xm(s1a2) - one()
        + A(1) * (xm(a1) - xm(s2a1) - xm(a1) * inv(a1) * xm(s1s2a1)))))
    out.append(("t_s1 t_s2 t_s1 t_s2 (right)", lambda: t(1, 2, 1, 2), lambda: (
        A(1, 2, 1, 2) * xm(a2) * xm(s2a1) * xm(s2s1a2) * xm(s2s1s2a1)
        - A(1, 2, 1) * xm(s2a1) * xm(s2s1a2) * xm(s2s1s2a1)
        - A(2, 1, 2) * xm(a2) * xm(s2a1) * xm(s2s1a2)
        + A(1, 2) * (-(xm(a2) * inv(a2) * xm(s2s1a2) * xm(s2s1s2a1))
                     - xm(a2) * xm(s2a1) * inv(s2a1) * xm(s2s1s2a1) + xm(a2) * xm(s2a1))
        + A(2, 1) * xm(s2a1) * xm(s2s1a2)
        - A(1) * (xm(s2a1) - xm(s2a1) * inv(s2a1) * xm(s2s1s2a1))
        - A(2) * (xm(a2) - xm(a2) * inv(a2) * xm(s2s1a2)) + one())))
    n = _neg
    out.append(("A1 = (t_s1 + 1)/x_-a1", lambda: A(1), lambda: (t(1) + one()) * inv(n(a1))))
    out.append(("A1 A2 in t", lambda: A(1, 2), lambda: (t(1) + one()) * (
        t(2) * inv(n(a2), n(s2a1)) + inv(n(a1), n(a2)))))
    s1a1, s2a2 = r("1", 1), r("2", 2)
    s2s1a1 = r("21", 1)
    # the constant term carries x_{-s1 a2}; printed with x_{-s2 a1}, which agrees only in A2
    out.append(("A1 A2 A1 in t", lambda: A(1, 2, 1), lambda: (t(1) + one()) * (
        t(2, 1) * inv(n(a1), n(s1a2), n(s1s2a1)) + t(2) * inv(n(a1), n(a2), n(s2a1))
        + inv(n(a1)) * (inv(n(a1), n(a2)) + inv(n(s1a1), n(s1a2))))))
    out.append(("A1 A2 A1 A2 in t", lambda: A(1, 2, 1, 2), lambda: (t(1) + one()) * (
        t(2, 1, 2) * inv(n(a2), n(s2a1), n(s2s1a2), n(s2s1s2a1))
        + t(2, 1) * inv(n(a2), n(a1), n(s1a2), n(s1s2a1))
        + t(2) * inv(n(a2), n(s2a1)) * (inv(n(a2), n(a1)) + inv(n(s2a1), n(s2a2))
                                        + inv(n(s2s1a2), n(s2s1a1)))
        + inv(n(a1), n(a2)) * (inv(n(a2), n(a1)) + inv(n(s2a1), n(s2a2)) + inv(n(s1a2), n(s1a1))))))
    return out


def _operator_entry(name, lhs, rhs, prec):
    try:
        left, right = lhs(), rhs()
        diff = left.first_difference(right)
    except (NotDivisible, WindowError) as exc:
        return {"identity": name, "status": "fail", "precision": prec,
                "first_fail_degree": getattr(exc, "degree", None)}
    return {"identity": name, "status": "pass" if diff is None else "fail",
            "precision": prec, "first_fail_degree": diff}


def verify_operator_identities(model, displays=True):
    """Check the operator identities of the rank-2 BGG calculus.

    Covers A_i^2 = (1/x_{-a} + 1/x_a) A_i = A_i (1/x_{-a} + 1/x_a) = A_i p(x_a, x_{-a}),
    t_{s_i} A_i = A_i, A_i t_{s_i} = A_i x_{-a}/x_a, the commutation
    f A_i = A_i (s_i f) + (f - s_i f)/x_{-a_i} for f in a probe set, the
    t/A expansion displays up to length 4, and the braid deviation in A2.
    The probe set is the two lattice generators x_{b1}, x_{b2} and x_{a1} x_{a2};
    the identity is additive and multiplicative in f over s_i-invariants, so
    generators are the meaningful cases.
    """
    W = _Words(model)
    d = model.datum
    prec = model.prec
    report = []
    for i in (1, 2):
        alpha = d.alpha(i)
        Ai = W.A(i)
        pair = W.inv(_neg(alpha)) + W.inv(alpha)
        p_op = W.c(model.law.p_of(model.y(alpha), model.y(_neg(alpha))))
        report.append(_operator_entry(f"A{i}^2 = (1/x_-a{i} + 1/x_a{i}) A{i}",
                                      lambda: Ai * Ai, lambda: pair * Ai, prec))
        report.append(_operator_entry(f"A{i}^2 = A{i} (1/x_-a{i} + 1/x_a{i})",
                                      lambda: Ai * Ai, lambda: Ai * pair, prec))
        report.append(_operator_entry(f"A{i}^2 = A{i} p(x_a{i}, x_-a{i})",
                                      lambda: Ai * Ai, lambda: Ai * p_op, prec))
        report.append(_operator_entry(f"t_s{i} A{i} = A{i}", lambda: W.t(i) * Ai, lambda: Ai, prec))
        report.append(_operator_entry(f"A{i} t_s{i} = A{i} x_-a{i}/x_a{i}", lambda: Ai * W.t(i),
                                      lambda: Ai * W.xm(alpha) * W.inv(alpha), prec))
        si = d.s(i)
        probes = {
            "x_b1": model.y((1, 0)),
            "x_b2": model.y((0, 1)),
            "x_a1 x_a2": model.y(d.alpha(1)) * model.y(d.alpha(2)),
        }
        for label, f in probes.items():
            sf = model.act_on_series(si, f)
            report.append(_operator_entry(
                f"{label} A{i} = A{i} s{i}({label}) + ({label} - s{i}{label})/x_-a{i}",
                lambda: W.c(f) * Ai,
                lambda: Ai * W.c(sf) + W.c(f - sf) * W.inv(_neg(alpha)), prec))
    if displays:
        for name, lhs, rhs in _displays(W):
            report.append(_operator_entry(name, lhs, rhs, prec))
    if d.name == "A2":
        a1, a2 = d.alpha(1), d.alpha(2)
        a3 = tuple(u + v for u, v in zip(a1, a2))
        n = _neg
        left = lambda: W.A(2, 1, 2) - (W.inv(n(a2), n(a1)) - W.inv(n(a1), n(a3)) + W.inv(a2, n(a3))) * W.A(2)
        right = lambda: W.A(1, 2, 1) - (W.inv(n(a1), n(a2)) - W.inv(n(a2), n(a3)) + W.inv(a1, n(a3))) * W.A(1)
        report.append(_operator_entry("A2 braid deviation", left, right, prec))
    return report


# older name, kept for callers of the original interface
verify_section8 = verify_operator_identities

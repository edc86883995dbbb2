"""Formal group laws, their inverse and n-series, and first Chern classes.

Three laws are available: ``additive`` (x + y), ``multiplicative``
(x + y - xy) and ``universal``.  The universal law is built rationally from
a generic logarithm ``log x = x + m1 x^2 + m2 x^3 + ...`` as
``F(x, y) = exp(log x + log y)``, where ``exp`` is the compositional inverse
of ``log``.  Every law carries the series ``p`` defined by
``F(x, y) = x + y - p(x, y) x y``.
"""

from __future__ import annotations

import threading

from .algebra import QQ, NotDivisible, TruncatedSeries, symbol

__all__ = [
    "KINDS",
    "FormalGroupLaw",
    "fgl_build",
    "fgl_inverse_series",
    "fgl_n_series",
    "chern_class",
    "verify_fgl_identities",
    "verify_fgl_axioms",
    "multiplicative_log_assignment",
]

KINDS = ("additive", "multiplicative", "universal")


def _x(prec):
    return TruncatedSeries.gen(0, 1, prec)


def _xy(prec):
    return TruncatedSeries.gen(0, 2, prec), TruncatedSeries.gen(1, 2, prec)


def compositional_inverse(f):
    """Series g with f(g(x)) = x, for one-variable f = x + O(x^2)."""
    prec = f.prec
    x = _x(prec)
    g = x
    for _ in range(prec):
        err = f.substitute([g]) - x
        if err.is_zero():
            break
        g = g - err
    return g


class FormalGroupLaw:
    """A one-dimensional commutative formal group law truncated at ``order``.

    Attributes ``F`` and ``p`` are two-variable series, ``inv`` is the
    one-variable inverse series.  ``symbols`` is the number of logarithm
    coefficients m_k in use (zero unless the law is universal).
    """

    def __init__(self, kind, order, symbols=None):
        if kind not in KINDS:
            raise ValueError(f"unknown formal group law {kind!r}; choose from {', '.join(KINDS)}")
        if order < 2:
            raise ValueError("order must be at least 2")
        self.kind = kind
        self.order = order
        x, y = _xy(order)
        if kind == "additive":
            self.symbols = 0
            self.log = _x(order)
            self.F = x + y
        elif kind == "multiplicative":
            self.symbols = 0
            self.log = TruncatedSeries(1, order, {(k,): QQ(1, k) for k in range(1, order)})
            self.F = x + y - x * y
        else:
            self.symbols = order - 1 if symbols is None else symbols
            if self.symbols < order - 2:
                raise ValueError("the universal law needs at least order-2 logarithm symbols")
            terms = {(1,): QQ(1)}
            for k in range(1, order - 1):
                terms[(k + 1,)] = symbol(k)
            self.log = TruncatedSeries(1, order, terms)
            exp = compositional_inverse(self.log)
            logx = self.log.substitute([x])
            logy = self.log.substitute([y])
            self.F = exp.substitute([logx + logy])
        self.inv = fgl_inverse_series(self)
        self.p = (x + y - self.F).div_exact(x * y)
        self._memo = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"FormalGroupLaw({self.kind!r}, order={self.order})"

    def coefficient(self, i, j):
        """The coefficient a_ij of x^i y^j in F."""
        return self.F.terms.get((i, j), QQ(0))

    def apply(self, a, b):
        """F(a, b) for series a, b without constant terms."""
        return self.F.substitute([a, b])

    def p_of(self, a, b):
        """p(a, b) for series a, b without constant terms."""
        return self.p.substitute([a, b])

    def inverse_of(self, a):
        return self.inv.substitute([a])

    def n_series_of(self, k, a):
        return fgl_n_series(self, k).substitute([a])

    def chern(self, weight):
        """Chern class y_weight in generators y_i = y_{b_i} (memoized)."""
        weight = tuple(int(c) for c in weight)
        hit = self._memo.get(weight)
        if hit is not None:
            return hit
        value = chern_class(self, weight)
        with self._lock:
            self._memo.setdefault(weight, value)
        return self._memo[weight]

    def to_json(self):
        return {
            "kind": self.kind,
            "order": self.order,
            "F": self.F.to_json(),
            "inv": self.inv.to_json(),
            "p": self.p.to_json(),
        }


def fgl_build(kind, order, symbols=None):
    return FormalGroupLaw(kind, order, symbols)


def fgl_inverse_series(law):
    """The series i(x) with F(x, i(x)) = 0, solved one degree at a time."""
    prec = law.F.prec
    x = _x(prec)
    inv = -x
    for _ in range(prec):
        err = law.F.substitute([x, inv])
        if err.is_zero():
            break
        inv = inv - err
    return inv


def fgl_n_series(law, n):
    """[n](x): [0] = 0, [n+1](x) = F(x, [n](x)), [-n](x) = i([n](x))."""
    memo = law.__dict__.setdefault("_nseries", {})
    if n in memo:
        return memo[n]
    prec = law.F.prec
    x = _x(prec)
    if n == 0:
        out = TruncatedSeries.zero(1, prec)
    elif n > 0:
        out = x
        for _ in range(n - 1):
            out = law.F.substitute([x, out])
    else:
        out = law.inv.substitute([fgl_n_series(law, -n)])
    memo[n] = out
    return out


def chern_class(law, weight):
    """y_weight as the F-sum of [c_i](y_i), where weight = sum c_i b_i."""
    n = len(weight)
    prec = law.order
    total = TruncatedSeries.zero(n, prec)
    for i, c in enumerate(weight):
        if c == 0:
            continue
        yi = TruncatedSeries.gen(i, n, prec)
        term = fgl_n_series(law, c).substitute([yi])
        total = term if total.is_zero() else law.F.substitute([total, term])
    return total


def multiplicative_log_assignment(count):
    """m_k = 1/(k+1): the logarithm -log(1 - x) of the law x + y - xy."""
    return {k: QQ(1, k + 1) for k in range(1, count + 1)}


def _sum_or(f, lo, hi, zero):
    """sum_{j=lo}^{hi} f(j), with sum_{lo}^{hi} = -sum_{hi+1}^{lo-1} when hi < lo - 1."""
    if hi >= lo:
        total = f(lo)
        for j in range(lo + 1, hi + 1):
            total = total + f(j)
        return total
    if hi == lo - 1:
        return zero
    return -_sum_or(f, hi + 1, lo - 1, zero)


def _entry(name, lhs, rhs):
    try:
        diff = lhs.first_difference(rhs)
        prec = min(lhs.precision if hasattr(lhs, "precision") else lhs.prec,
                   rhs.precision if hasattr(rhs, "precision") else rhs.prec)
    except NotDivisible as exc:
        return {"identity": name, "status": "fail", "precision": None, "first_fail_degree": exc.degree}
    return {
        "identity": name,
        "status": "pass" if diff is None else "fail",
        "precision": prec,
        "first_fail_degree": diff,
    }


def verify_fgl_identities(law, max_multiple=4, max_pairing=4, alpha=(1, 0), lam=(0, 1)):
    """Check the standard Chern-class identities for ``law``.

    ``alpha`` and ``lam`` are weights in a rank-2 lattice.  The checks are:
    the two expressions relating y_alpha and y_{-alpha}; both forms of
    y_{-l alpha} / y_{-alpha} for l = 1..max_multiple; and the divided
    difference (y_{lam - c alpha} - y_lam) / y_{-alpha} for
    c = 0..max_pairing (the reflection of lam when <lam, alpha^v> = c).
    Returns a list of report entries.
    """
    from .algebra import LocalizedElement

    def y(w):
        return law.chern(w)

    def scaled(k, w):
        return tuple(k * c for c in w)

    prec = law.order
    n = len(alpha)
    one = TruncatedSeries.constant(1, n, prec)
    zero = TruncatedSeries.zero(n, prec)
    ya, yma = y(alpha), y(scaled(-1, alpha))
    report = []

    lhs = ya
    rhs = (-yma).div_exact(one - law.p_of(ya, yma) * yma)
    report.append(_entry("y_a = -y_-a / (1 - p(y_a, y_-a) y_-a)", lhs, rhs))

    lhs = LocalizedElement.of(one).divide_by("-a", yma) + LocalizedElement.of(one).divide_by("a", ya)
    rhs = LocalizedElement.of(law.p_of(ya, yma))
    report.append(_entry("1/y_-a + 1/y_a = p(y_a, y_-a)", lhs, rhs))

    for ell in range(1, max_multiple + 1):
        quotient = y(scaled(-ell, alpha)).div_exact(yma)

        def pterm(j):
            yj = y(scaled(-j, alpha))
            return law.p_of(yma, yj) * yj

        first = _sum_or(pterm, 1, ell - 1, zero)
        form1 = one.scale(QQ(ell)) - first
        form2 = one + _sum_or(lambda j: one - pterm(j), 1, ell - 1, zero)
        report.append(_entry(f"y_-{ell}a / y_-a = {ell} - sum p y", quotient, form1))
        report.append(_entry(f"y_-{ell}a / y_-a = 1 + sum (1 - p y)", quotient, form2))

    ylam = y(lam)
    for c in range(0, max_pairing + 1):
        reflected = tuple(l - c * a for l, a in zip(lam, alpha))
        lhs = (y(reflected) - ylam).div_exact(yma)
        ymc = y(scaled(-c, alpha))
        head = one - law.p_of(ylam, ymc) * ylam

        def factor(j):
            yj = y(scaled(-j, alpha))
            return one - law.p_of(yma, yj) * yj

        rhs = head * (one + _sum_or(factor, 1, c - 1, zero))
        report.append(_entry(f"divided difference, pairing {c}", lhs, rhs))

    return report


def verify_fgl_axioms(law):
    """Unit, commutativity, associativity, inverse and the defining relation of p."""
    prec = law.order
    x, y = _xy(prec)
    F = law.F
    report = []
    unit = TruncatedSeries(2, prec, {e: c for e, c in F.terms.items() if e[1] == 0})
    report.append(_entry("F(x, 0) = x", unit, x))
    report.append(_entry("F(x, y) = F(y, x)", F, F.substitute([y, x])))
    a, b, c = (TruncatedSeries.gen(i, 3, prec) for i in range(3))
    left = F.substitute([F.substitute([a, b]), c])
    right = F.substitute([a, F.substitute([b, c])])
    report.append(_entry("F(F(x, y), z) = F(x, F(y, z))", left, right))
    t = _x(prec)
    report.append(_entry("F(x, inv(x)) = 0", F.substitute([t, law.inv]), TruncatedSeries.zero(1, prec)))
    report.append(_entry("F(x, y) = x + y - p(x, y) x y", F, x + y - law.p * x * y))
    return report

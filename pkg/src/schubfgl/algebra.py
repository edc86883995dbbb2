"""Exact coefficients and degree-truncated multivariate power series.

Coefficients are either rationals (``gmpy2.mpq``) or polynomials over the
rationals in the symbols ``m1, m2, ...`` (class :class:`Poly`).  A polynomial
whose only monomial is the constant one is always collapsed to a plain
rational, so equality of coefficients is syntactic.

A :class:`TruncatedSeries` in ``n`` generators stores the monomials of total
degree below ``prec``; everything of degree ``>= prec`` is unknown.  The
precision of a result is computed from the precisions *and valuations* of
the operands, so that a product of two series that both start in high
degree keeps its relative accuracy:

==========  =====================================================
operation   result precision
==========  =====================================================
a +- b      min(Pa, Pb)
a * b       min(Pa + vb, Pb + va)
f / g       min(Pf - k, Pg - 2k + vf)   (k = valuation of g)
f(g_1..)    min(Pf * v, min_i(P_i + (max(vf, 1) - 1) * v))
==========  =====================================================

Here ``v*`` is the valuation (lowest degree present, or the precision for a
zero series) and ``v`` is the smallest valuation among substituted images.

>>> y1, y2 = TruncatedSeries.gen(0, 2, 5), TruncatedSeries.gen(1, 2, 5)
>>> ((y1 + y2) * (y1 - y2)).div_exact(y1 - y2) == y1 + y2
True
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import zip_longest
from operator import add

from gmpy2 import mpq

__all__ = [
    "QQ",
    "EXACT",
    "Poly",
    "symbol",
    "parse_coefficient",
    "format_coefficient",
    "NotDivisible",
    "TruncatedSeries",
    "LocalizedElement",
]

QQ = mpq
# precision used for values known exactly (absent section entries, monomials)
EXACT = 10**9
_ZERO = mpq(0)
_ONE = mpq(1)


def _strip(mono):
    i = len(mono)
    while i and mono[i - 1] == 0:
        i -= 1
    return mono if i == len(mono) else mono[:i]


def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    if len(a) == len(b):
        return _strip(tuple(map(add, a, b)))
    return tuple(x + y for x, y in zip_longest(a, b, fillvalue=0))


def _canon(terms):
    """Collapse a monomial dict to a rational when it is constant."""
    if not terms:
        return _ZERO
    if len(terms) == 1 and () in terms:
        return terms[()]
    return Poly(terms)


class Poly:
    """Polynomial over the rationals in m1, m2, ...

    Monomials are exponent tuples with trailing zeros stripped, so ``(0, 2)``
    is ``m2^2``.  Instances never represent constants (see :func:`_canon`).
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms):
        self.terms = terms
        self._hash = None

    @staticmethod
    def _coerce(x):
        if isinstance(x, Poly):
            return x.terms
        if x == 0:
            return {}
        return {(): mpq(x)}

    def __add__(self, other):
        if not isinstance(other, (Poly, int)) and not _is_rational(other):
            return NotImplemented
        out = dict(self.terms)
        for mono, c in Poly._coerce(other).items():
            s = out.get(mono, _ZERO) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return _canon(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Poly):
            out = {}
            for ma, ca in self.terms.items():
                for mb, cb in other.terms.items():
                    mono = _mono_mul(ma, mb)
                    s = out.get(mono, _ZERO) + ca * cb
                    if s:
                        out[mono] = s
                    else:
                        del out[mono]
            return _canon(out)
        if not isinstance(other, int) and not _is_rational(other):
            return NotImplemented
        if other == 0:
            return _ZERO
        other = mpq(other)
        return Poly({m: c * other for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            raise ZeroDivisionError("division by a non-constant polynomial coefficient")
        return self * (_ONE / mpq(other))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        return False

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return True

    def symbols(self):
        return {i + 1 for mono in self.terms for i, e in enumerate(mono) if e}

    def evaluate(self, assignment):
        """Substitute rationals for the symbols; ``assignment`` maps k -> value of m_k."""
        missing = sorted(self.symbols() - set(assignment))
        if missing:
            raise KeyError("unassigned symbols: " + ", ".join(f"m{k}" for k in missing))
        total = _ZERO
        for mono, c in self.terms.items():
            term = c
            for i, e in enumerate(mono):
                if e:
                    term *= mpq(assignment[i + 1]) ** e
            total += term
        return total

    def __repr__(self):
        return format_coefficient(self)


def _is_rational(x):
    return type(x) is type(_ZERO) or isinstance(x, int)


def symbol(k):
    """The logarithm coefficient m_k as a polynomial coefficient."""
    if k < 1:
        raise ValueError("symbols are numbered from 1")
    return Poly({(0,) * (k - 1) + (1,): _ONE})


def format_coefficient(c):
    """Serialize a coefficient: ``p/q`` for rationals, ``c*m1^a*m2^b+...`` otherwise."""
    if not isinstance(c, Poly):
        return str(mpq(c))
    parts = []
    for mono in sorted(c.terms):
        factors = [str(c.terms[mono])]
        for i, e in enumerate(mono):
            if e == 1:
                factors.append(f"m{i + 1}")
            elif e:
                factors.append(f"m{i + 1}^{e}")
        parts.append("*".join(factors))
    return "+".join(parts)


_FACTOR = re.compile(r"m(\d+)(?:\^(\d+))?$")


def parse_coefficient(text):
    """Inverse of :func:`format_coefficient`."""
    terms = {}
    for part in text.split("+"):
        pieces = part.split("*")
        coeff = mpq(pieces[0])
        mono = []
        for factor in pieces[1:]:
            match = _FACTOR.match(factor)
            if match is None:
                raise ValueError(f"bad monomial factor {factor!r}")
            k, e = int(match.group(1)), int(match.group(2) or 1)
            if len(mono) < k:
                mono.extend([0] * (k - len(mono)))
            mono[k - 1] += e
        mono = _strip(tuple(mono))
        s = terms.get(mono, _ZERO) + coeff
        if s:
            terms[mono] = s
        else:
            terms.pop(mono, None)
    return _canon(terms)


def _coefficient_eq(a, b):
    if isinstance(a, Poly) or isinstance(b, Poly):
        return isinstance(a, Poly) and isinstance(b, Poly) and a.terms == b.terms
    return a == b


class NotDivisible(ArithmeticError):
    """Exact division failed; ``degree`` is the first total degree where it does."""

    def __init__(self, degree, message=None):
        self.degree = degree
        super().__init__(message or f"not divisible (first failure in degree {degree})")


class TruncatedSeries:
    """Power series in ``n`` generators known below total degree ``prec``."""

    __slots__ = ("n", "prec", "terms", "_graded")

    def __init__(self, n, prec, terms=None):
        if prec < 0:
            raise ValueError("precision must be non-negative")
        self.n = n
        self.prec = prec
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError(f"exponent {e} does not have {n} entries")
                if c and sum(e) < prec:
                    clean[tuple(e)] = c
        self.terms = clean
        self._graded = None

    @classmethod
    def _raw(cls, n, prec, terms):
        s = cls.__new__(cls)
        s.n, s.prec, s.terms, s._graded = n, prec, terms, None
        return s

    # constructors

    @classmethod
    def zero(cls, n, prec):
        return cls._raw(n, prec, {})

    @classmethod
    def constant(cls, c, n, prec):
        if isinstance(c, int):
            c = mpq(c)
        return cls(n, prec, {(0,) * n: c})

    @classmethod
    def gen(cls, i, n, prec):
        e = [0] * n
        e[i] = 1
        return cls(n, prec, {tuple(e): _ONE})

    # basic queries

    @property
    def valuation(self):
        if not self.terms:
            return self.prec
        return min(sum(e) for e in self.terms)

    def graded(self):
        """Terms as a list of ``(degree, exponent, coefficient)`` sorted by degree."""
        if self._graded is None:
            self._graded = sorted(((sum(e), e, c) for e, c in self.terms.items()),
                                  key=lambda t: t[0])
        return self._graded

    def homogeneous(self, d):
        return {e: c for e, c in self.terms.items() if sum(e) == d}

    def is_zero(self):
        return not self.terms

    def constant_term(self):
        return self.terms.get((0,) * self.n, _ZERO)

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        return TruncatedSeries(self.n, prec, self.terms)

    def symbols(self):
        out = set()
        for c in self.terms.values():
            if isinstance(c, Poly):
                out |= c.symbols()
        return out

    # arithmetic

    def _check(self, other):
        if not isinstance(other, TruncatedSeries):
            raise TypeError(f"expected a TruncatedSeries, got {type(other).__name__}")
        if other.n != self.n:
            raise ValueError(f"generator counts differ: {self.n} vs {other.n}")

    def _lift(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        return TruncatedSeries.constant(other, self.n, self.prec)

    def __add__(self, other):
        other = self._lift(other)
        prec = min(self.prec, other.prec)
        out = {e: c for e, c in self.terms.items() if sum(e) < prec}
        for e, c in other.terms.items():
            if sum(e) >= prec:
                continue
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return TruncatedSeries._raw(self.n, prec, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw(self.n, self.prec, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if not c:
            return TruncatedSeries._raw(self.n, self.prec, {})
        out = {}
        for e, v in self.terms.items():
            p = v * c
            if p:
                out[e] = p
        return TruncatedSeries._raw(self.n, self.prec, out)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            if isinstance(other, (int, Poly)) or _is_rational(other):
                return self.scale(other)
            return NotImplemented
        self._check(other)
        prec = min(self.prec + other.valuation, other.prec + self.valuation)
        out = {}
        bg = other.graded()
        two = self.n == 2
        for da, ea, ca in self.graded():
            limit = prec - da
            if limit <= 0:
                break
            for db, eb, cb in bg:
                if db >= limit:
                    break
                if two:
                    e = (ea[0] + eb[0], ea[1] + eb[1])
                else:
                    e = tuple(map(add, ea, eb))
                s = out.get(e)
                p = ca * cb
                if s is None:
                    out[e] = p
                else:
                    out[e] = s + p
        out = {e: c for e, c in out.items() if c}
        return TruncatedSeries._raw(self.n, prec, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = TruncatedSeries.constant(1, self.n, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            if isinstance(other, (int, Poly)) or _is_rational(other):
                other = TruncatedSeries.constant(other, self.n, self.prec)
            else:
                return NotImplemented
        if other.n != self.n:
            return False
        return self.first_difference(other) is None

    __hash__ = None

    def first_difference(self, other):
        """Lowest degree below the common precision where the series differ, else None."""
        prec = min(self.prec, other.prec)
        bad = None
        for e in set(self.terms) | set(other.terms):
            d = sum(e)
            if d >= prec or (bad is not None and d >= bad):
                continue
            if not _coefficient_eq(self.terms.get(e, _ZERO), other.terms.get(e, _ZERO)):
                bad = d
        return bad

    # division

    def lowest_form(self):
        v = self.valuation
        return v, self.homogeneous(v)

    def div_exact(self, g):
        """Exact quotient ``q`` with ``self == q * g``; raises :class:`NotDivisible`."""
        self._check(g)
        if g.is_zero():
            raise ZeroDivisionError("division by a series with no known terms")
        f = self
        k, lead_form = g.lowest_form()
        vf = f.valuation
        prec = min(f.prec - k, g.prec - 2 * k + vf)
        if vf < k and f.terms:
            raise NotDivisible(vf)
        if prec <= 0 or not f.terms:
            return TruncatedSeries._raw(self.n, max(prec, 0), {})
        lead_mono = max(lead_form)
        lead_coeff = lead_form[lead_mono]
        if isinstance(lead_coeff, Poly):
            raise NotDivisible(k, "leading coefficient of the divisor is not a unit")
        inv = _ONE / lead_coeff
        g_graded = g.graded()
        # remainder by degree, updated as quotient pieces are found
        rem = {}
        for d, e, c in f.graded():
            rem.setdefault(d, {})[e] = c
        quotient = {}
        exact = prec >= EXACT
        top = max(rem) - k if exact else prec - 1
        d = vf - k - 1
        while True:
            pending = [dd - k for dd, b in rem.items() if dd - k > d and any(b.values())]
            if not pending:
                break
            d = min(pending)
            if d > top:
                if exact:
                    # an exact quotient must be a polynomial of bounded degree
                    raise NotDivisible(d + k, "quotient of exact series is not a polynomial")
                break
            h = rem.get(d + k, {})
            h = {e: c for e, c in h.items() if c}
            piece = {}
            while h:
                lm = max(h)
                qm = tuple(a - b for a, b in zip(lm, lead_mono))
                if min(qm) < 0:
                    raise NotDivisible(d + k)
                qc = h[lm] * inv
                piece[qm] = qc
                for e, c in lead_form.items():
                    t = tuple(map(add, qm, e))
                    s = h.get(t, _ZERO) - qc * c
                    if s:
                        h[t] = s
                    else:
                        h.pop(t, None)
            if not piece:
                continue
            quotient.update(piece)
            # subtract piece * (g - lead_form) from higher degrees
            for dg, eg, cg in g_graded:
                if dg == k:
                    continue
                target = d + dg
                if target >= prec + k:
                    break
                bucket = rem.setdefault(target, {})
                for qm, qc in piece.items():
                    t = tuple(map(add, qm, eg))
                    bucket[t] = bucket.get(t, _ZERO) - qc * cg
        return TruncatedSeries(self.n, prec, quotient)

    def divides(self, g):
        """True if ``g`` divides ``self`` exactly to the available precision."""
        try:
            self.div_exact(g)
        except NotDivisible:
            return False
        return True

    # composition and specialization

    def substitute(self, images):
        """Compose with ``images`` (one series per generator, no constant terms)."""
        if len(images) != self.n:
            raise ValueError(f"need {self.n} images, got {len(images)}")
        if not images:
            return self
        m = images[0].n
        for img in images:
            if img.n != m:
                raise ValueError("images have different generator counts")
            if img.constant_term():
                raise ValueError("substituted series must have zero constant term")
        vmin = min(img.valuation for img in images)
        vmin = max(vmin, 1)
        vf = max(self.valuation, 1)
        prec = min([self.prec * vmin] + [img.prec + (vf - 1) * vmin for img in images])
        powers = [[TruncatedSeries.constant(1, m, prec)] for _ in images]

        def power(i, k):
            cache = powers[i]
            while len(cache) <= k:
                cache.append((cache[-1] * images[i]).truncate(prec))
            return cache[k]

        total = {}
        for _, e, c in self.graded():
            term = None
            for i, k in enumerate(e):
                if k:
                    p = power(i, k)
                    term = p if term is None else term * p
            if term is None:
                term = TruncatedSeries.constant(1, m, prec)
            for te, tc in term.terms.items():
                if sum(te) < prec:
                    total[te] = total.get(te, _ZERO) + tc * c
        return TruncatedSeries(m, prec, total)

    def specialize(self, assignment):
        """Replace each m_k by ``assignment[k]``; the result has rational coefficients."""
        missing = sorted(self.symbols() - set(assignment))
        if missing:
            raise KeyError("unassigned symbols: " + ", ".join(f"m{k}" for k in missing))
        out = {}
        for e, c in self.terms.items():
            out[e] = c.evaluate(assignment) if isinstance(c, Poly) else c
        return TruncatedSeries(self.n, self.prec, out)

    def map_coefficients(self, fn):
        return TruncatedSeries(self.n, self.prec, {e: fn(c) for e, c in self.terms.items()})

    # serialization

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), tuple(-x for x in t[0])))

    def to_json(self):
        return {
            "gens": self.n,
            "prec": self.prec,
            "terms": [{"e": list(e), "c": format_coefficient(c)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data):
        terms = {tuple(t["e"]): parse_coefficient(t["c"]) for t in data["terms"]}
        return cls(int(data["gens"]), int(data["prec"]), terms)

    def __repr__(self):
        return f"<TruncatedSeries {self.to_text()} + O({self.prec})>"

    def to_text(self, names=None):
        names = names or [f"y{i + 1}" for i in range(self.n)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            coeff = format_coefficient(c)
            if isinstance(c, Poly) and len(c.terms) > 1:
                coeff = f"({coeff})"
            if not mono:
                parts.append(coeff)
            elif coeff == "1":
                parts.append(mono)
            elif coeff == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{coeff}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class LocalizedElement:
    """A fraction ``numerator / prod(denominators)``.

    ``denominators`` is a sorted tuple of ``(key, series)`` pairs.  Equal keys
    must name equal series; the key is what sums use to form least common
    denominators and what the Weyl action rewrites.
    """

    numerator: TruncatedSeries
    denominators: tuple = ()

    def __post_init__(self):
        for _, d in self.denominators:
            if d.constant_term():
                raise ValueError("denominators must have zero constant term")
        ordered = tuple(sorted(self.denominators, key=lambda kd: repr(kd[0])))
        object.__setattr__(self, "denominators", ordered)

    @classmethod
    def of(cls, series):
        return cls(series, ())

    @property
    def n(self):
        return self.numerator.n

    def _keys(self):
        counts = {}
        for key, d in self.denominators:
            counts.setdefault(key, [0, d])[0] += 1
        return counts

    def _raise_to(self, target):
        """Rewrite over the denominator multiset ``target`` (a superset)."""
        mine = self._keys()
        num = self.numerator
        for key, (count, d) in target.items():
            extra = count - mine.get(key, (0,))[0]
            for _ in range(extra):
                num = num * d
        dens = tuple((key, d) for key, (count, d) in target.items() for _ in range(count))
        return LocalizedElement(num, dens)

    @staticmethod
    def _lcm(a, b):
        out = {key: list(v) for key, v in a.items()}
        for key, (count, d) in b.items():
            if key not in out or out[key][0] < count:
                out[key] = [count, d]
        return out

    def _lift(self, other):
        if isinstance(other, LocalizedElement):
            return other
        if isinstance(other, TruncatedSeries):
            return LocalizedElement.of(other)
        return LocalizedElement.of(TruncatedSeries.constant(other, self.n, self.numerator.prec))

    def __add__(self, other):
        other = self._lift(other)
        if other.numerator.n != self.n:
            raise ValueError("generator counts differ")
        target = LocalizedElement._lcm(self._keys(), other._keys())
        a, b = self._raise_to(target), other._raise_to(target)
        return LocalizedElement(a.numerator + b.numerator, a.denominators)

    __radd__ = __add__

    def __neg__(self):
        return LocalizedElement(-self.numerator, self.denominators)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        return LocalizedElement(self.numerator * other.numerator,
                                self.denominators + other.denominators)

    __rmul__ = __mul__

    def divide_by(self, key, series):
        return LocalizedElement(self.numerator, self.denominators + ((key, series),))

    def first_difference(self, other):
        other = self._lift(other)
        target = LocalizedElement._lcm(self._keys(), other._keys())
        return self._raise_to(target).numerator.first_difference(other._raise_to(target).numerator)

    def __eq__(self, other):
        if not isinstance(other, (LocalizedElement, TruncatedSeries, int)) and not _is_rational(other):
            return NotImplemented
        return self.first_difference(other) is None

    __hash__ = None

    def is_zero(self):
        return self.numerator.is_zero()

    def to_series(self):
        """Carry out the divisions; raises :class:`NotDivisible` if not a series."""
        q = self.numerator
        for _, d in self.denominators:
            q = q.div_exact(d)
        return q

    @property
    def precision(self):
        return self.numerator.prec

    def __repr__(self):
        keys = ", ".join(str(k) for k, _ in self.denominators)
        return f"<LocalizedElement {self.numerator.to_text()} / [{keys}]>"

"""Rank-2 root data and their Weyl groups.

Four data are supported: the finite types A2, B2, G2 and the affine type
A1aff (the infinite dihedral group).  With the convention
``s_i(a_j) = a_j - cartan[i][j] a_i`` one gets ``s1(a2) = j a1 + a2`` for
j = 1, 2, 3 in types A2, B2, G2, and ``s2(a1) = a1 + a2``.

Weights are integer tuples in a lattice basis: the fundamental weights for
finite types and the simple roots for A1aff.  Weyl group elements are
stored as canonical reduced words, alternating in {1, 2}; for a finite
group the two reduced words of the longest element are identified with the
one starting with 1.

>>> B2 = root_datum("B2")
>>> w = B2.element((1, 2, 1, 2, 1))
>>> str(w), w.length
('s2s1s2', 3)
>>> len(B2.window(10))
8
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

__all__ = [
    "DATA",
    "WeylElement",
    "RootDatum",
    "root_datum",
    "weyl_act",
    "weyl_window",
    "bruhat_leq",
    "inversion_set",
    "positive_roots",
    "parse_word",
]

DATA = ("A2", "B2", "G2", "A1aff")

_TABLE = {
    # name: (cartan, order of s1 s2, j)
    "A2": (((2, -1), (-1, 2)), 3, 1),
    "B2": (((2, -2), (-1, 2)), 4, 2),
    "G2": (((2, -3), (-1, 2)), 6, 3),
    "A1aff": (((2, -2), (-2, 2)), None, 2),
}


@dataclass(frozen=True, order=True)
class WeylElement:
    """An element of a dihedral Weyl group, named by its canonical reduced word."""

    length: int = field(init=False, repr=False)
    word: tuple
    datum: str = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "length", len(self.word))

    def __str__(self):
        return "".join(f"s{i}" for i in self.word) or "e"

    def __repr__(self):
        return f"WeylElement({self.datum}:{self})"

    @property
    def is_identity(self):
        return not self.word


def parse_word(text):
    """Read ``"s1s2s1"``, ``"121"``, ``"1,2,1"`` or ``"e"`` into a tuple of letters."""
    text = text.strip().replace(" ", "").replace(",", "")
    if text in ("", "e", "1" * 0, "id"):
        return ()
    if text.startswith("s"):
        parts = [p for p in text.split("s") if p]
    else:
        parts = list(text)
    letters = []
    for part in parts:
        if part not in ("1", "2"):
            raise ValueError(f"bad word {text!r}: letters must be 1 or 2")
        letters.append(int(part))
    return tuple(letters)


def _alternating(first, length):
    return tuple(first if k % 2 == 0 else 3 - first for k in range(length))


def _free_reduce(word):
    out = []
    for letter in word:
        if out and out[-1] == letter:
            out.pop()
        else:
            out.append(letter)
    return out


def _matmul(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2)
    )


def _matvec(a, v):
    return tuple(sum(a[i][k] * v[k] for k in range(2)) for i in range(2))


_IDENTITY = ((1, 0), (0, 1))


class RootDatum:
    """Cartan data, simple reflections and Weyl group combinatorics in rank 2."""

    def __init__(self, name):
        if name not in _TABLE:
            raise ValueError(f"unknown root datum {name!r}; choose from {', '.join(DATA)}")
        cartan, m12, j = _TABLE[name]
        self.name = name
        self.cartan = cartan
        self.m12 = m12
        self.j = j
        self.finite = m12 is not None
        if self.finite:
            self.lattice_basis = "fundamental-weights"
            # a_j = sum_i <a_j, a_i^v> w_i
            self.simple_roots = tuple(tuple(cartan[i][jj] for i in range(2)) for jj in range(2))
            self.coroots = ((1, 0), (0, 1))
        else:
            self.lattice_basis = "simple-roots"
            self.simple_roots = ((1, 0), (0, 1))
            self.coroots = tuple(tuple(cartan[i][jj] for jj in range(2)) for i in range(2))
        self.reflection_matrices = tuple(self._reflection_matrix(i) for i in range(2))

    def __repr__(self):
        return f"RootDatum({self.name!r})"

    def __eq__(self, other):
        return isinstance(other, RootDatum) and other.name == self.name

    def __hash__(self):
        return hash(self.name)

    def _reflection_matrix(self, i):
        # s_i(l) = l - <l, a_i^v> a_i, as a matrix acting on coordinate columns
        a, c = self.simple_roots[i], self.coroots[i]
        return tuple(
            tuple((1 if r == k else 0) - a[r] * c[k] for k in range(2)) for r in range(2)
        )

    def pairing(self, weight, i):
        """<weight, a_i^v> for i in {1, 2}."""
        c = self.coroots[i - 1]
        return c[0] * weight[0] + c[1] * weight[1]

    def alpha(self, i):
        return self.simple_roots[i - 1]

    # group elements

    @property
    def identity(self):
        return WeylElement((), self.name)

    def s(self, i):
        return WeylElement((i,), self.name)

    def element(self, word):
        """The group element of an arbitrary word over {1, 2}."""
        if isinstance(word, str):
            word = parse_word(word)
        w = _free_reduce(word)
        if self.finite:
            m = self.m12
            while len(w) > m:
                w = _free_reduce(list(_alternating(3 - w[0], m)) + w[m:])
            if len(w) == m and w[0] == 2:
                w = list(_alternating(1, m))
        return WeylElement(tuple(w), self.name)

    def mul(self, u, v):
        return self.element(u.word + v.word)

    def inverse(self, w):
        return self.element(tuple(reversed(w.word)))

    def matrix(self, w):
        out = _IDENTITY
        for i in w.word:
            out = _matmul(out, self.reflection_matrices[i - 1])
        return out

    def act(self, w, weight):
        for i in reversed(w.word):
            weight = _matvec(self.reflection_matrices[i - 1], weight)
        return weight

    @cached_property
    def longest(self):
        if not self.finite:
            raise ValueError("A1aff has no longest element")
        return self.element(_alternating(1, self.m12))

    @property
    def order(self):
        return 2 * self.m12 if self.finite else None

    def window(self, L=None):
        """Elements of length <= L ordered by (length, word); the whole group if L is None."""
        if L is None:
            if not self.finite:
                raise ValueError("A1aff needs an explicit window length")
            L = self.m12
        if self.finite:
            L = min(L, self.m12)
        out = [self.identity]
        for k in range(1, L + 1):
            words = {self.element(_alternating(1, k)), self.element(_alternating(2, k))}
            out.extend(sorted(words))
        return out

    # orders and roots

    def bruhat_leq(self, u, w):
        return u.length < w.length or u == w

    def subword_leq(self, u, w):
        """Bruhat order by the subword criterion (independent of the dihedral rule)."""
        n = len(w.word)
        for mask in range(1 << n):
            sub = tuple(w.word[k] for k in range(n) if mask >> k & 1)
            if self.element(sub) == u:
                return True
        return False

    def inversion_set(self, w):
        """[s_{i1}...s_{i(k-1)} a_{ik}] over the reduced word of w, in word order."""
        out = []
        for k, i in enumerate(w.word):
            prefix = WeylElement(w.word[:k], self.name)
            out.append(self.act(prefix, self.alpha(i)))
        return out

    def root_coordinates(self, weight):
        """Coordinates of a weight in the simple-root basis (rationals if necessary)."""
        if not self.finite:
            return tuple(weight)
        from fractions import Fraction

        (a, b), (c, d) = self.simple_roots  # columns a1 = (a, b), a2 = (c, d)
        det = a * d - b * c
        x = Fraction(d * weight[0] - c * weight[1], det)
        y = Fraction(-b * weight[0] + a * weight[1], det)
        return (x, y)

    def is_positive_root(self, weight):
        coords = self.root_coordinates(weight)
        return all(c >= 0 for c in coords) and any(c > 0 for c in coords)

    def height(self, weight):
        return sum(self.root_coordinates(weight))

    def positive_roots(self, height_bound=None):
        """Positive (real) roots with their reflections, as ``(weight, WeylElement)`` pairs."""
        if self.finite:
            w0 = self.longest
            words = [w0.word]
        else:
            bound = 7 if height_bound is None else height_bound
            # a root of height h appears in inversion sets of alternating words of length ~ h
            words = [_alternating(1, 2 * bound + 1), _alternating(2, 2 * bound + 1)]
        seen = {}
        for word in words:
            for k, i in enumerate(word):
                prefix = WeylElement(word[:k], self.name)
                beta = self.act(prefix, self.alpha(i))
                if beta in seen:
                    continue
                if height_bound is not None and not self.finite and self.height(beta) > height_bound:
                    continue
                refl = self.element(word[:k] + (i,) + tuple(reversed(word[:k])))
                seen[beta] = refl
        return sorted(seen.items(), key=lambda kv: (self.height(kv[0]), kv[1].length, kv[1].word))

    def reflection(self, beta):
        for root, refl in self.positive_roots(self._bound_for(beta)):
            if root == tuple(beta):
                return refl
        raise ValueError(f"{beta} is not a positive root of {self.name}")

    def _bound_for(self, beta):
        return None if self.finite else int(self.height(beta))

    # parabolic pieces, J a subset of {1, 2}

    def parabolic_subgroup(self, J):
        J = tuple(sorted(J))
        if not J:
            return [self.identity]
        if len(J) == 1:
            return [self.identity, self.s(J[0])]
        return self.window()

    def coset_representative(self, w, J):
        """Minimal-length representative of the right coset W_J w."""
        best = w
        for v in self.parabolic_subgroup(J):
            u = self.mul(v, w)
            if u.length < best.length:
                best = u
        return best

    def coset_representatives(self, J, L=None):
        reps = []
        for w in self.window(L):
            u = self.coset_representative(w, J)
            if u not in reps:
                reps.append(u)
        return reps


_CACHE = {}


def root_datum(name):
    if name not in _CACHE:
        _CACHE[name] = RootDatum(name)
    return _CACHE[name]


def weyl_act(datum, w, weight):
    return datum.act(w, weight)


def weyl_window(datum, L=None):
    return datum.window(L)


def bruhat_leq(datum, u, w):
    return datum.bruhat_leq(u, w)


def inversion_set(datum, w):
    return datum.inversion_set(w)


def positive_roots(datum, height_bound=None):
    return [beta for beta, _ in datum.positive_roots(height_bound)]

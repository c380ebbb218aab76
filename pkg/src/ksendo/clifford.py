"""Formal Clifford algebra of one block, written in an isotropic basis.

Generators are x_i = f_{+i}, y_i = f_{-i} (1 <= i <= l) and, for odd m, z with
z^2 = 1. Relations: x_i^2 = y_i^2 = 0, x_i y_i + y_i x_i = 2*phi_i, generators
with different indices anticommute, z anticommutes with every x_i, y_i.
Scalars are Laurent monomial sums in the formal symbols phi_1..phi_l.
"""

from __future__ import annotations

from fractions import Fraction

# per-index states: 0 -> 1, 1 -> x, 2 -> y, 3 -> x*y
_PARITY = (0, 1, 1, 0)


class Laurent:
    """Finite sum of c * prod phi_i^{e_i} with rational c and integer e_i."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def monomial(cls, l, coeff=1, exps=None):
        return cls({tuple(exps) if exps is not None else (0,) * l: Fraction(coeff)})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Laurent(out)

    def __neg__(self):
        return Laurent({k: -v for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Laurent):
            return Laurent({k: v * other for k, v in self.terms.items()})
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + v1 * v2
        return Laurent(out)

    __rmul__ = __mul__

    def is_zero(self):
        return not self.terms

    def is_monomial(self):
        return len(self.terms) == 1

    def single(self):
        """(coefficient, exponent tuple) of a monomial."""
        if len(self.terms) != 1:
            raise ValueError("not a monomial")
        (k, v), = self.terms.items()
        return v, k

    def inverse(self):
        c, e = self.single()
        return Laurent({tuple(-x for x in e): 1 / c})

    def __truediv__(self, other):
        return self * other.inverse()

    def __eq__(self, other):
        return isinstance(other, Laurent) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Laurent({self.terms})"


def _index_product(a, b, i, l):
    """Product of per-index states a*b as list of (state, Laurent)."""
    one = Laurent.monomial(l)
    s = Laurent.monomial(l, 2, [int(j == i) for j in range(l)])
    if a == 0:
        return [(b, one)]
    if b == 0:
        return [(a, one)]
    table = {
        (1, 1): [],
        (1, 2): [(3, one)],
        (1, 3): [],
        (2, 1): [(0, s), (3, -one)],
        (2, 2): [],
        (2, 3): [(2, s)],
        (3, 1): [(1, s)],
        (3, 2): [],
        (3, 3): [(3, s)],
    }
    return table[(a, b)]


class Clifford:
    """Element of the block Clifford algebra: {(states, zbit): Laurent}."""

    __slots__ = ("l", "odd", "terms")

    def __init__(self, l, odd, terms=None):
        self.l = l
        self.odd = odd
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    @classmethod
    def scalar(cls, l, odd, value=1):
        c = value if isinstance(value, Laurent) else Laurent.monomial(l, value)
        return cls(l, odd, {((0,) * l, 0): c})

    @classmethod
    def generator(cls, l, odd, i, sign):
        """f_{sign*i} for 1 <= i <= l, or z for i == 0."""
        states = [0] * l
        if i == 0:
            if not odd:
                raise ValueError("z exists only for odd m")
            return cls(l, odd, {(tuple(states), 1): Laurent.monomial(l)})
        states[i - 1] = 1 if sign > 0 else 2
        return cls(l, odd, {(tuple(states), 0): Laurent.monomial(l)})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return Clifford(self.l, self.odd, out)

    def __neg__(self):
        return Clifford(self.l, self.odd, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return Clifford(self.l, self.odd, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Clifford):
            return self.scale(other)
        l = self.l
        out = {}
        for (s1, z1), c1 in self.terms.items():
            for (s2, z2), c2 in other.terms.items():
                # move each factor of the right word leftwards past the tail of the left word
                swaps = 0
                for j in range(l):
                    if _PARITY[s2[j]]:
                        swaps += z1 + sum(_PARITY[s1[i]] for i in range(j + 1, l))
                partial = [((), Laurent.monomial(l, -1 if swaps % 2 else 1))]
                for j in range(l):
                    nxt = []
                    for st, c in partial:
                        for ns, nc in _index_product(s1[j], s2[j], j, l):
                            nxt.append((st + (ns,), c * nc))
                    partial = nxt
                    if not partial:
                        break
                coeff = c1 * c2
                for st, c in partial:
                    key = (st, (z1 + z2) % 2)
                    val = c * coeff
                    out[key] = out[key] + val if key in out else val
        return Clifford(l, self.odd, out)

    def parity_twist(self):
        """Image under the automorphism induced by v -> -v."""
        out = {}
        for (st, z), c in self.terms.items():
            p = (sum(_PARITY[x] for x in st) + z) % 2
            out[(st, z)] = -c if p else c
        return Clifford(self.l, self.odd, out)

    def is_zero(self):
        return not self.terms

    def ratio_to(self, other):
        """Scalar k with self == k * other, or None when not proportional."""
        if other.is_zero() or set(self.terms) != set(other.terms):
            return None
        ratio = None
        for key, c in other.terms.items():
            if not c.is_monomial() or not self.terms[key].is_monomial():
                return None
            r = self.terms[key] / c
            if ratio is None:
                ratio = r
            elif r != ratio:
                return None
        return ratio

    def __eq__(self, other):
        return isinstance(other, Clifford) and self.terms == other.terms

    def __repr__(self):
        return f"Clifford({self.terms})"


def swap_count(word, target_order):
    """Adjacent transpositions a stable bubble sort needs to reorder ``word``
    so that letters appear in ``target_order`` (letters absent from it go first)."""
    rank = {letter: k for k, letter in enumerate(target_order)}
    keys = [rank.get(w, -1) for w in word]
    swaps = 0
    keys = list(keys)
    n = len(keys)
    for i in range(n):
        for j in range(n - 1 - i):
            if keys[j] > keys[j + 1]:
                keys[j], keys[j + 1] = keys[j + 1], keys[j]
                swaps += 1
    return swaps

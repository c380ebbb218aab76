"""Formal monomials q * prod x_key^e over symbolic atoms, with a permutation action."""

from __future__ import annotations

from fractions import Fraction


class Formal:
    __slots__ = ("q", "exps")

    def __init__(self, q=1, exps=None):
        self.q = Fraction(q)
        if isinstance(exps, dict):
            exps = tuple(sorted((k, e) for k, e in exps.items() if e))
        self.exps = exps or ()

    def as_dict(self):
        return dict(self.exps)

    def __mul__(self, other):
        if not isinstance(other, Formal):
            return Formal(self.q * other, self.exps)
        d = self.as_dict()
        for k, e in other.exps:
            d[k] = d.get(k, 0) + e
        return Formal(self.q * other.q, d)

    def inverse(self):
        return Formal(1 / self.q, {k: -e for k, e in self.exps})

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, n):
        return Formal(self.q ** n, {k: e * n for k, e in self.exps})

    def act(self, keymap):
        d = {}
        for k, e in self.exps:
            nk = keymap(k)
            d[nk] = d.get(nk, 0) + e
        return Formal(self.q, d)

    def evaluate(self, values, one):
        acc = one * self.q
        for k, e in self.exps:
            acc = acc * values[k] ** e
        return acc

    def __eq__(self, other):
        return isinstance(other, Formal) and self.q == other.q and self.exps == other.exps

    def __hash__(self):
        return hash((self.q, self.exps))

    def __repr__(self):
        return f"Formal({self.q}, {dict(self.exps)})"

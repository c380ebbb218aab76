"""Brauer class of a descent cocycle: split, a quaternion symbol, or unresolved.

The cocycle is first reduced to a +-1 valued one by a cochain built from
square roots of the atoms sigma_k(d_i) and rational primes; the remaining class
in H^2(S', Z/2) is written as a sum of cup products of quadratic characters,
each of which is a quaternion symbol over the center.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .errors import UnsupportedCenter, VerificationFailure
from .galois import characters, reynolds_square, squarefree_part

INF = "inf"


# local symbols over Q --------------------------------------------------------

def _split_p(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def _to_int(x):
    x = Fraction(x)
    return squarefree_part(x)


def hilbert_symbol(a, b, p):
    """Local Hilbert symbol (a, b)_p in {1, -1}; p a prime or ``INF``."""
    a, b = _to_int(a), _to_int(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol of zero")
    if p == INF:
        return -1 if a < 0 and b < 0 else 1
    alpha, u = _split_p(a, p)
    beta, v = _split_p(b, p)
    if p == 2:
        def eps(x):
            return ((x - 1) // 2) % 2

        def omega(x):
            return ((x * x - 1) // 8) % 2
        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    e = (alpha * beta * ((p - 1) // 2)) % 2
    val = -1 if e else 1
    if beta % 2:
        val *= sympy.legendre_symbol(u % p, p)
    if alpha % 2:
        val *= sympy.legendre_symbol(v % p, p)
    return val


def _places(entries):
    ps = {2}
    for x in entries:
        n = abs(_to_int(x))
        ps |= set(sympy.factorint(n)) if n > 1 else set()
    return sorted(ps) + [INF]


def ramification(symbols):
    """Places of Q where the product of quaternion symbols is nonsplit."""
    if not symbols:
        return []
    places = _places([x for s in symbols for x in s])
    out = []
    for p in places:
        val = 1
        for a, b in symbols:
            val *= hilbert_symbol(a, b, p)
        if val < 0:
            out.append(p)
    return out


def symbols_equal(s1, s2, center="Q"):
    """Decide (a, b)_Q == (a', b')_Q; ``None`` stands for the split class."""
    if center != "Q":
        raise UnsupportedCenter("symbol comparison is implemented over Q only", center=center)
    r1 = ramification([s1] if s1 else [])
    r2 = ramification([s2] if s2 else [])
    return r1 == r2


def is_local_square(q, p):
    q = _to_int(q)
    if p == INF:
        return q > 0
    v, u = _split_p(q, p)
    if v % 2:
        return False
    if p == 2:
        return u % 8 == 1
    return sympy.legendre_symbol(u % p, p) == 1


def symbol_with_ramification(places, bound=500):
    """Small (a, b) over Q ramified exactly at ``places``; prefers b = -1."""
    target = sorted(places, key=str)
    if not target:
        return None
    cands = sorted({squarefree_part(n) for n in range(-bound, bound + 1) if n not in (0, 1)},
                   key=lambda v: (abs(v), -v))
    for b in (-1,) + tuple(c for c in cands if c != -1):
        for a in cands:
            if sorted(ramification([(a, b)]), key=str) == target:
                return (a, b)
    raise VerificationFailure("no small symbol with the requested ramification", places=places)


# formal reduction ------------------------------------------------------------

def _prime_exponents(q):
    q = Fraction(q)
    out = dict(sympy.factorint(abs(q.numerator)))
    for p, e in sympy.factorint(q.denominator).items():
        out[p] = out.get(p, 0) - e
    out.pop(1, None)
    return out


class MonomialGroup:
    """Exponent-vector model of cocycle values over atoms with a Galois action.

    Atoms are the distinct irrational values sigma_k(d_i) and the rational primes
    met in the cocycle; rational atoms are folded into the rational coefficient.
    """

    def __init__(self, group, atom_values, formal_values):
        self.group = group
        tower = group.tower
        self.tower = tower
        self.atoms = []
        self.atom_index = {}
        self.key_map = {}
        for key, v in atom_values.items():
            if v.is_rational():
                self.key_map[key] = ("q", v.rational())
                continue
            if v not in self.atom_index:
                self.atom_index[v] = len(self.atoms)
                self.atoms.append(("L", v))
            self.key_map[key] = ("a", self.atom_index[v])
        primes = set()
        for f in formal_values:
            primes |= set(_prime_exponents(self._rational(f)))
        for p in sorted(primes):
            self.atom_index[p] = len(self.atoms)
            self.atoms.append(("p", p))
        self.roots = []
        for kind, v in self.atoms:
            val = v if kind == "L" else tower.base.scalar(v)
            self.roots.append(tower.sqrt(val))
        self._perm_cache = {}

    def _rational(self, f):
        q = f.q
        for key, e in f.exps:
            mapped = self.key_map[key]
            if mapped[0] == "q":
                q *= mapped[1] ** e
        return q

    def vector(self, f):
        """(sign, {atom index: exponent}) of a formal value."""
        q = f.q
        vec = {}
        for key, e in f.exps:
            mapped = self.key_map[key]
            if mapped[0] == "q":
                q *= mapped[1] ** e
            else:
                vec[mapped[1]] = vec.get(mapped[1], 0) + e
        for p, e in _prime_exponents(q).items():
            if e:
                vec[self.atom_index[p]] = vec.get(self.atom_index[p], 0) + e
        return (1 if q > 0 else -1), {a: e for a, e in vec.items() if e}

    def act(self, g, a):
        """Atom index of g(atom a)."""
        key = (g, a)
        if key not in self._perm_cache:
            kind, v = self.atoms[a]
            if kind == "p":
                self._perm_cache[key] = a
            else:
                img = v.conj(self.group.elements[g].perm)
                if img not in self.atom_index:
                    raise VerificationFailure("atom set is not Galois stable")
                self._perm_cache[key] = self.atom_index[img]
        return self._perm_cache[key]


@dataclass
class Reduction:
    chi: dict
    prime_characters: list
    eps: dict
    formal_ok: bool = True
    reason: str = ""


def _half_integral_cochain(mg, sub, compose, inverse, vecs):
    """x: S' -> (1/2)Z^atoms with e(g,h) = x(g) + g.x(h) - x(gh), or None."""
    n = len(sub)
    natoms = len(mg.atoms)
    psi = {g: [Fraction(0)] * natoms for g in sub}
    for (g, h), (_, vec) in vecs.items():
        row = psi[g]
        for a, e in vec.items():
            row[a] += e
    x0 = {g: [v / n for v in psi[g]] for g in sub}
    v = [None] * natoms
    for a in range(natoms):
        if v[a] is not None:
            continue
        v[a] = Fraction(0)
        for g in sub:
            b = mg.act(inverse[g], a)
            if v[b] is None:
                v[b] = -x0[g][a]
    x = {}
    for g in sub:
        row = []
        for a in range(natoms):
            val = x0[g][a] + v[mg.act(inverse[g], a)] - v[a]
            if (2 * val).denominator != 1:
                return None
            row.append(val)
        x[g] = row
    return x


def reduce_to_signs(cocycle, mg):
    """Split the cocycle as eps * prod p^{psi_p(g) psi_p(h)} * d(chi) with eps = +-1."""
    group = cocycle.group
    sub = cocycle.subgroup
    tower = mg.tower
    inverse = {g: group.inverse(g) for g in sub}
    vecs = {key: mg.vector(f) for key, f in cocycle.formal.items()}
    x = _half_integral_cochain(mg, sub, group.compose, inverse, vecs)
    if x is None:
        return Reduction({}, [], {}, False, "no half-integral cochain over the atoms")
    prime_chars = []
    chi = {g: tower.one() for g in sub}
    for a, (kind, val) in enumerate(mg.atoms):
        root = mg.roots[a]
        if root is not None:
            for g in sub:
                e = 2 * x[g][a]
                if e:
                    chi[g] = chi[g] * root ** int(e)
            continue
        if kind != "p":
            return Reduction({}, [], {}, False, "atom without square root in F")
        bits = {g: int((2 * x[g][a]) % 2) for g in sub}
        for g in sub:
            e = x[g][a] - Fraction(bits[g], 2)
            if e:
                chi[g] = chi[g] * tower.lift(tower.base.scalar(Fraction(val) ** int(e)))
        if any(bits.values()):
            prime_chars.append((val, bits))
    eps = {}
    for (g, h), value in cocycle.values.items():
        gh = group.compose(g, h)
        lhs = tower.lift(value) * chi[gh]
        rhs = chi[g] * group.apply(group.elements[g], chi[h])
        for p, bits in prime_chars:
            if bits[g] and bits[h]:
                rhs = rhs * p
        if lhs == rhs:
            eps[(g, h)] = 0
        elif lhs == -rhs:
            eps[(g, h)] = 1
        else:
            return Reduction(chi, prime_chars, {}, False, "residual cocycle is not +-1 valued")
    return Reduction(chi, prime_chars, eps)


# GF(2) decomposition ------------------------------------------------------------

def _basis_characters(group, sub):
    chars = characters(group, sub)
    basis = []
    vectors = []
    order = sorted(sub)
    for chi in chars:
        vec = sum(chi[g] << i for i, g in enumerate(order))
        if vec == 0:
            continue
        reduced = vec
        for b in vectors:
            reduced = min(reduced, reduced ^ b)
        if reduced:
            vectors.append(reduced)
            vectors.sort(reverse=True)
            basis.append(chi)
    return basis


def _solve_gf2(rows, nvars):
    """rows: list of (mask, rhs). Returns one solution as a bit mask or None."""
    pivots = {}
    for mask, rhs in rows:
        for col, (pm, pr) in pivots.items():
            if mask >> col & 1:
                mask ^= pm
                rhs ^= pr
        if mask == 0:
            if rhs:
                return None
            continue
        col = mask.bit_length() - 1
        for c2 in list(pivots):
            pm, pr = pivots[c2]
            if pm >> col & 1:
                pivots[c2] = (pm ^ mask, pr ^ rhs)
        pivots[col] = (mask, rhs)
    sol = 0
    for col, (pm, pr) in pivots.items():
        if pr:
            sol |= 1 << col
    return sol


def decompose_signs(group, sub, eps):
    """eps = sum c_ij chi_i u chi_j + d(eta) over GF(2); returns (pairs, eta) or None."""
    basis = _basis_characters(group, sub)
    pairs = [(i, j) for i in range(len(basis)) for j in range(i, len(basis))]
    order = sorted(sub)
    pos = {g: k for k, g in enumerate(order)}
    npairs = len(pairs)
    rows = []
    for (g, h), val in eps.items():
        gh = group.compose(g, h)
        mask = 0
        for k, (i, j) in enumerate(pairs):
            if basis[i][g] and basis[j][h]:
                mask |= 1 << k
        for el in (g, h, gh):
            mask ^= 1 << (npairs + pos[el])
        rows.append((mask, val))
    sol = _solve_gf2(rows, npairs + len(order))
    if sol is None:
        return None
    chosen = [pairs[k] for k in range(npairs) if sol >> k & 1]
    eta = {g: sol >> (npairs + pos[g]) & 1 for g in order}
    return basis, chosen, eta


# classification ------------------------------------------------------------------

@dataclass
class BrauerResult:
    delta: object
    symbol: object = None
    local_symbols: list = field(default_factory=list)
    ramified: list = field(default_factory=list)
    status: str = "split"
    certificate: dict = field(default_factory=dict)
    reason: str = ""

    def describe(self, center):
        if self.delta == 1:
            return "split"
        if self.delta == 2 and self.symbol is not None:
            a, b = self.symbol
            return f"({a}, {b})_{center.name}"
        return "unresolved"

    def to_dict(self):
        return {"delta": self.delta, "status": self.status,
                "symbol": list(self.symbol) if self.symbol else None,
                "local_symbols": [[str(a), str(b)] for a, b in self.local_symbols],
                "ramified_places": [str(p) for p in self.ramified],
                "reason": self.reason}


def _character_radicand(group, sub, chi):
    y = reynolds_square(group, sub, chi)
    a = y * y
    if a.in_L() and a.to_L().is_rational():
        return squarefree_part(a.to_L().rational())
    return a


def coboundary_solve(cocycle, mg):
    """A cochain c with d(c) = cocycle inside the monomial group, or None."""
    red = reduce_to_signs(cocycle, mg)
    if not red.formal_ok or red.prime_characters:
        return None
    dec = decompose_signs(cocycle.group, cocycle.subgroup, red.eps)
    if dec is None or dec[1]:
        return None
    _, _, eta = dec
    witness = {g: (-red.chi[g] if eta[g] else red.chi[g]) for g in cocycle.subgroup}
    _check_witness(cocycle, witness)
    return witness


def _check_witness(cocycle, witness):
    group = cocycle.group
    tower = group.tower
    for (g, h), value in cocycle.values.items():
        gh = group.compose(g, h)
        if tower.lift(value) * witness[gh] != witness[g] * group.apply(group.elements[g], witness[h]):
            raise VerificationFailure("coboundary witness does not reproduce the cocycle")


def classify(cocycle, center, mg):
    group = cocycle.group
    sub = cocycle.subgroup
    red = reduce_to_signs(cocycle, mg)
    if not red.formal_ok:
        return BrauerResult(None, status="unresolved", reason=red.reason)
    dec = decompose_signs(group, sub, red.eps)
    if dec is None:
        return BrauerResult(None, status="unresolved",
                            reason="sign cocycle is not a sum of cup products")
    basis, chosen, eta = dec
    # step 5: the explicit decomposition reproduces the sign cocycle exactly
    for (g, h), val in red.eps.items():
        gh = group.compose(g, h)
        bit = (eta[g] + eta[h] + eta[gh]) % 2
        for i, j in chosen:
            bit ^= basis[i][g] & basis[j][h]
        if bit != val:
            raise VerificationFailure("sign cocycle decomposition failed verification")
    symbols = []
    for p, bits in red.prime_characters:
        symbols.append((_character_radicand(group, sub, bits), p))
    for i, j in chosen:
        a = _character_radicand(group, sub, basis[i])
        b = a if i == j else _character_radicand(group, sub, basis[j])
        if i == j:
            b = -1
        symbols.append((a, b))
    cert = {"cochain_support": len(red.chi), "cup_terms": len(chosen),
            "prime_terms": len(red.prime_characters)}
    if not symbols:
        witness = {g: (-red.chi[g] if eta[g] else red.chi[g]) for g in sub}
        _check_witness(cocycle, witness)
        return BrauerResult(1, status="split", certificate={**cert, "coboundary": True})
    rational = all(isinstance(x, int) for s in symbols for x in s)
    if not rational:
        return BrauerResult(None, local_symbols=symbols, status="unresolved",
                            reason="symbol entries outside Q", certificate=cert)
    places = ramification(symbols)
    if not places:
        return BrauerResult(1, local_symbols=symbols, status="split", certificate=cert)
    if center.degree == 1:
        sym = symbol_with_ramification(places)
        return BrauerResult(2, symbol=sym, local_symbols=symbols, ramified=places,
                            status="quaternion", certificate=cert)
    for q in center.quadratic:
        if all(not is_local_square(q, p) for p in places):
            return BrauerResult(1, local_symbols=symbols, ramified=places, status="split",
                                certificate={**cert, "killed_by": q})
    if center.degree == 2 and center.complete and len(center.quadratic) == 1:
        # a ramified place that splits in the center keeps its local invariant
        q = center.quadratic[0]
        kept = [p for p in places if is_local_square(q, p)]
        sym = symbol_with_ramification(places)
        return BrauerResult(2, symbol=sym, local_symbols=symbols, ramified=places,
                            status="quaternion", certificate={**cert, "survives_at": kept})
    return BrauerResult(None, local_symbols=symbols, ramified=places, status="unresolved",
                        reason="local degrees of the center not determined", certificate=cert)

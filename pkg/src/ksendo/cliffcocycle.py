"""Matrix-unit coefficients, descent matrices m(g) and the resulting 2-cocycle
for one isotypical component."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .clifford import Clifford, Laurent, swap_count
from .decomp import act_on_index
from .monomial import Formal
from .errors import InconsistentScalars, NonScalarProduct, VerificationFailure
from .spinweights import CM


# one block ---------------------------------------------------------------

def _labels(l, odd):
    tails = ((1,), (-1,)) if odd else ((),)
    return [a + t for a in product((1, -1), repeat=l) for t in tails]


def _split(label, l):
    return label[:l], (label[l] if len(label) > l else None)


def ideal_generator(label, l, odd):
    """(1 + gamma z) * f_{a_1 1} ... f_{a_l l}."""
    alpha, gamma = _split(label, l)
    e = Clifford.scalar(l, odd)
    if odd:
        e = e + Clifford.generator(l, odd, 0, 1).scale(gamma)
    for i, a in enumerate(alpha):
        e = e * Clifford.generator(l, odd, i + 1, a)
    return e


def transport_sign(alpha, beta):
    """Parity c(alpha, beta): swaps moving the beta letters to the right end."""
    l = len(alpha)
    word = [(a, i) for i, a in enumerate(alpha)] + [(beta[i], i) for i in range(l) if alpha[i] != beta[i]]
    return swap_count(word, [(beta[i], i) for i in range(l)]) % 2


def transport_element(alpha, beta, odd):
    """R_{alpha,beta}: right multiplication by it maps C f_alpha onto C f_beta."""
    l = len(alpha)
    coeff = Laurent.monomial(l, -1 if transport_sign(alpha, beta) else 1,
                             [-(alpha[i] == beta[i]) for i in range(l)])
    e = Clifford.scalar(l, odd, coeff)
    for i in range(l):
        if alpha[i] == beta[i]:
            e = e * Clifford.generator(l, odd, i + 1, -alpha[i]) * Clifford.generator(l, odd, i + 1, alpha[i])
    for i in range(l):
        if alpha[i] != beta[i]:
            e = e * Clifford.generator(l, odd, i + 1, beta[i])
    return e


def _pdist(a, b):
    return sum(1 for x, y in zip(a, b) if x != y)


def twist_exponent(label_a, label_b, l):
    """1 when the transport must be followed by the parity automorphism."""
    a, g = _split(label_a, l)
    b, h = _split(label_b, l)
    if g is None:
        return 0
    return int(g * (-1) ** _pdist(a, b) != h)


def block_map(label_a, label_b, l, odd, xi):
    v = xi * transport_element(label_a[:l], label_b[:l], odd)
    if twist_exponent(label_a, label_b, l):
        v = v.parity_twist()
    return v


@lru_cache(maxsize=None)
def composition_constants(l, odd):
    """kappa[(a, b, c)] with r_{b,c} o r_{a,b} = kappa * r_{a,c} on C f_a."""
    labels = _labels(l, odd)
    kappa = {}
    for a in labels:
        f = ideal_generator(a, l, odd)
        images = {b: block_map(a, b, l, odd, f) for b in labels}
        for b in labels:
            for c in labels:
                lhs = block_map(b, c, l, odd, images[b])
                k = lhs.ratio_to(images[c])
                if k is None:
                    raise VerificationFailure("block transports are not proportional",
                                              labels=[a, b, c])
                kappa[(a, b, c)] = k
    return kappa


@lru_cache(maxsize=None)
def block_lambda(l, odd, reference=None):
    """Coefficients making lambda_{a,b} r_{a,b} / scale a system of matrix units.

    Normalized by lambda_{reference, b} = 1. Returns (table, scale).
    """
    labels = _labels(l, odd)
    a0 = reference if reference is not None else labels[0]
    kappa = composition_constants(l, odd)
    table = {}
    for b in labels:
        for c in labels:
            table[(b, c)] = kappa[(a0, a0, c)] / kappa[(a0, b, c)]
    scale = kappa[(a0, a0, a0)].single()[0]
    return table, scale


def closed_form_lambda(l, odd, reference=None):
    """Sign-count formula for the coefficients (compared against block_lambda in tests)."""
    labels = _labels(l, odd)
    a0 = reference if reference is not None else labels[0]
    alpha0, g0 = _split(a0, l)

    def delta(x, y):
        return twist_exponent(x, y, l)

    def to_ref(b):
        beta, _ = _split(b, l)
        p = _pdist(alpha0, beta)
        ex = p * (p - 1) // 2 + (p * delta(a0, b) if odd else 0)
        return Laurent.monomial(l, (-1) ** ex, [-(alpha0[i] != beta[i]) for i in range(l)])

    table = {}
    for a in labels:
        alpha, _ = _split(a, l)
        for b in labels:
            beta, _ = _split(b, l)
            if a == a0:
                table[(a, b)] = Laurent.monomial(l)
                continue
            word = ([(alpha[i], i) for i in range(l) if alpha0[i] != alpha[i]]
                    + [(-beta[i], i) for i in range(l) if alpha0[i] != beta[i]])
            target = [(alpha[i], i) for i in range(l) if alpha[i] != beta[i]]
            for i in range(l):
                if alpha[i] == beta[i] != alpha0[i]:
                    target += [(beta[i], i), (-beta[i], i)]
            e = swap_count(word, target)
            if odd:
                e += (delta(a, b) * (l + _pdist(alpha, beta)) + delta(a, a0) * (l + _pdist(alpha, alpha0))
                      + delta(a0, b) * (l + _pdist(alpha0, beta)))
            table[(a, b)] = to_ref(a) * Laurent.monomial(
                l, (-1) ** e, [int(alpha[i] == beta[i] != alpha0[i]) for i in range(l)])
    return table


# full index sets ------------------------------------------------------------

def atom_key(k, i):
    """Formal symbol for sigma_k(d_{i+1})."""
    return ("d", k, i)


def atom_values(form):
    return {atom_key(k, i): form.diag[i].conj(k) for k in range(form.r) for i in range(form.m)}


def block_keymap(signs, g):
    bm = signs.block_map[g]
    return lambda key: (key[0], bm[key[1]], key[2])


def _formal_block(laurent, k):
    """phi_i = 2 sigma_k(d_i): turn a Laurent monomial in phi into a Formal."""
    coeff, exps = laurent.single()
    return Formal(coeff * Fraction(2) ** sum(exps), {atom_key(k, i): e for i, e in enumerate(exps)})


@dataclass
class LambdaTable:
    indices: list
    formal: dict
    values: dict
    reference: tuple
    scale: Fraction

    def __getitem__(self, key):
        return self.values[key]


def block_phis(form, k):
    """Bilinear values Phi(f_i, f_{-i}) = 2 sigma_k(d_i) of block k."""
    return [form.diag[i].conj(k) * 2 for i in range(form.l)]


def build_lambda(form, index_set, reference=None):
    """Coefficients over the index set, normalized by lambda_{reference, b} = 1.

    Values lie in L; ``formal`` keeps them as monomials in the atoms sigma_k(d_i).
    """
    indices = list(index_set)
    ref = reference if reference is not None else indices[0]
    base = form.base
    if form.kind == CM:
        formal = {(a, b): Formal() for a in indices for b in indices}
        values = {key: base.one() for key in formal}
        return LambdaTable(indices, formal, values, ref, Fraction(1))
    l, odd = form.l, form.odd
    scale = Fraction(1)
    tables = []
    for k in range(form.r):
        table, s = block_lambda(l, odd, ref[k])
        scale *= s
        tables.append(table)
    atoms = atom_values(form)
    one = base.one()
    cache = {}
    formal = {}
    values = {}
    for a in indices:
        for b in indices:
            acc = Formal()
            for k, table in enumerate(tables):
                key = (k, a[k], b[k])
                if key not in cache:
                    cache[key] = _formal_block(table[(a[k], b[k])], k)
                acc = acc * cache[key]
            formal[(a, b)] = acc
            values[(a, b)] = acc.evaluate(atoms, one)
    return LambdaTable(indices, formal, values, ref, scale)


def check_lambda_consistency(form, table):
    """lambda_ab lambda_bc kappa_abc = scale * lambda_ac on every triple (blockwise)."""
    if form.kind == CM:
        return True
    l, odd = form.l, form.odd
    kappa = composition_constants(l, odd)
    for k in range(form.r):
        phis = block_phis(form, k)
        labels = {idx[k] for idx in table.indices}
        blk, s = block_lambda(l, odd, table.reference[k])
        for a in labels:
            for b in labels:
                for c in labels:
                    lhs = blk[(a, b)] * blk[(b, c)] * kappa[(a, b, c)]
                    if _evaluate(lhs, phis) != _evaluate(blk[(a, c)], phis) * s:
                        return False
    return True


def _evaluate(laurent, phis):
    coeff, exps = laurent.single()
    acc = phis[0].field.scalar(coeff)
    for phi, e in zip(phis, exps):
        if e:
            acc = acc * phi ** e
    return acc


# descent matrices and cocycle ----------------------------------------------

class DescentData:
    """u_g(i, j) for the semilinear action of S' on the matrix units."""

    def __init__(self, form, group, signs, table, subgroup, tag=None):
        self.form = form
        self.group = group
        self.signs = signs
        self.table = table
        self.subgroup = list(subgroup)
        self.tag = tag
        self.atoms = atom_values(form)
        self.action = {g: {idx: act_on_index(signs, g, idx) for idx in table.indices}
                       for g in self.subgroup}
        for g, mp in self.action.items():
            if set(mp.values()) != set(table.indices):
                raise InconsistentScalars("index set is not stable under the subgroup", g=g)
        self._keymaps = {g: block_keymap(signs, g) for g in self.subgroup}

    def act(self, g, formal):
        return formal.act(self._keymaps[g])

    def evaluate(self, formal):
        return formal.evaluate(self.atoms, self.form.base.one())

    def unit_factor(self, g, a, b):
        """Formal u_g(a, b) with phi_g(E_ab) = u_g(a, b) E_{ga, gb}."""
        if self.form.kind == CM:
            return self._cm_factor(g, a, b)
        t = self.table.formal
        ga, gb = self.action[g][a], self.action[g][b]
        return self.act(g, t[(a, b)]) / t[(ga, gb)]

    def _cm_factor(self, g, a, b):
        form = self.form
        acc = Formal()
        bm = self.signs.block_map[g]
        for k in range(form.r):
            if a[k] == b[k] or self.signs.theta[g][k] > 0:
                continue
            p = self.tag[k]
            sign = -1 if (p * (form.m - p)) % 2 else 1
            power = 1 if (a[k], b[k]) == (-1, 1) else -1
            disc = Formal(1, {atom_key(bm[k], i): 1 for i in range(form.m)})
            acc = acc * (disc ** (-power)) * sign
        return acc


@dataclass
class MonomialMatrix:
    """sum_i coeff[i] * E_{target[i], i} over the index set (coefficients formal)."""

    target: dict
    coeff: dict


def build_m_matrices(descent, reference=None):
    indices = descent.table.indices
    ref = reference if reference is not None else descent.table.reference
    out = {}
    for g in descent.subgroup:
        coeff = {i: descent.unit_factor(g, i, ref) for i in indices}
        for i in indices:
            for j in indices:
                want = descent.unit_factor(g, i, j)
                got = coeff[i] / coeff[j]
                if got != want and descent.evaluate(got) != descent.evaluate(want):
                    raise InconsistentScalars("m(g) scalars depend on the path", g=g)
        out[g] = MonomialMatrix(dict(descent.action[g]), coeff)
    return out


@dataclass
class Cocycle2:
    group: object
    subgroup: list
    values: dict
    formal: dict

    def __call__(self, g, h):
        return self.values[(g, h)]


def extract_cocycle(descent, matrices):
    group = descent.group
    sub = descent.subgroup
    indices = descent.table.indices
    formal = {}
    values = {}
    for g in sub:
        mg = matrices[g]
        for h in sub:
            gh = group.compose(g, h)
            mh, mgh = matrices[h], matrices[gh]
            scalar = None
            exact = None
            for j in indices:
                if mgh.target[j] != mg.target[mh.target[j]]:
                    raise NonScalarProduct("index permutations do not compose")
                val = mgh.coeff[j] / (mg.coeff[mh.target[j]] * descent.act(g, mh.coeff[j]))
                if scalar is None:
                    scalar = val
                elif val != scalar:
                    if exact is None:
                        exact = descent.evaluate(scalar)
                    if descent.evaluate(val) != exact:
                        raise NonScalarProduct("cocycle product is not scalar", g=g, h=h)
            formal[(g, h)] = scalar
            values[(g, h)] = descent.evaluate(scalar)
    return Cocycle2(group, list(sub), values, formal)


def verify_cocycle(cocycle):
    """Twisted 2-cocycle identity on all triples (exact arithmetic in L)."""
    group = cocycle.group
    sub = cocycle.subgroup
    v = cocycle.values
    conj = {}
    for (b, c), val in v.items():
        for a in sub:
            perm = group.elements[a].perm
            conj.setdefault((b, c, perm), val.conj(perm))
    for a in sub:
        perm = group.elements[a].perm
        for b in sub:
            ab = group.compose(a, b)
            left0 = v[(a, b)]
            for c in sub:
                bc = group.compose(b, c)
                if left0 * v[(ab, c)] != conj[(b, c, perm)] * v[(a, bc)]:
                    return False
    return True

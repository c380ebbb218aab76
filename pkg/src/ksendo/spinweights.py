"""Highest-weight labels of the restricted spin (or exterior) representation,
their dimensions and multiplicities, and the Galois action on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import comb

from .errors import AccountingError, ValidationError

TOTALLY_REAL = "totally_real"
CM = "cm"
SPIN = "SPIN"


@dataclass
class FormInput:
    kind: str
    base: object
    diag: list
    theta_sq: object = None
    m: int = field(init=False)
    r: int = field(init=False)
    l: int = field(init=False)

    def __post_init__(self):
        if self.kind not in (TOTALLY_REAL, CM):
            raise ValidationError(f"unknown kind {self.kind!r}")
        self.m = len(self.diag)
        self.r = self.base.degree
        self.l = self.m // 2
        if self.kind == TOTALLY_REAL and self.m < 5:
            raise ValidationError("totally real forms need m >= 5 (smaller m is a degenerate case)",
                                  m=self.m)
        if self.kind == CM:
            floor = 2 if self.r >= 2 else 3
            if self.m < floor:
                raise ValidationError(f"CM forms need m >= {floor} for r = {self.r}", m=self.m)
            if self.theta_sq is None or self.theta_sq.is_zero():
                raise ValidationError("CM forms need a nonzero theta_sq")
        if any(d.is_zero() for d in self.diag):
            raise ValidationError("diagonal entries must be nonzero")

    @property
    def odd(self):
        return self.m % 2 == 1

    @property
    def dim_q(self):
        return self.m * self.r * (2 if self.kind == CM else 1)

    def radicands(self):
        """L-elements whose square roots the splitting field needs."""
        out = []
        for d in self.diag:
            for k in range(self.r):
                out.append(d.conj(k))
        if self.kind == CM:
            for k in range(self.r):
                out.append(self.theta_sq.conj(k))
        return out


def highest_weight_set(form):
    if form.kind == CM:
        return list(product(range(form.m + 1), repeat=form.r))
    if form.odd:
        return [SPIN]
    return list(product((1, -1), repeat=form.r))


def block_dim(tag, form):
    if form.kind == CM:
        d = 1
        for j in tag:
            d *= comb(form.m, j)
        return d
    per_block = 2 ** form.l if form.odd else 2 ** (form.l - 1)
    return per_block ** form.r


def weight_multiplicity(form):
    if form.kind == CM:
        mult = 2 ** (form.m * form.r - 1)
    else:
        mult = 2 ** (form.m * form.r - 1 - form.l * form.r)
    total = sum(mult * block_dim(tag, form) for tag in highest_weight_set(form))
    if total != 2 ** (form.dim_q - 1):
        raise AccountingError("dimension accounting failed", total=total,
                              expected=2 ** (form.dim_q - 1))
    return mult


class BlockSigns:
    """Per (g, block k) sign data: how g moves the isotropic lines of block k.

    ``pair[g][k][i]`` is the sign of g on Gamma_{i+1} of block k relative to the
    same quantity of block g.k; ``center[g][k]`` is the sign on sqrt(sigma_k d_{l+1})
    (odd m) and ``theta[g][k]`` the sign on theta (CM).
    """

    def __init__(self, form, group):
        self.form = form
        self.group = group
        tower = group.tower
        base = tower.base
        m, l, r = form.m, form.l, form.r
        self.block_map = [[base.compose(g.perm, k) for k in range(r)] for g in group.elements]

        def root(u):
            w = tower.sqrt(u)
            if w is None:
                raise ValidationError("splitting field is missing a square root", radicand=str(u))
            return w

        def sign_of(a, b):
            if a == b:
                return 1
            if a == -b:
                return -1
            raise AssertionError("Galois image is not +- the expected value")

        gammas = []
        centers = []
        thetas = []
        for k in range(r):
            row = []
            if form.kind != CM:
                for i in range(l):
                    d_i = form.diag[i].conj(k)
                    d_j = form.diag[m - 1 - i].conj(k)
                    row.append(-(root(d_i) * root(-d_j)))
            gammas.append(row)
            if form.kind != CM and form.odd:
                centers.append(root(form.diag[l].conj(k)))
            if form.kind == CM:
                thetas.append(root(form.theta_sq.conj(k)))
        self.gamma_values = gammas
        self.pair = []
        self.center = []
        self.theta = []
        for gi, g in enumerate(group.elements):
            bm = self.block_map[gi]
            self.pair.append([
                tuple(sign_of(group.apply(g, gammas[k][i]), gammas[bm[k]][i]) for i in range(len(gammas[k])))
                for k in range(r)])
            if centers:
                self.center.append([sign_of(group.apply(g, centers[k]), centers[bm[k]]) for k in range(r)])
            if thetas:
                self.theta.append([sign_of(group.apply(g, thetas[k]), thetas[bm[k]]) for k in range(r)])

    def flips_semispin(self, g, k):
        return sum(1 for s in self.pair[g][k] if s < 0) % 2 == 1


def galois_act_on_tag(signs, g, tag):
    """Image of a highest-weight tag under the group element with index g."""
    form = signs.form
    if form.kind != CM and form.odd:
        return tag
    bm = signs.block_map[g]
    out = [None] * form.r
    for k, val in enumerate(tag):
        if form.kind == CM:
            out[bm[k]] = val if signs.theta[g][k] > 0 else form.m - val
        else:
            out[bm[k]] = -val if signs.flips_semispin(g, k) else val
    return tuple(out)


def format_tag(tag, form):
    if tag == SPIN:
        return "spin"
    if form.kind == CM:
        return "wedge(" + ",".join(str(j) for j in tag) + ")"
    return "ω(" + ",".join("+" if s > 0 else "-" for s in tag) + ")"

"""Explicit Galois group of a radical tower F over Q."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .errors import InconsistentTower


@dataclass(frozen=True, order=True)
class GaloisElement:
    """Automorphism g of F: g restricts to conj map ``perm`` on L and sends
    sqrt(u_j) to (-1)^{bit j of signs} * sqrt(conj_perm(u_j)) (canonical root)."""

    perm: int
    signs: int


class GaloisGroup:
    def __init__(self, tower):
        self.tower = tower
        base = tower.base
        t = tower.t
        self._images = {}
        elements = []
        for perm in range(base.degree):
            roots = []
            for u in tower.radicands:
                w = tower.sqrt(u.conj(perm))
                if w is None:
                    raise InconsistentTower("conjugate radicand has no square root in F",
                                            radicand=str(u), perm=perm)
                roots.append(w)
            for signs in range(1 << t):
                g = GaloisElement(perm, signs)
                imgs = [(-w if signs >> j & 1 else w) for j, w in enumerate(roots)]
                self._images[g] = imgs
                elements.append(g)
        self.elements = elements
        self.index = {g: k for k, g in enumerate(elements)}
        self.identity = GaloisElement(0, 0)
        self._mask_images = {}
        self._check_relations()
        self._table = [[None] * len(elements) for _ in elements]
        self._inv = [None] * len(elements)
        self.generators = self._generators()

    # structure -----------------------------------------------------------
    @property
    def order(self):
        return len(self.elements)

    def _check_relations(self):
        tower = self.tower
        for u, mask, w in tower.relations:
            lhs = tower.monomial(mask, w)
            for g in self.elements:
                if self.apply(g, lhs) * self.apply(g, lhs) != tower.lift(u.conj(g.perm)):
                    raise InconsistentTower("relation not respected", radicand=str(u))

    def mask_image(self, g, mask):
        key = (g, mask)
        img = self._mask_images.get(key)
        if img is None:
            img = self.tower.one()
            for j, w in enumerate(self._images[g]):
                if mask >> j & 1:
                    img = img * w
            self._mask_images[key] = img
        return img

    def apply(self, g, x):
        """act_on_f: image of an FElement (or LElement) under g."""
        tower = self.tower
        if not hasattr(x, "tower"):
            return x.conj(g.perm)
        acc = tower.zero()
        for mask, c in x.coords.items():
            acc = acc + self.mask_image(g, mask) * c.conj(g.perm)
        return acc

    def compose(self, a, b):
        """Index of g_a o g_b."""
        cached = self._table[a][b]
        if cached is not None:
            return cached
        ga, gb = self.elements[a], self.elements[b]
        base = self.tower.base
        perm = base.compose(ga.perm, gb.perm)
        signs = 0
        for j, u in enumerate(self.tower.radicands):
            img = self.apply(ga, self._images[gb][j])
            canon = self.tower.sqrt(u.conj(perm))
            if img == -canon:
                signs |= 1 << j
            elif img != canon:
                raise InconsistentTower("composition left the canonical radical set")
        result = self.index[GaloisElement(perm, signs)]
        self._table[a][b] = result
        return result

    def mul(self, g, h):
        return self.elements[self.compose(self.index[g], self.index[h])]

    def inverse(self, a):
        if self._inv[a] is None:
            for b in range(self.order):
                if self.compose(a, b) == 0:
                    self._inv[a] = b
                    self._inv[b] = a
                    break
        return self._inv[a]

    def _generators(self):
        gens = []
        span = {0}
        for k in range(self.order):
            if k not in span:
                gens.append(k)
                span = self.closure(gens)
        return gens

    def closure(self, gens):
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = self.compose(g, a)
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return seen

    def is_abelian(self):
        n = self.order
        return all(self.compose(a, b) == self.compose(b, a) for a in range(n) for b in range(n))

    def element_by_action(self, perm, radical_signs):
        return self.index[GaloisElement(perm, radical_signs)]

    def describe(self, a):
        g = self.elements[a]
        flips = [j for j in range(self.tower.t) if g.signs >> j & 1]
        return {"perm": g.perm, "flips": flips}


def build_group(tower):
    return GaloisGroup(tower)


def act_on_f(group, g, x):
    if isinstance(g, int):
        g = group.elements[g]
    return group.apply(g, x)


def orbit_and_stabilizer(group_elements, compose, action, seed, identity=0):
    """Orbit of ``seed`` and its stabilizer under a finite group action.

    ``group_elements`` is a list of element indices, ``action(g, x)`` the action.
    """
    orbit = []
    seen = set()
    stab = []
    for g in group_elements:
        y = action(g, seed)
        if y not in seen:
            seen.add(y)
            orbit.append(y)
        if y == seed:
            stab.append(g)
    if len(orbit) * len(stab) != len(group_elements):
        raise AssertionError("orbit-stabilizer count failed")
    return orbit, stab


# characters and fixed fields ----------------------------------------------

def characters(group, subgroup=None):
    """All homomorphisms chi: subgroup -> {0,1} (additive), as dicts index -> bit."""
    members = sorted(subgroup) if subgroup is not None else list(range(group.order))
    gens = []
    span = {0}
    for k in members:
        if k not in span:
            gens.append(k)
            span = group.closure(gens)
    chars = []
    for bits in range(1 << len(gens)):
        chi = {0: 0}
        frontier = [0]
        ok = True
        while frontier and ok:
            nxt = []
            for a in frontier:
                for gi, g in enumerate(gens):
                    b = group.compose(g, a)
                    v = (chi[a] + (bits >> gi & 1)) % 2
                    if b in chi:
                        if chi[b] != v:
                            ok = False
                            break
                    else:
                        chi[b] = v
                        nxt.append(b)
                if not ok:
                    break
            frontier = nxt
        if ok and all(chi[group.compose(a, b)] == (chi[a] + chi[b]) % 2
                      for a in members for b in gens):
            chars.append(chi)
    return chars


def reynolds_square(group, members, chi):
    """Nonzero y in F with g(y) = (-1)^chi(g) y for g in ``members``; returns y."""
    for x in group.tower.elements_basis():
        y = group.tower.zero()
        for g in members:
            img = group.apply(group.elements[g], x)
            y = y - img if chi[g] else y + img
        if not y.is_zero():
            return y
    raise AssertionError("character has no eigenvector")


def squarefree_part(q):
    q = Fraction(q)
    n = q.numerator * q.denominator
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
        if n % p == 0:
            out *= p
            n //= p
        p += 1
    return sign * out * n


def _is_square_int(n):
    return n >= 0 and isqrt(n) ** 2 == n


@dataclass
class FieldDescription:
    degree: int
    l_degree: int
    full_l: bool
    quadratic: list = field(default_factory=list)
    complete: bool = True
    name: str = "Q"

    def to_dict(self):
        return {"name": self.name, "degree": self.degree, "complete": self.complete,
                "quadratic_generators": self.quadratic}


def _l_fixed_degree(group, members):
    perms = {group.elements[g].perm for g in members}
    return group.tower.base.degree // len(perms)


def fixed_field(group, subgroup):
    """Describe the fixed field of ``subgroup`` (iterable of element indices)."""
    members = sorted(set(subgroup))
    n = group.order
    if n % len(members):
        raise ValueError("not a subgroup")
    degree = n // len(members)
    member_set = set(members)
    r = group.tower.base.degree
    l_deg = _l_fixed_degree(group, members)
    full_l = l_deg == r
    # rational quadratic subfields: characters of the whole group trivial on the subgroup
    quads = []
    kernel = set(range(n))
    for chi in characters(group):
        if not any(chi.values()) or any(chi[g] for g in member_set):
            continue
        y = reynolds_square(group, range(n), chi)
        a = (y * y).to_L()
        sf = squarefree_part(a.rational())
        if sf not in quads:
            # skip products of already-found generators
            prod_set = {1}
            for q in quads:
                prod_set |= {squarefree_part(p * q) for p in prod_set}
            if sf in prod_set:
                continue
            quads.append(sf)
        kernel &= {g for g in range(n) if chi[g] == 0}
    perms_h = {group.elements[g].perm for g in members}
    seen_group = {g for g in kernel if group.elements[g].perm in perms_h}
    complete = len(seen_group) == len(members)
    quads.sort(key=lambda v: (abs(v), v))
    parts = [f"√{q}" for q in quads]
    if full_l and r > 1:
        parts.append(group.tower.base.name)
    elif 1 < l_deg < r:
        parts.append(f"L^H(deg {l_deg})")
    name = "Q" if not parts else "Q(" + ", ".join(parts) + ")"
    if not complete:
        name = f"degree-{degree} field containing {name}"
    return FieldDescription(degree=degree, l_degree=l_deg, full_l=full_l,
                            quadratic=quads, complete=complete, name=name)

"""Exact arithmetic in a Galois number field L = Q[t]/(f) and in towers
F = L(sqrt(u_1), ..., sqrt(u_t)) of square roots over it."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from math import gcd, isqrt, lcm

import sympy

from .errors import DomainError, ValidationError


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def _trim(coeffs):
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


class BaseField:
    """L = Q[t]/(f) for monic irreducible ``min_poly`` with explicit automorphisms.

    ``conjugates[i]`` lists the power-basis coordinates of the image of the
    generator under the i-th automorphism; the first one must be ``t``.
    """

    def __init__(self, min_poly, conjugates=None, name="ρ"):
        coeffs = [int(c) for c in min_poly]
        if len(coeffs) < 2 or coeffs[-1] != 1:
            raise ValidationError("minimal polynomial must be monic of degree >= 1",
                                  min_poly=list(coeffs))
        self.min_poly = tuple(coeffs)
        self.degree = len(coeffs) - 1
        self.name = name
        r = self.degree
        if r > 1:
            t = sympy.Symbol("t")
            poly = sympy.Poly(list(reversed(coeffs)), t)
            if not poly.is_irreducible:
                raise ValidationError("minimal polynomial is reducible over Q",
                                      min_poly=list(coeffs))
        if conjugates is None:
            if r != 1:
                raise ValidationError("conjugate maps are required when deg f > 1")
            conjugates = [[0]]
        if len(conjugates) != r:
            raise ValidationError("need exactly deg f conjugate maps",
                                  given=len(conjugates), degree=r)
        self._zero = tuple([Fraction(0)] * r)
        maps = []
        for c in conjugates:
            vec = [_frac(x) for x in c]
            if len(vec) > r:
                vec = self._reduce(vec)
            vec = vec + [Fraction(0)] * (r - len(vec))
            maps.append(tuple(vec))
        ident = tuple(Fraction(int(k == 1)) for k in range(r)) if r > 1 else (Fraction(0),)
        if r == 1:
            maps = [(Fraction(0),)]
        elif maps[0] != ident:
            raise ValidationError("first conjugate map must be the identity t")
        if len(set(maps)) != r:
            raise ValidationError("conjugate maps are not pairwise distinct")
        self.conj_images = maps
        # powers of each image, used to evaluate a(g_i(t))
        self._conj_powers = []
        for img in maps:
            if r == 1:
                self._conj_powers.append([(Fraction(1),)])
                continue
            powers = [tuple(Fraction(int(k == 0)) for k in range(r))]
            for _ in range(1, r):
                powers.append(self._mulvec(powers[-1], img))
            self._conj_powers.append(powers)
        for i, img in enumerate(maps):
            if r > 1 and any(self._eval_min_poly(i)):
                raise ValidationError("conjugate map is not a root of f", index=i)
        self._compose = self._composition_table()

    # raw vector helpers -------------------------------------------------
    def _reduce(self, coeffs):
        f = self.min_poly
        r = self.degree
        c = list(coeffs)
        for k in range(len(c) - 1, r - 1, -1):
            lead = c[k]
            if lead:
                for j in range(r):
                    c[k - r + j] -= lead * f[j]
            c[k] = Fraction(0)
        c = c[:r]
        return c + [Fraction(0)] * (r - len(c))

    def _mulvec(self, a, b):
        return tuple(self._reduce(_poly_mul(list(a), list(b))))

    def _apply_conj(self, i, coords):
        r = self.degree
        if i == 0 or r == 1:
            return tuple(coords)
        out = [Fraction(0)] * r
        for k, ck in enumerate(coords):
            if ck:
                for j, pj in enumerate(self._conj_powers[i][k]):
                    out[j] += ck * pj
        return tuple(out)

    def _eval_min_poly(self, i):
        r = self.degree
        acc = [Fraction(0)] * r
        f = self.min_poly
        img_pow = self._conj_powers[i]
        # f(g_i) = sum f_k g_i^k with g_i^r = g_i^{r-1} * g_i
        top = self._mulvec(img_pow[r - 1], self.conj_images[i])
        for k in range(r):
            for j in range(r):
                acc[j] += f[k] * img_pow[k][j]
        return [acc[j] + top[j] for j in range(r)]

    def _composition_table(self):
        r = self.degree
        index = {img: i for i, img in enumerate(self.conj_images)}
        table = [[0] * r for _ in range(r)]
        for i in range(r):
            for j in range(r):
                # (tau_i o tau_j)(t) = tau_i(g_j(t)) = g_j evaluated at g_i
                img = self._apply_conj(i, self.conj_images[j]) if r > 1 else (Fraction(0),)
                if img not in index:
                    raise ValidationError("conjugate maps are not closed under composition",
                                          pair=[i, j])
                table[i][j] = index[img]
        return table

    # public API -----------------------------------------------------------
    def compose(self, i, j):
        """Index of the automorphism tau_i o tau_j."""
        return self._compose[i][j]

    def inverse_index(self, i):
        for j in range(self.degree):
            if self._compose[i][j] == 0:
                return j
        raise AssertionError("automorphism without inverse")

    def element(self, coords):
        vals = [_frac(x) for x in coords]
        if len(vals) > self.degree:
            vals = self._reduce(vals)
        vals = vals + [Fraction(0)] * (self.degree - len(vals))
        return LElement(self, tuple(vals))

    def scalar(self, q):
        return LElement(self, (_frac(q),) + self._zero[1:])

    def zero(self):
        return LElement(self, self._zero)

    def one(self):
        return self.scalar(1)

    def gen(self):
        if self.degree == 1:
            raise ValidationError("L = Q has no generator")
        return self.element([0, 1])

    def basis(self):
        return [self.element([int(k == j) for k in range(self.degree)])
                for j in range(self.degree)]

    def __eq__(self, other):
        return (isinstance(other, BaseField) and self.min_poly == other.min_poly
                and self.conj_images == other.conj_images)

    def __hash__(self):
        return hash((self.min_poly, tuple(self.conj_images)))

    def __repr__(self):
        return f"BaseField(min_poly={list(self.min_poly)})"


class LElement:
    __slots__ = ("field", "coords", "_hash")

    def __init__(self, field, coords):
        self.field = field
        self.coords = coords
        self._hash = None

    def _coerce(self, other):
        if isinstance(other, LElement):
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return LElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LElement(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LElement(self.field, tuple(a * other for a in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LElement(self.field, self.field._mulvec(self.coords, other.coords))

    __rmul__ = __mul__

    def is_zero(self):
        return not any(self.coords)

    def is_rational(self):
        return not any(self.coords[1:])

    def rational(self):
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coords[0]

    def conj(self, i):
        return LElement(self.field, self.field._apply_conj(i, self.coords))

    def norm(self):
        acc = self
        for i in range(1, self.field.degree):
            acc = acc * self.conj(i)
        return acc.coords[0]

    def inverse(self):
        if self.is_zero():
            raise DomainError("inverse of zero in L")
        r = self.field.degree
        if r == 1:
            return LElement(self.field, (1 / self.coords[0],))
        cofactor = self.field.one()
        for i in range(1, r):
            cofactor = cofactor * self.conj(i)
        n = (self * cofactor).coords[0]
        return cofactor * (1 / n)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        acc = self.field.one()
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        return isinstance(other, LElement) and self.coords == other.coords

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coords)
        return self._hash

    def charpoly(self):
        """Characteristic polynomial over Q, ascending rational coefficients."""
        r = self.field.degree
        poly = [self.field.one()]
        for i in range(r):
            root = self.conj(i)
            nxt = [self.field.zero()] * (len(poly) + 1)
            for k, c in enumerate(poly):
                nxt[k + 1] = nxt[k + 1] + c
                nxt[k] = nxt[k] - c * root
            poly = nxt
        return [c.rational() for c in poly]

    def to_json(self):
        return [str(c) for c in self.coords]

    def __repr__(self):
        return f"LElement({format_poly(self.coords, self.field.name)})"

    def __str__(self):
        return format_poly(self.coords, self.field.name)


def format_poly(coords, var="ρ"):
    terms = []
    for k, c in enumerate(coords):
        if not c:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    sign, body = terms[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


# square roots in L ------------------------------------------------------

def _integer_poly(coeffs):
    den = 1
    for c in coeffs:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints] if g else ints


def _even_odd_parts(coeffs):
    even = [coeffs[k] for k in range(0, len(coeffs), 2)]
    odd = [coeffs[k] for k in range(1, len(coeffs), 2)]
    return even, odd


def _eval_poly_at(coeffs, x):
    acc = x.field.zero()
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _rational_sqrt(q):
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _shifts(field):
    r = field.degree
    for k in range(1, r * r + 2):
        yield field.element([k ** j for j in range(r)])


@lru_cache(maxsize=None)
def _sqrt_cached(field, coords):
    w = LElement(field, coords)
    if field.degree == 1:
        root = _rational_sqrt(coords[0])
        return None if root is None else (root,)
    T = sympy.Symbol("T")
    for y in _shifts(field):
        shifted = w * y * y
        chi = shifted.charpoly()
        stretched = []
        for c in chi:
            stretched.extend([c, Fraction(0)])
        stretched = stretched[:-1]
        ints = _integer_poly(stretched)
        poly = sympy.Poly(list(reversed(ints)), T)
        _, factors = poly.factor_list()
        candidate_degree_found = False
        for fac, _mult in factors:
            deg = fac.degree()
            if field.degree % deg:
                continue
            candidate_degree_found = True
            asc = [Fraction(int(c)) for c in reversed(fac.all_coeffs())]
            even, odd = _even_odd_parts(asc)
            if not any(odd):
                continue
            denom = _eval_poly_at(odd, shifted)
            if denom.is_zero():
                continue
            x = -_eval_poly_at(even, shifted) / denom
            if x * x == shifted:
                return (x / y).coords
        if not candidate_degree_found:
            return None
    raise AssertionError("square-root search exhausted its shifts")


def is_square_in_L(w):
    """Return x with x*x == w if w is a square in L, else None.

    Candidate roots come from factoring the characteristic polynomial of w
    evaluated at T^2; every returned root is verified by squaring.
    """
    if w.is_zero():
        raise DomainError("square test of zero")
    coords = _sqrt_cached(w.field, w.coords)
    if coords is None:
        return None
    x = LElement(w.field, coords)
    if w.field.degree == 1 or _leading_negative(x):
        x = x if w.field.degree == 1 else -x
    assert x * x == w
    return x


def _leading_negative(x):
    for c in reversed(x.coords):
        if c:
            return c < 0
    return False


def l_arith(a, b=None, op="add", index=None):
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "conj":
        return a.conj(index)
    raise ValueError(f"unknown operation {op!r}")


# radical tower ------------------------------------------------------------

def _popcount(x):
    return bin(x).count("1")


class FElement:
    """Element of F written as sum over subsets S of coeff_S * prod_{j in S} sqrt(u_j)."""

    __slots__ = ("tower", "coords", "_hash")

    def __init__(self, tower, coords):
        self.tower = tower
        self.coords = {m: c for m, c in coords.items() if not c.is_zero()}
        self._hash = None

    def _coerce(self, other):
        if isinstance(other, FElement):
            return other
        if isinstance(other, LElement):
            return self.tower.lift(other)
        if isinstance(other, (int, Fraction)):
            return self.tower.lift(self.tower.base.scalar(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.coords)
        for m, c in other.coords.items():
            out[m] = out[m] + c if m in out else c
        return FElement(self.tower, out)

    __radd__ = __add__

    def __neg__(self):
        return FElement(self.tower, {m: -c for m, c in self.coords.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        tower = self.tower
        out = {}
        for m1, c1 in self.coords.items():
            for m2, c2 in other.coords.items():
                c = c1 * c2
                both = m1 & m2
                if both:
                    c = c * tower.monomial_square(both)
                key = m1 ^ m2
                out[key] = out[key] + c if key in out else c
        return FElement(tower, out)

    __rmul__ = __mul__

    def is_zero(self):
        return not self.coords

    def flip(self, j):
        bit = 1 << j
        return FElement(self.tower, {m: (-c if m & bit else c) for m, c in self.coords.items()})

    def inverse(self):
        if self.is_zero():
            raise DomainError("inverse of zero in F")
        num = self.tower.one()
        y = self
        for j in range(len(self.tower.radicands)):
            yc = y.flip(j)
            num = num * yc
            y = y * yc
        base = y.coords.get(0)
        assert base is not None and len(y.coords) == 1
        return num * self.tower.lift(base.inverse())

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        acc = self.tower.one()
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.coords == other.coords

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.coords.items()))
        return self._hash

    def is_monomial(self):
        return len(self.coords) == 1

    def in_L(self):
        return not self.coords or set(self.coords) == {0}

    def to_L(self):
        if not self.in_L():
            raise ValueError("element does not lie in L")
        return self.coords.get(0, self.tower.base.zero())

    def __repr__(self):
        return f"FElement({self})"

    def __str__(self):
        return self.tower.format(self)


def f_arith(a, b=None, op="add"):
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "sub":
        return a - b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


class RadicalTower:
    """Multiquadratic extension of L with a multiplicatively independent radicand basis.

    ``expressions`` maps every requested radicand to (coefficient, mask) with
    sqrt(u) = coefficient * prod_{j in mask} sqrt(u_j). ``relations`` keeps the
    requested radicands that turned out to be dependent on the stored basis.
    """

    def __init__(self, base):
        self.base = base
        self.radicands = []
        self.relations = []
        self.expressions = {}
        self._square_cache = {}
        self._sqrt_cache = {}

    @property
    def t(self):
        return len(self.radicands)

    @property
    def degree(self):
        return self.base.degree << self.t

    def monomial_product(self, mask):
        acc = self.base.one()
        j = 0
        while mask:
            if mask & 1:
                acc = acc * self.radicands[j]
            mask >>= 1
            j += 1
        return acc

    def monomial_square(self, mask):
        val = self._square_cache.get(mask)
        if val is None:
            val = self.monomial_product(mask)
            self._square_cache[mask] = val
        return val

    def lift(self, a):
        return FElement(self, {0: a})

    def one(self):
        return self.lift(self.base.one())

    def zero(self):
        return FElement(self, {})

    def radical(self, j):
        return FElement(self, {1 << j: self.base.one()})

    def monomial(self, mask, coeff=None):
        return FElement(self, {mask: coeff if coeff is not None else self.base.one()})

    def locate(self, u):
        """Find (w, mask) with u = w^2 * prod_{mask} u_j, or None."""
        key = u.coords
        if key in self._sqrt_cache:
            return self._sqrt_cache[key]
        if u.is_zero():
            raise DomainError("square root of zero requested")
        found = None
        for mask in range(1 << self.t):
            w = is_square_in_L(u / self.monomial_product(mask))
            if w is not None:
                found = (w, mask)
                break
        self._sqrt_cache[key] = found
        return found

    def sqrt(self, u):
        """A square root of u in F as an FElement, or None when u is not a square in F."""
        if isinstance(u, (int, Fraction)):
            u = self.base.scalar(u)
        hit = self.locate(u)
        if hit is None:
            return None
        w, mask = hit
        return self.monomial(mask, w)

    def adjoin(self, u):
        hit = self.locate(u)
        if hit is not None:
            w, mask = hit
            if mask:
                self.relations.append((u, mask, w))
            self.expressions[u] = (w, mask)
            return False
        self.radicands.append(u)
        self._sqrt_cache.clear()
        self.expressions[u] = (self.base.one(), 1 << (self.t - 1))
        return True

    def elements_basis(self):
        """Q-basis of F: rho^k * monomial."""
        out = []
        for mask in range(1 << self.t):
            for b in self.base.basis():
                out.append(self.monomial(mask, b))
        return out

    def format(self, x):
        if x.is_zero():
            return "0"
        parts = []
        for mask in sorted(x.coords):
            c = x.coords[mask]
            rad = "*".join(f"√({self.radicands[j]})" for j in range(self.t) if mask >> j & 1)
            coeff = str(c)
            if not rad:
                parts.append(coeff)
            elif coeff == "1":
                parts.append(rad)
            else:
                parts.append(f"({coeff})*{rad}")
        return " + ".join(parts)

    def summary(self):
        return {
            "radicands": [str(u) for u in self.radicands],
            "relations": [
                {"radicand": str(u),
                 "monomial": [j for j in range(self.t) if mask >> j & 1],
                 "witness": str(w)}
                for u, mask, w in self.relations
            ],
            "degree_over_Q": self.degree,
        }


def build_tower(base, requested, adjoin_minus_one=True):
    """Greedy independent basis of radicands mod squares of L; -1 is always adjoined last."""
    tower = RadicalTower(base)
    seen = []
    items = list(requested)
    if adjoin_minus_one:
        items.append(base.scalar(-1))
    for u in items:
        if isinstance(u, (int, Fraction)):
            u = base.scalar(u)
        if u.is_zero():
            raise DomainError("zero radicand")
        if u in seen:
            continue
        seen.append(u)
        tower.adjoin(u)
    return tower

"""Galois orbits of highest-weight tags, stabilizer multiplicities, and the
assembly of the final product of matrix algebras."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import AccountingError, NonIntegralMultiplicity, SizeLimit
from .galois import fixed_field, orbit_and_stabilizer
from .spinweights import (CM, SPIN, block_dim, format_tag, galois_act_on_tag,
                          highest_weight_set, weight_multiplicity)


def base_index(form):
    """Reference EndoIndex: every block carries the all-plus label."""
    if form.kind == CM:
        return (1,) * form.r
    width = form.l + (1 if form.odd else 0)
    return ((1,) * width,) * form.r


def act_on_index(signs, g, index):
    """Formal Galois action on ideal-line labels, one label per block."""
    form = signs.form
    bm = signs.block_map[g]
    out = [None] * form.r
    for k, label in enumerate(index):
        if form.kind == CM:
            out[bm[k]] = label * signs.theta[g][k]
            continue
        pairs = signs.pair[g][k]
        new = [a * c for a, c in zip(label, pairs)]
        if form.odd:
            new.append(label[-1] * signs.center[g][k])
        out[bm[k]] = tuple(new)
    return tuple(out)


def _tag_key(tag):
    if tag == SPIN:
        return ()
    return tuple(tag) if not all(t in (1, -1) for t in tag) else tuple(0 if t > 0 else 1 for t in tag)


@dataclass
class FactorData:
    representative: object
    orbit: list
    stabilizer: list
    center: object
    M: int
    d: int
    index_set: list
    n: int
    matrix_size: int = None
    extras: dict = field(default_factory=dict)


def stabilizer_multiplicity(form, group, signs, stabilizer):
    """Stabilizer-ratio multiplicity of the ideal-sum construction."""
    base = base_index(form)
    line_stab = {g for g in range(group.order) if act_on_index(signs, g, base) == base}
    inter = [g for g in stabilizer if g in line_stab]
    if len(stabilizer) % len(inter):
        raise AccountingError("stabilizer intersection does not divide")
    return len(stabilizer) // len(inter)


def decompose(form, group, signs):
    tags = highest_weight_set(form)
    remaining = sorted(tags, key=_tag_key)
    everyone = list(range(group.order))
    M = weight_multiplicity(form)
    factors = []
    while remaining:
        seed = remaining[0]
        orbit, stab = orbit_and_stabilizer(everyone, group.compose,
                                           lambda g, t: galois_act_on_tag(signs, g, t), seed)
        orbit = sorted(orbit, key=_tag_key)
        rep = orbit[0]
        if rep != seed:
            raise AssertionError("orbit representative ordering")
        base = base_index(form)
        idx_orbit, _ = orbit_and_stabilizer(stab, group.compose,
                                            lambda g, x: act_on_index(signs, g, x), base)
        n = stabilizer_multiplicity(form, group, signs, stab)
        if n != len(idx_orbit):
            raise AccountingError("index set size disagrees with stabilizer formula")
        center = fixed_field(group, stab)
        if center.degree != len(orbit):
            raise AccountingError("center degree differs from orbit length")
        factors.append(FactorData(representative=rep, orbit=orbit, stabilizer=sorted(stab),
                                  center=center, M=M, d=block_dim(rep, form),
                                  index_set=sorted(idx_orbit, key=_index_key), n=n))
        taken = set(orbit)
        remaining = [t for t in remaining if t not in taken]
    return factors


def _index_key(index):
    if index and isinstance(index[0], tuple):
        return tuple(tuple(0 if s > 0 else 1 for s in label) for label in index)
    return tuple(0 if s > 0 else 1 for s in index)


@dataclass
class AlgebraFactor:
    matrix_size: int
    center: str
    center_degree: int
    division_algebra: str
    delta: int
    orbit_size: int

    def to_dict(self):
        return {"matrix_size": self.matrix_size, "center": self.center,
                "center_degree": self.center_degree,
                "division_algebra": self.division_algebra, "delta": self.delta}

    def render(self):
        size = "?" if self.matrix_size is None else str(self.matrix_size)
        if self.division_algebra == "split":
            inner = self.center
        else:
            inner = self.division_algebra
        return f"Mat_{size}({inner})"


@dataclass
class AlgebraDescriptor:
    factors: list
    commutant_dim: int
    expected_commutant_dim: int

    def summary(self):
        return "End(KS(X))_Q ≅ " + " × ".join(f.render() for f in self.factors)

    def to_dict(self):
        return {"factors": [f.to_dict() for f in self.factors],
                "commutant_dim": self.commutant_dim,
                "summary": self.summary()}


def assemble_algebra(form, factors, brauer_results):
    out = []
    for fac, res in zip(factors, brauer_results):
        delta = res.delta
        if delta is None:
            out.append(AlgebraFactor(None, fac.center.name, fac.center.degree,
                                     res.describe(fac.center), None, len(fac.orbit)))
            continue
        if fac.M % delta:
            raise NonIntegralMultiplicity("division algebra degree does not divide M",
                                          M=fac.M, delta=delta)
        fac.matrix_size = fac.M // delta
        out.append(AlgebraFactor(fac.matrix_size, fac.center.name, fac.center.degree,
                                 res.describe(fac.center), delta, len(fac.orbit)))
    expected = sum(fac.M ** 2 for fac in factors for _ in fac.orbit)
    if any(f.delta is None for f in out):
        total = None
    else:
        total = sum((f.matrix_size * f.delta) ** 2 * f.center_degree for f in out)
        if total != expected:
            raise AccountingError("commutant dimension identity failed",
                                  got=total, expected=expected)
    return AlgebraDescriptor(out, total, expected)


def describe_tag(tag, form):
    return format_tag(tag, form)


# brute-force commutant (test oracle) ---------------------------------------------

ORACLE_MAX_DIM = 8


def _q_space(form):
    """Q-basis of V as (block i, L-coordinate t, imaginary part?) with coordinate maps."""
    base = form.base
    parts = (0, 1) if form.kind == CM else (0,)
    labels = [(i, part, t) for i in range(form.m) for part in parts for t in range(form.r)]
    return labels, {lab: n for n, lab in enumerate(labels)}


def _vec_to_elems(form, vec, pos):
    """Coordinate vector -> list of (a_i, b_i) in L with x_i = a_i + b_i theta."""
    base = form.base
    out = []
    for i in range(form.m):
        a = base.element([vec[pos[(i, 0, t)]] for t in range(form.r)])
        b = base.zero()
        if form.kind == CM:
            b = base.element([vec[pos[(i, 1, t)]] for t in range(form.r)])
        out.append((a, b))
    return out


def _elems_to_vec(form, elems, pos):
    vec = [Fraction(0)] * len(pos)
    for i, (a, b) in enumerate(elems):
        for t in range(form.r):
            vec[pos[(i, 0, t)]] = a.coords[t]
            if form.kind == CM:
                vec[pos[(i, 1, t)]] = b.coords[t]
    return vec


def _trace(x):
    return sum((x.conj(k) for k in range(x.field.degree)), x.field.zero()).rational()


def _bilinear(form, x, y):
    """Trace of the (hermitian or symmetric) form down to Q."""
    tsq = form.theta_sq
    total = Fraction(0)
    for d, (a, b), (c, e) in zip(form.diag, x, y):
        if form.kind == CM:
            total += 2 * _trace(d * (a * c - tsq * b * e))
        else:
            total += _trace(d * a * c)
    return total


def _lie_basis(form):
    """Q-basis of the L-linear (K-linear) skew maps, as functions on element lists."""
    base = form.base
    tsq = form.theta_sq
    m = form.m
    maps = []

    def times_theta(a, b):
        return (tsq * b, a)

    for w in base.basis():
        for i, j in combinations(range(m), 2):
            def pair_map(x, i=i, j=j, w=w, imag=False):
                out = [(base.zero(), base.zero()) for _ in range(m)]
                ai, bi = x[i]
                aj, bj = x[j]
                # x -> h(x, e_j) e_i - h(x, e_i) e_j
                ci = (w * form.diag[j] * aj, w * form.diag[j] * bj)
                cj = (-(w * form.diag[i] * ai), -(w * form.diag[i] * bi))
                if imag:
                    ci = times_theta(*ci)
                    cj = times_theta(*(-cj[0], -cj[1]))
                out[i] = ci
                out[j] = cj
                return out
            maps.append(pair_map)
            if form.kind == CM:
                maps.append(lambda x, f=pair_map: f(x, imag=True))
        if form.kind == CM:
            for i in range(m):
                def diag_map(x, i=i, w=w):
                    out = [(base.zero(), base.zero()) for _ in range(m)]
                    a, b = x[i]
                    out[i] = times_theta(w * a, w * b)
                    return out
                maps.append(diag_map)
    return maps


def _orthogonalize(gram):
    """Columns of P (in the original basis) spanning an orthogonal basis, and q values."""
    n = len(gram)
    vecs = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]

    def b(u, v):
        return sum(u[i] * gram[i][j] * v[j] for i in range(n) for j in range(n) if u[i] and v[j])

    out, qs = [], []
    pool = vecs
    while pool:
        pick = next((k for k, u in enumerate(pool) if b(u, u) != 0), None)
        if pick is None:
            k2 = next(((a, c) for a in range(len(pool)) for c in range(len(pool))
                       if a != c and b(pool[a], pool[c]) != 0), None)
            if k2 is None:
                raise AccountingError("degenerate trace form")
            a, c = k2
            pool[a] = [x + y for x, y in zip(pool[a], pool[c])]
            continue
        u = pool.pop(pick)
        qu = b(u, u)
        out.append(u)
        qs.append(qu)
        pool = [[x - b(u, v) / qu * y for x, y in zip(v, u)] for v in pool]
    return out, qs


def _solve_columns(cols, target):
    """Coordinates of ``target`` in the basis ``cols`` (exact Gauss-Jordan)."""
    n = len(cols)
    rows = [[cols[j][i] for j in range(n)] + [target[i]] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if rows[r][c] != 0)
        rows[c], rows[p] = rows[p], rows[c]
        piv = rows[c][c]
        rows[c] = [x / piv for x in rows[c]]
        for r in range(n):
            if r != c and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return [rows[i][n] for i in range(n)]


def _cl_mul(s, t, qs):
    """e_S e_T in the Clifford algebra with e_i^2 = q_i: (coefficient, mask)."""
    sign = 0
    for i in range(len(qs)):
        if t >> i & 1:
            sign += bin(s >> (i + 1)).count("1")
    coeff = Fraction(-1 if sign % 2 else 1)
    both = s & t
    for i in range(len(qs)):
        if both >> i & 1:
            coeff *= qs[i]
    return coeff, s ^ t


def _cl_product(x, y, qs):
    out = {}
    for s, a in x.items():
        for t, b in y.items():
            c, u = _cl_mul(s, t, qs)
            out[u] = out.get(u, 0) + a * b * c
    return {k: v for k, v in out.items() if v}


def _rank(rows, ncols):
    """Rank of a sparse rational system given as dicts column -> value."""
    pivots = {}
    rank = 0
    for row in rows:
        row = dict(row)
        while row:
            col = max(row)
            if col not in pivots:
                piv = row[col]
                pivots[col] = {k: v / piv for k, v in row.items()}
                rank += 1
                break
            f = row[col]
            for k, v in pivots[col].items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        if rank == ncols:
            break
    return rank


def oracle_commutant_dim(form):
    """Q-dimension of the commutant of the Lie algebra acting on C^+(V) by left
    multiplication, computed by materializing C^+(V) over Q."""
    n = form.dim_q
    if n > ORACLE_MAX_DIM:
        raise SizeLimit("oracle only materializes Clifford algebras of small rank",
                        dim_q=n, limit=ORACLE_MAX_DIM)
    labels, pos = _q_space(form)
    unit = [[Fraction(int(a == b)) for a in range(n)] for b in range(n)]
    elems = [_vec_to_elems(form, u, pos) for u in unit]
    gram = [[_bilinear(form, x, y) for y in elems] for x in elems]
    cols, qs = _orthogonalize(gram)
    x_elems = []
    for fmap in _lie_basis(form):
        images = [_solve_columns(cols, _apply_map(form, fmap, c, pos)) for c in cols]
        # a[i][j]: coefficient of v_i in A v_j
        x = {}
        for i, j in combinations(range(n), 2):
            a_ij = images[j][i]
            if a_ij:
                x[(1 << i) | (1 << j)] = a_ij / (2 * qs[j])
        for k in range(n):
            v = {1 << k: Fraction(1)}
            comm = _cl_product(x, v, qs)
            for key, val in _cl_product(v, x, qs).items():
                comm[key] = comm.get(key, 0) - val
            comm = {key: val for key, val in comm.items() if val}
            expect = {1 << i: images[k][i] for i in range(n) if images[k][i]}
            if comm != expect:
                raise AccountingError("Lie algebra element does not match its Clifford image")
        x_elems.append(x)
    evens = [s for s in range(1 << n) if bin(s).count("1") % 2 == 0]
    epos = {s: k for k, s in enumerate(evens)}
    size = len(evens)
    rows = []
    for x in x_elems:
        # left multiplication: column b -> {row a: value}
        lmat = [{} for _ in range(size)]
        for b, t in enumerate(evens):
            for key, val in _cl_product(x, {t: Fraction(1)}, qs).items():
                lmat[b][epos[key]] = val
        lrows = [{} for _ in range(size)]
        for b in range(size):
            for a, val in lmat[b].items():
                lrows[a][b] = val
        # (Y L - L Y)[a][b] = sum_c Y[a][c] L[c][b] - L[a][c] Y[c][b]
        for a in range(size):
            for b in range(size):
                row = {}
                for c, val in lmat[b].items():
                    key = a * size + c
                    row[key] = row.get(key, 0) + val
                for c, val in lrows[a].items():
                    key = c * size + b
                    row[key] = row.get(key, 0) - val
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
    return size * size - _rank(rows, size * size)


def _apply_map(form, fmap, vec, pos):
    return _elems_to_vec(form, fmap(_vec_to_elems(form, vec, pos)), pos)

"""Embedded consistency checks behind ``ksendo selftest``."""

from __future__ import annotations

import random
import time

from .brauer import ramification, symbols_equal
from .decomp import oracle_commutant_dim
from .exactfield import BaseField
from .spinweights import CM, TOTALLY_REAL, FormInput, weight_multiplicity

RATIONALS = BaseField([0, 1])
CUBIC = BaseField([1, -3, 0, 1], [[0, 1, 0], [2, -1, -1], [-2, 0, 1]])


def cubic_example():
    """Rank-5 form (-rho, -rho, -1, -1, -1) over the cyclic cubic field."""
    rho = CUBIC.gen()
    minus_one = CUBIC.scalar(-1)
    return FormInput(TOTALLY_REAL, CUBIC, [-rho, -rho, minus_one, minus_one, minus_one])


def clifford_algebra_symbols(coeffs):
    """Quaternion symbols whose product is the class of C(<b_1, ..., b_2k>) over Q."""
    b = list(coeffs)
    out = []
    while len(b) >= 2:
        b1, b2 = b[0], b[1]
        out.append((b1, b2))
        b = [-b1 * b2 * x for x in b[2:]]
    return out


def even_clifford_symbols(diag):
    """Class of C^+(<a_1, ..., a_n>) for odd n, via C^+(q) = C(-a_1 <a_2, ..., a_n>)."""
    a1 = diag[0]
    return clifford_algebra_symbols([-a1 * x for x in diag[1:]])


def rational_form(diag, kind=TOTALLY_REAL, theta_sq=None):
    q = RATIONALS
    theta = None if theta_sq is None else q.scalar(theta_sq)
    return FormInput(kind, q, [q.scalar(x) for x in diag], theta)


def _check_symbols():
    return (symbols_equal((3, 3), (3, -1)) and symbols_equal((2, 2), None)
            and not symbols_equal((-1, -1), (2, 2)))


def _check_cubic_example():
    from .cli import analyze
    *_, algebra = analyze(cubic_example())
    return algebra.summary() == "End(KS(X))_Q ≅ Mat_256(Q)"


def _check_rational_classes(rng, trials=6):
    from .cli import analyze
    for _ in range(trials):
        diag = [rng.choice((-1, 1)) * rng.choice((1, 2, 3, 5, 6, 7)) for _ in range(5)]
        *_, results, _ = analyze(rational_form(diag))
        expected = ramification(even_clifford_symbols(diag))
        res = results[0]
        if res.delta != (2 if expected else 1):
            return False
        if res.delta == 2 and [str(p) for p in res.ramified] != [str(p) for p in expected]:
            return False
    return True


def _check_dimension_identity(rng, trials=20):
    for _ in range(trials):
        kind = rng.choice((TOTALLY_REAL, CM))
        m = rng.randint(5 if kind == TOTALLY_REAL else 3, 9)
        form = rational_form([rng.choice((-2, -1, 1, 3)) for _ in range(m)], kind,
                             -1 if kind == CM else None)
        weight_multiplicity(form)
    return True


def _check_oracle():
    return oracle_commutant_dim(rational_form([1, -1, 2, -3, 5])) == 16


CHECKS = [
    ("hilbert symbols", lambda rng: _check_symbols()),
    ("dimension identity", _check_dimension_identity),
    ("commutant oracle", lambda rng: _check_oracle()),
    ("rational brauer classes", _check_rational_classes),
    ("cubic example", lambda rng: _check_cubic_example()),
]


def run_all(seed=0, out=print):
    rng = random.Random(seed)
    ok = True
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        try:
            passed = bool(fn(rng))
        except Exception as exc:  # report every failing check, then exit nonzero
            passed = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        ok &= passed
        out(f"{'PASS' if passed else 'FAIL'}  {name}  [{time.perf_counter() - t0:.2f}s]")
    return ok

"""Command line entry point: ``ksendo compute`` and ``ksendo selftest``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .brauer import MonomialGroup, classify
from .cliffcocycle import (DescentData, atom_values, build_lambda, build_m_matrices,
                           check_lambda_consistency, extract_cocycle, verify_cocycle)
from .decomp import assemble_algebra, decompose, describe_tag, oracle_commutant_dim
from .errors import (AccountingError, KsendoError, SizeLimit, ValidationError,
                     VerificationFailure)
from .exactfield import BaseField, build_tower, is_square_in_L
from .galois import build_group
from .spinweights import CM, TOTALLY_REAL, BlockSigns, FormInput

DEFAULT_MAX_GROUP = 4096
EXIT_UNRESOLVED = 2


def _rational(x):
    if isinstance(x, bool):
        raise ValidationError("booleans are not rationals", value=x)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            raise ValidationError("malformed rational", value=x) from None
    raise ValidationError("rationals must be integers or 'p/q' strings", value=repr(x))


def _coords(field_, raw, what):
    if isinstance(raw, (int, str)):
        raw = [raw]
    if not isinstance(raw, list) or not raw:
        raise ValidationError(f"{what} must be a nonempty coordinate list", value=repr(raw))
    vals = [_rational(x) for x in raw]
    if len(vals) > field_.degree:
        raise ValidationError(f"{what} has more coordinates than [L:Q]", value=raw)
    return field_.element(vals)


@dataclass
class JobSpec:
    form: FormInput
    raw: dict
    assume_nonsquare: list = field(default_factory=list)
    max_group_order: int = DEFAULT_MAX_GROUP
    emit: str = "full"
    oracle: bool = False


def parse_job(doc):
    if not isinstance(doc, dict):
        raise ValidationError("job must be a JSON object")
    unknown = set(doc) - {"kind", "L", "theta_sq", "diag", "options"}
    if unknown:
        raise ValidationError("unknown job keys", keys=sorted(unknown))
    kind = doc.get("kind")
    if kind not in (TOTALLY_REAL, CM):
        raise ValidationError("kind must be 'totally_real' or 'cm'", kind=kind)
    spec_l = doc.get("L")
    if not isinstance(spec_l, dict) or "min_poly" not in spec_l:
        raise ValidationError("L needs a min_poly")
    try:
        min_poly = [int(_rational(c)) for c in spec_l["min_poly"]]
    except TypeError:
        raise ValidationError("min_poly must be a list") from None
    conj = spec_l.get("conjugates")
    if conj is not None:
        conj = [[_rational(c) for c in row] for row in conj]
    base = BaseField(min_poly, conj)
    diag_raw = doc.get("diag")
    if not isinstance(diag_raw, list):
        raise ValidationError("diag must be a list of L-elements")
    diag = [_coords(base, d, "diag entry") for d in diag_raw]
    theta = None
    if kind == CM:
        if "theta_sq" not in doc:
            raise ValidationError("cm jobs need theta_sq")
        theta = _coords(base, doc["theta_sq"], "theta_sq")
    elif "theta_sq" in doc:
        raise ValidationError("theta_sq is only meaningful for cm jobs")
    form = FormInput(kind, base, diag, theta)
    _check_signs(form)
    opts = doc.get("options") or {}
    if not isinstance(opts, dict):
        raise ValidationError("options must be an object")
    unknown = set(opts) - {"assume_nonsquare", "max_group_order", "emit", "oracle"}
    if unknown:
        raise ValidationError("unknown options", keys=sorted(unknown))
    nonsq = [_coords(base, x, "assume_nonsquare entry") for x in opts.get("assume_nonsquare", [])]
    for x in nonsq:
        if x.is_zero() or is_square_in_L(x) is not None:
            raise ValidationError("asserted nonsquare is a square in L", value=str(x))
    max_group = int(opts.get("max_group_order", DEFAULT_MAX_GROUP))
    env = os.environ.get("KSENDO_MAX_GROUP")
    if env:
        max_group = int(env)
    emit = opts.get("emit", "full")
    if emit not in ("full", "summary"):
        raise ValidationError("emit must be 'full' or 'summary'", emit=emit)
    return JobSpec(form, doc, nonsq, max_group, emit, bool(opts.get("oracle", False)))


def _check_signs(form):
    """Totally real: diag entries nonzero at every real place; cm: theta^2 totally negative."""
    import sympy

    t = sympy.Symbol("t")
    poly = sympy.Poly(list(reversed(form.base.min_poly)), t)
    roots = [r for r in poly.all_roots() if r.is_real]
    if len(roots) != form.r:
        raise ValidationError("L must be totally real", real_places=len(roots), degree=form.r)
    if form.kind == CM:
        for root in roots:
            val = sum(c * root ** k for k, c in enumerate(form.theta_sq.coords))
            if not sympy.N(val, 50) < 0:
                raise ValidationError("theta_sq must be totally negative", value=str(form.theta_sq))


def load_job(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError("job file is not valid JSON", detail=str(exc)) from None
    return parse_job(doc)


def _factor_cocycle(form, group, signs, fac, reference=None):
    table = build_lambda(form, fac.index_set, reference)
    if not check_lambda_consistency(form, table):
        raise VerificationFailure("matrix-unit coefficients are inconsistent")
    descent = DescentData(form, group, signs, table, fac.stabilizer, fac.representative)
    cocycle = extract_cocycle(descent, build_m_matrices(descent))
    if not verify_cocycle(cocycle):
        raise VerificationFailure("twisted cocycle identity failed", tag=str(fac.representative))
    return cocycle


def classify_factor(form, group, signs, fac, reference=None):
    cocycle = _factor_cocycle(form, group, signs, fac, reference)
    mg = MonomialGroup(group, atom_values(form), list(cocycle.formal.values()))
    return classify(cocycle, fac.center, mg)


def analyze(form, max_group_order=DEFAULT_MAX_GROUP):
    """Run the full pipeline; returns (tower, group, factors, brauer results, descriptor)."""
    tower = build_tower(form.base, form.radicands())
    if tower.degree > max_group_order:
        raise SizeLimit("Galois group exceeds max_group_order",
                        order=tower.degree, limit=max_group_order)
    group = build_group(tower)
    signs = BlockSigns(form, group)
    factors = decompose(form, group, signs)
    results = [classify_factor(form, group, signs, fac) for fac in factors]
    algebra = assemble_algebra(form, factors, results)
    return tower, group, factors, results, algebra


def _echo(form):
    def enc(x):
        return [str(c) for c in x.coords]
    out = {"kind": form.kind, "L": {"min_poly": list(form.base.min_poly)},
           "diag": [enc(d) for d in form.diag], "m": form.m, "r": form.r}
    if form.kind == CM:
        out["theta_sq"] = enc(form.theta_sq)
    return out


def run(job):
    """Report dict and exit code for a parsed job."""
    form = job.form
    timings = {}
    t0 = time.perf_counter()
    tower, group, factors, results, algebra = analyze(form, job.max_group_order)
    timings["pipeline"] = time.perf_counter() - t0
    identities = {"commutant_dim": algebra.commutant_dim,
                  "expected_commutant_dim": algebra.expected_commutant_dim,
                  "cocycle_identity": True, "lambda_consistency": True}
    if job.oracle:
        try:
            dim = oracle_commutant_dim(form)
        except SizeLimit as exc:
            identities["oracle"] = {"skipped": str(exc)}
        else:
            identities["oracle"] = {"commutant_dim": dim}
            if dim != algebra.expected_commutant_dim:
                raise AccountingError("oracle commutant dimension disagrees",
                                      oracle=dim, expected=algebra.expected_commutant_dim)
        timings["oracle"] = time.perf_counter() - t0 - timings["pipeline"]
    records = []
    for fac, res, alg in zip(factors, results, algebra.factors):
        rec = {"tag": describe_tag(fac.representative, form), "orbit_size": len(fac.orbit),
               "stabilizer_order": len(fac.stabilizer), "center": fac.center.to_dict(),
               "n": fac.n, "M": fac.M, "delta": res.delta, "matrix_size": alg.matrix_size,
               "division_algebra": alg.division_algebra, "factor": alg.render()}
        if job.emit == "full":
            rec["orbit"] = [describe_tag(t, form) for t in fac.orbit]
            rec["block_dim"] = fac.d
            rec["brauer"] = {**res.to_dict(), "certificate": res.certificate}
        records.append(rec)
    unresolved = any(r.delta is None for r in results)
    report = {"input": _echo(form),
              "tower": {**tower.summary(), "group_order": group.order} if job.emit == "full"
              else {"degree_over_Q": tower.degree, "group_order": group.order},
              "factors": records, "identities": identities,
              "status": "unresolved" if unresolved else "resolved",
              "summary": algebra.summary()}
    return report, (EXIT_UNRESOLVED if unresolved else 0), timings


def dump_report(report):
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _compute(args):
    try:
        job = load_job(args.job)
        if args.oracle:
            job.oracle = True
        if args.emit:
            job.emit = args.emit
        report, code, timings = run(job)
    except KsendoError as exc:
        print(json.dumps(exc.to_dict(), sort_keys=True, default=str), file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(json.dumps({"error": "OSError", "message": str(exc)}), file=sys.stderr)
        return 3
    text = dump_report(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(report["summary"], file=sys.stderr)
    print("timings: " + ", ".join(f"{k}={v:.2f}s" for k, v in timings.items()), file=sys.stderr)
    return code


def _selftest(_args):
    from . import selftest
    return 0 if selftest.run_all() else 1


def main(argv=None):
    parser = argparse.ArgumentParser(prog="ksendo")
    sub = parser.add_subparsers(dest="command", required=True)
    comp = sub.add_parser("compute", help="compute the endomorphism algebra for a job file")
    comp.add_argument("job")
    comp.add_argument("--oracle", action="store_true",
                      help="cross-check against the brute-force commutant (small inputs)")
    comp.add_argument("--emit", choices=["full", "summary"])
    comp.add_argument("--out")
    comp.set_defaults(func=_compute)
    st = sub.add_parser("selftest", help="run the embedded property checks")
    st.set_defaults(func=_selftest)
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

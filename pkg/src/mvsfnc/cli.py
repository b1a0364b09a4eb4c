"""Command-line interface: mvsfnc <group> <command> [options]."""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .curves import (
    BiPoly,
    CurveError,
    QuadrinomialInput,
    corollary_checks,
    fnc_bivariate_test,
    parse_bipoly,
    parse_curve,
    quadrinomial_reduce,
    schmidt_irreducibility,
    superelliptic_fnc_test,
    SuperellipticCurve,
)
from .gf import FieldError, FieldSpec, field_for_q, max_q, parse_field, prime_powers_up_to
from .mvsp import (
    IDENTITY_FORMS,
    MillsPreconditionError,
    classify_binomial,
    enumerate_mvsp_binomials,
    mills_certificate,
    mills_structural_check,
    verify_theorem_a,
)
from .report import FORMATS, emit_report, mismatch_flags
from .theoremb import (
    HARNESS_MAX_Q,
    CurveRecord,
    TheoremBError,
    family_membership,
    canonical_record,
    criteria_agreement,
    verify_theorem_b,
    verify_type_i,
)
from .upoly import PolyError, mvsp_bound, parse_poly, value_set

THEOREM_B_FIELDS = (4, 8, 9, 16, 25, 27, 32, 49, 64)
TYPE_I_FIELDS = (4, 8, 9)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    group: str
    command: str
    field: str | None
    fmt: str
    out: str | None
    workers: int


def _field(args) -> FieldSpec:
    if not args.field:
        raise UsageError("--field is required")
    return parse_field(args.field)


def _qs(args, default) -> list[int]:
    if getattr(args, "qs", None):
        try:
            return [int(x) for x in args.qs.split(",") if x]
        except ValueError:
            raise UsageError(f"bad --qs list {args.qs!r}") from None
    if getattr(args, "max_q", None):
        return [q for q in default if q <= args.max_q] if default else prime_powers_up_to(args.max_q)
    return list(default or ())


def _map(fn, items, workers: int) -> list:
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _fmt_values(field: FieldSpec, codes) -> list[str]:
    return [field.format_coefficient(int(c)) for c in codes]


# commands

def cmd_field_info(args):
    F = _field(args)
    return {
        "field": F.spec_string(),
        "p": F.p,
        "n": F.n,
        "q": F.q,
        "modulus": F.modulus_string(),
        "modulus_coefficients": list(F.modulus),
        "primitive_element": F.format_element(F.xi, "vector"),
        "primitive_element_code": F.xi,
    }


def cmd_poly_valueset(args):
    F = _field(args)
    P = parse_poly(F, args.poly)
    rep = value_set(P)
    return {
        "field": F.spec_string(),
        "poly": P.to_text(),
        "degree": P.degree,
        "values": _fmt_values(F, rep.values),
        "size": rep.size,
        "gamma0": F.format_coefficient(rep.gamma0),
        "nu": rep.nu,
        "fiber_sizes": {F.format_coefficient(g): rep.ell[g] for g in rep.values},
    }


def cmd_poly_mvsp(args):
    F = _field(args)
    P = parse_poly(F, args.poly)
    rep = value_set(P)
    bound = mvsp_bound(F.q, P.degree)
    out = {
        "field": F.spec_string(),
        "poly": P.to_text(),
        "degree": P.degree,
        "value_set_size": rep.size,
        "bound": bound,
        "is_mvsp": rep.size == bound,
    }
    if len(P.terms) == 2:
        tag = classify_binomial(P)
        out["family"] = tag.family if tag else None
        out["family_params"] = list(tag.params) if tag else None
    return out


def cmd_mvsp_enumerate(args):
    F = _field(args)
    deg = args.max_degree or F.order
    rows = []
    for P, tag in enumerate_mvsp_binomials(F, deg):
        rows.append({"poly": P.to_text(), "degree": P.degree,
                     "family": tag.family if tag else None,
                     "overlaps": ";".join(tag.overlaps) if tag else ""})
    return {"field": F.spec_string(), "max_degree": deg, "count": len(rows), "rows": rows}


def cmd_mvsp_certify(args):
    F = _field(args)
    P = parse_poly(F, args.poly)
    try:
        cert = mills_certificate(P, form=args.form)
    except MillsPreconditionError as exc:
        return {"field": F.spec_string(), "poly": P.to_text(), "certificate": None,
                "precondition": type(exc).__name__, "detail": str(exc)}
    out = {"field": F.spec_string(), "poly": P.to_text(), "form": args.form}
    if cert is None:
        out["certificate"] = None
        return out
    chk = mills_structural_check(P, cert)
    out["certificate"] = {"nu": cert.nu, "k": cert.k, "m": cert.m,
                          "gamma0": F.format_coefficient(cert.gamma0), "r": cert.r,
                          "omegas": _fmt_values(F, cert.omegas)}
    out["structural_check"] = {"N0_ok": chk.N0_ok, "Ni_ok": chk.Ni_ok,
                               "L0_decomposition_ok": chk.L0_decomposition_ok,
                               "identity_e_ok": chk.identity_e_ok, "identity_f_ok": chk.identity_f_ok,
                               "passed": chk.passed}
    return out


def _theorem_a_row(q: int) -> dict:
    return verify_theorem_a(field_for_q(q))


def cmd_verify_theorem_a(args):
    qs = _qs(args, None) if (args.qs or args.max_q) else prime_powers_up_to(256)
    if any(q > max_q() for q in qs):
        raise UsageError(f"q exceeds the configured guard {max_q()}")
    rows = _map(_theorem_a_row, qs, args.workers)
    for r in rows:
        r["mismatch_count"] = len(r["mismatches"])
    return rows


def _curve_report(F: FieldSpec, text: str) -> dict:
    out: dict = {"curve": text.strip(), "field": F.spec_string()}
    if "=" not in text:
        B = parse_bipoly(F, text)
        out["tests"] = {"bivariate": fnc_bivariate_test(B)}
        out["irreducible"] = {"method": "none", "verdict": None}
        return out
    g, f = parse_curve(F, text)
    tests: dict = {"bivariate": fnc_bivariate_test(BiPoly.separated(g, f))}
    if len(g.terms) == 1 and g.lc == 1 and not f.is_constant():
        C = SuperellipticCurve(g.degree, f)
        tests["superelliptic"] = superelliptic_fnc_test(C)
        tests["screens"] = corollary_checks(C).items
        out["irreducible"] = {"method": "schmidt", "verdict": schmidt_irreducibility(C)}
    else:
        out["irreducible"] = {"method": "none", "verdict": None}
    out["tests"] = tests
    return out


def cmd_curve_fnc(args):
    return _curve_report(_field(args), args.curve)


def cmd_curve_classify(args):
    F = _field(args)
    rec = CurveRecord.from_text(F, args.curve)
    tag = family_membership(rec)
    d = rec.bipoly().total_degree()
    quad = quadrinomial_reduce(QuadrinomialInput.homogenize(rec.bipoly()))
    return {
        "curve": str(rec),
        "field": F.spec_string(),
        "type": rec.kind,
        "affine_type": quad.affine_type,
        "degree": d,
        "canonical": str(canonical_record(rec)) if rec.kind != "i" or F.q <= 16 else None,
        "family": tag.family if tag else None,
        "family_params": tag.params_dict() if tag else None,
    }


def _theorem_b_job(job) -> dict:
    q, kind = job
    return verify_theorem_b(field_for_q(q), kind)


def cmd_verify_theorem_b(args):
    qs = _qs(args, THEOREM_B_FIELDS)
    kinds = [k for k in args.types.split(",") if k]
    if any(k not in ("ii", "iii") for k in kinds):
        raise UsageError("--types takes a comma list drawn from ii,iii")
    if any(q > HARNESS_MAX_Q for q in qs):
        raise UsageError(f"q exceeds the harness bound {HARNESS_MAX_Q}")
    jobs = [(q, k) for q in qs for k in kinds]
    return _map(_theorem_b_job, jobs, args.workers)


def _type_i_job(job) -> dict:
    q, bound = job
    return verify_type_i(field_for_q(q), bound)


def cmd_verify_type_i(args):
    qs = [parse_field(args.field).q] if args.field else _qs(args, TYPE_I_FIELDS)
    return _map(_type_i_job, [(q, args.bound) for q in qs], args.workers)


def _agreement_job(q: int) -> dict:
    return criteria_agreement(field_for_q(q))


def cmd_verify_agreement(args):
    qs = [parse_field(args.field).q] if args.field else _qs(args, None)
    if not qs:
        raise UsageError("give --field, --qs or --max-q")
    return _map(_agreement_job, qs, args.workers)


COMMANDS = {
    ("field", "info"): cmd_field_info,
    ("poly", "valueset"): cmd_poly_valueset,
    ("poly", "mvsp"): cmd_poly_mvsp,
    ("mvsp", "enumerate"): cmd_mvsp_enumerate,
    ("mvsp", "certify"): cmd_mvsp_certify,
    ("verify", "theorem-a"): cmd_verify_theorem_a,
    ("verify", "theorem-b"): cmd_verify_theorem_b,
    ("verify", "type-i"): cmd_verify_type_i,
    ("verify", "agreement"): cmd_verify_agreement,
    ("curve", "fnc"): cmd_curve_fnc,
    ("curve", "classify"): cmd_curve_classify,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=FORMATS, default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--field", help='field: "p^n", "q" or "p^n:c0,...,1"')

    parser = _Parser(prog="mvsfnc", description="Minimal value set polynomials and Frobenius nonclassical curves.")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    g = groups.add_parser("field").add_subparsers(dest="command", required=True, parser_class=_Parser)
    g.add_parser("info", parents=[common])

    g = groups.add_parser("poly").add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("valueset", "mvsp"):
        sp = g.add_parser(name, parents=[common])
        sp.add_argument("poly")

    g = groups.add_parser("mvsp").add_subparsers(dest="command", required=True, parser_class=_Parser)
    sp = g.add_parser("enumerate", parents=[common])
    sp.add_argument("--max-degree", type=int)
    sp = g.add_parser("certify", parents=[common])
    sp.add_argument("poly")
    sp.add_argument("--form", choices=IDENTITY_FORMS, default="stated")

    g = groups.add_parser("curve").add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("fnc", "classify"):
        sp = g.add_parser(name, parents=[common])
        sp.add_argument("curve")

    g = groups.add_parser("verify").add_subparsers(dest="command", required=True, parser_class=_Parser)
    sp = g.add_parser("theorem-a", parents=[common])
    sp.add_argument("--max-q", type=int)
    sp.add_argument("--qs", help="comma list of field sizes")
    sp = g.add_parser("theorem-b", parents=[common])
    sp.add_argument("--max-q", type=int)
    sp.add_argument("--qs", help="comma list of field sizes")
    sp.add_argument("--types", default="ii,iii")
    sp = g.add_parser("type-i", parents=[common])
    sp.add_argument("--max-q", type=int)
    sp.add_argument("--qs", help="comma list of field sizes")
    sp.add_argument("--bound", type=int, help="cap on b and d (default 2(q-1))")
    sp = g.add_parser("agreement", parents=[common])
    sp.add_argument("--max-q", type=int)
    sp.add_argument("--qs", help="comma list of field sizes")
    return parser


def run(argv: list[str] | None = None) -> tuple[int, str, RunConfig | None]:
    """Execute a command; returns (exit code, report text, config)."""
    config = None
    try:
        args = build_parser().parse_args(argv)
        if args.workers < 1:
            raise UsageError("--workers must be at least 1")
        config = RunConfig(args.group, args.command, args.field, args.fmt, args.out, args.workers)
        report = COMMANDS[(config.group, config.command)](args)
    except (UsageError, FieldError, PolyError, CurveError, TheoremBError) as exc:
        return 2, f"error: {exc}\n", config
    code = 1 if mismatch_flags(report) else 0
    return code, emit_report(report, config.fmt), config


def main(argv: list[str] | None = None) -> int:
    code, text, config = run(argv)
    if code == 2:
        sys.stderr.write(text)
        return code
    if config.out:
        try:
            with open(config.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            sys.stderr.write(f"error: cannot write output: {exc}\n")
            return 2
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

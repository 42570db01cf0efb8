"""Command-line interface: ``halfint4 {expand,basis,hecke,lstar,scan,verify}``.

Exit codes: 0 success, 1 a verification check failed, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction

import mpmath

from . import __version__, forms, hecke, lfunction, verify
from .forms import DomainError, MembershipError, Weight
from .qseries import PrecisionError

SCHEMA_VERSION = "1.0"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

FORM_NAMES = ("theta", "P", "F2", "Delta4", "Delta4_product", "D2",
              "plus_form(k)", "minus_form(k)", "monomial(a,b)")


class UsageError(Exception):
    pass


def fmt(x, bits: int) -> str:
    return verify.fmt_number(x, bits)


def parse_sign(text: str) -> int:
    table = {"+": 1, "plus": 1, "+1": 1, "1": 1, "-": -1, "minus": -1, "-1": -1}
    try:
        return table[text]
    except KeyError:
        raise UsageError(f"sign must be + or -, got {text!r}") from None


def parse_primes(text: str) -> list[int]:
    try:
        primes = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"primes must be a comma-separated list of integers, got {text!r}") from None
    bad = [p for p in primes if not hecke.is_odd_prime(p)]
    if not primes or bad:
        raise UsageError(f"odd primes required, got {text!r}")
    return primes


def parse_number(text: str):
    """Rationals and decimals stay exact (Fraction); ``a+bi`` becomes mpc."""
    if "i" in text or "j" in text:
        try:
            return lfunction.to_mp(text.replace("j", "i"))
        except ValueError:
            raise UsageError(f"cannot parse complex number {text!r}") from None
    try:
        return Fraction(text)
    except ValueError:
        raise UsageError(f"cannot parse number {text!r}") from None


_CALL = re.compile(r"^(\w+)\(([^)]*)\)$")


def form_series(spec: str, prec: int):
    """(series, twice weight or None) for a form spec such as ``plus_form(5)``."""
    simple = {
        "theta": (forms.theta, 1), "P": (forms.quasi_eisenstein_p, None),
        "F2": (forms.f2, 4), "Delta4": (forms.delta4, 8),
        "Delta4_product": (forms.delta4_product, 8), "D2": (forms.d2, 4),
    }
    if spec in simple:
        fn, tw = simple[spec]
        return fn(prec), tw
    m = _CALL.match(spec.replace(" ", ""))
    if m:
        name, args = m.group(1), m.group(2).split(",")
        try:
            ints = [int(a) for a in args]
        except ValueError:
            raise UsageError(f"integer arguments expected in {spec!r}") from None
        if name in ("plus_form", "minus_form") and len(ints) == 1:
            maker = forms.plus_form if name == "plus_form" else forms.minus_form
            e, s = maker(ints[0], prec)
            return s, e.twice_weight
        if name == "monomial" and len(ints) == 2:
            a, b = ints
            if a < 0 or b < 0:
                raise DomainError("monomial exponents must be nonnegative")
            return forms.monomial_series(a, b, prec), a + 4 * b
    raise UsageError(f"unknown form {spec!r}; expected one of {', '.join(FORM_NAMES)}")


# -- output -------------------------------------------------------------------------


def _json(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _header(command: str, args, **extra) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "artifact_version": __version__, "command": command,
           "bits": args.bits}
    doc.update(extra)
    return doc


# -- commands -----------------------------------------------------------------------


def cmd_expand(args) -> tuple[str, int]:
    if args.n_terms < 1:
        raise UsageError("n_terms must be positive")
    prec = max(args.n_terms, args.prec or 0)
    s, tw = form_series(args.form, prec)
    coeffs = [fmt(c, args.bits) for c in s.coeffs[:args.n_terms]]
    fmt_ = args.format or "text"
    weight = str(Weight(tw)) if tw else "quasi-modular, weight 2"
    if fmt_ == "json":
        return _json(_header("expand", args, prec=prec, form=args.form, weight=weight,
                             n_terms=args.n_terms, coefficients=coeffs)), EXIT_OK
    if fmt_ == "csv":
        return _csv(["n", "coefficient"], enumerate(coeffs)), EXIT_OK
    return f"# {args.form} weight={weight} prec={prec} bits={args.bits}\n" + ",".join(coeffs) + "\n", EXIT_OK


def _space(k: int, kind: str, prec):
    if kind == "full":
        return forms.monomial_space(Weight.half_integral(k), prec)
    if kind == "cusp":
        return forms.cusp_space(k, prec)
    if kind in ("plus", "minus"):
        return forms.eigen_space(k, 1 if kind == "plus" else -1, prec)
    raise UsageError(f"kind must be full, cusp, plus or minus, got {kind!r}")


def cmd_basis(args) -> tuple[str, int]:
    if args.k < 0:
        raise UsageError("k must be nonnegative")
    space = _space(args.k, args.kind, args.prec)
    n = min(args.terms, space.prec)
    basis = [{"element": repr(e), "monomial_coordinates": [fmt(c, args.bits) for c in e.coordinates()],
              "coefficients": [fmt(c, args.bits) for c in s.coeffs[:n]]}
             for e, s in zip(space.basis, space.series)]
    fmt_ = args.format or "text"
    if fmt_ == "json":
        return _json(_header("basis", args, prec=space.prec, k=args.k, kind=args.kind,
                             weight=str(space.weight), dim=space.dim, basis=basis)), EXIT_OK
    if fmt_ == "csv":
        rows = [[i, b["element"], " ".join(b["coefficients"])] for i, b in enumerate(basis)]
        return _csv(["index", "element", "coefficients"], rows), EXIT_OK
    lines = [f"# {args.kind} space of weight {space.weight}: dim {space.dim} (prec={space.prec} bits={args.bits})"]
    for i, b in enumerate(basis):
        lines.append(f"[{i}] {b['element']}")
        lines.append("    " + ",".join(b["coefficients"]))
    return "\n".join(lines) + "\n", EXIT_OK


def provisioned_space(k: int, sign: int, primes, prec=None):
    """Eigenspace expanded far enough for every T(p^2) matrix requested."""
    space = forms.eigen_space(k, sign)
    if space.dim == 0:
        return space
    need = max(hecke.required_prec(p, space.dim, max(space.pivots)) for p in primes)
    return space.with_prec(max(need, prec or 0))


def _eigenvalue_text(v, bits):
    return fmt(v, bits)


def _eigen_coeffs(ef, n: int):
    # exact eigenforms print as rationals, embedded ones in fixed decimal
    return ef.series().coeffs[:n] if ef.exact else ef.coeffs[:n]


def cmd_hecke(args) -> tuple[str, int]:
    sign = parse_sign(args.sign)
    primes = parse_primes(args.primes)
    space = provisioned_space(args.k, sign, primes, args.prec)
    mats = [hecke.t_p2_matrix(space, p) for p in primes] if space.dim else []
    efs = hecke.eigen_decompose(space, primes, args.bits) if space.dim else []
    n = min(args.terms, space.prec)
    commute = all(a.commutes_with(b) for i, a in enumerate(mats) for b in mats[i + 1:])
    doc = _header(
        "hecke", args, prec=space.prec, k=args.k, sign="+" if sign == 1 else "-",
        weight=str(space.weight), dim=space.dim, primes=primes,
        matrices=[{"p": m.p, "rows": [[fmt(x, args.bits) for x in row] for row in m.rows()],
                   "charpoly": [fmt(c, args.bits) for c in m.charpoly()]} for m in mats],
        commute=commute,
        eigenforms=[{"index": i, "exact": ef.exact,
                     "eigenvalues": {str(p): _eigenvalue_text(v, args.bits) for p, v in sorted(ef.eigenvalues.items())},
                     "coefficients": [fmt(c, args.bits) for c in _eigen_coeffs(ef, n)]}
                    for i, ef in enumerate(efs)],
    )
    fmt_ = args.format or "text"
    if fmt_ == "json":
        return _json(doc), EXIT_OK
    if fmt_ == "csv":
        rows = [[e["index"], p, lam, e["exact"]] for e in doc["eigenforms"] for p, lam in e["eigenvalues"].items()]
        return _csv(["eigenform", "p", "eigenvalue", "exact"], rows), EXIT_OK
    lines = [f"# S^({doc['sign']}) weight {space.weight}: dim {space.dim} (prec={space.prec} bits={args.bits})"]
    for m in doc["matrices"]:
        rows = "; ".join(" ".join(r) for r in m["rows"])
        lines.append(f"T({m['p']}^2) = [{rows}]")
        lines.append(f"  charpoly (x^{len(m['charpoly']) - 1} down): {', '.join(m['charpoly'])}")
    if len(mats) > 1:
        lines.append(f"commute: {commute}")
    for e in doc["eigenforms"]:
        lams = ", ".join(f"lambda_{p}={v}" for p, v in e["eigenvalues"].items())
        lines.append(f"f{e['index']} ({'exact' if e['exact'] else 'numeric'}): {lams}")
        lines.append("    " + ",".join(e["coefficients"]))
    return "\n".join(lines) + "\n", EXIT_OK


def _lstar_form(k: int, sign: int, eigen, bits: int, prec):
    """(coefficients, label, prec) for the requested form."""
    if eigen is None:
        maker = forms.plus_form if sign == 1 else forms.minus_form
        # probe with a modest precision, then grow if the tail demands it
        p = prec or 400
        e, s = maker(k, p)
        return s, repr(e), p
    space = provisioned_space(k, sign, (3,), max(prec or 0, 400))
    efs = hecke.eigen_decompose(space, (3,), bits) if space.dim else []
    if not 0 <= eigen < len(efs):
        raise UsageError(f"eigenform index {eigen} out of range (space has {len(efs)})")
    return list(efs[eigen].coeffs), f"eigenform {eigen}", space.prec


def _lvalue_doc(lv, bits):
    return {"method": lv.method, "value": fmt(lv.value, bits), "tail_bound": fmt(lv.tail_bound, bits),
            "method_error": fmt(lv.method_error, bits), "error_budget": fmt(lv.error_budget, bits),
            "terms_used": lv.terms_used, "sign": lv.sign() if lfunction._is_real(lv.value) else None}


def cmd_lstar(args) -> tuple[str, int]:
    sign = parse_sign(args.sign)
    s = parse_number(args.s)
    coeffs, label, prec = _lstar_form(args.k, sign, args.eigen, args.bits, args.prec)
    w = Weight.half_integral(args.k)
    lv = lfunction.lstar_eigen(coeffs, w, sign, s, args.bits)
    doc = _header("lstar", args, prec=prec, k=args.k, sign="+" if sign == 1 else "-", form=label,
                  s=fmt(s, args.bits), result=_lvalue_doc(lv, args.bits))
    if args.cross_check:
        q = lfunction.lstar_quadrature(coeffs, sign, w, s, args.bits)
        diff = abs(lv.value - q.value)
        budget = lv.error_budget + q.error_budget
        doc["cross_check"] = {"quadrature": _lvalue_doc(q, args.bits), "discrepancy": fmt(diff, args.bits),
                              "combined_budget": fmt(budget, args.bits), "agree": bool(diff <= budget)}
    fmt_ = args.format or "text"
    if fmt_ == "json":
        return _json(doc), EXIT_OK
    r = doc["result"]
    if fmt_ == "csv":
        rows = [["gamma_series", r["value"], r["tail_bound"], r["method_error"], r["terms_used"]]]
        if "cross_check" in doc:
            q = doc["cross_check"]["quadrature"]
            rows.append(["quadrature", q["value"], q["tail_bound"], q["method_error"], q["terms_used"]])
        return _csv(["method", "lstar", "tail_bound", "method_error", "terms_used"], rows), EXIT_OK
    lines = [f"# L*({label}, s={doc['s']}) weight {w} (prec={prec} bits={args.bits})",
             f"value        {r['value']}",
             f"tail_bound   {r['tail_bound']}",
             f"method_error {r['method_error']}",
             f"terms_used   {r['terms_used']}",
             f"method       {r['method']}"]
    if "cross_check" in doc:
        c = doc["cross_check"]
        lines += [f"quadrature   {c['quadrature']['value']}",
                  f"discrepancy  {c['discrepancy']} (budget {c['combined_budget']}, agree={c['agree']})"]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_scan(args) -> tuple[str, int]:
    sign = parse_sign(args.sign)
    lo, hi, step = (parse_number(x) for x in (args.lo, args.hi, args.step))
    if not all(isinstance(x, Fraction) for x in (lo, hi, step)):
        raise UsageError("scan bounds and step must be real")
    if step <= 0:
        raise UsageError("step must be positive")
    coeffs, label, prec = _lstar_form(args.k, sign, args.eigen, args.bits, args.prec)
    pts = lfunction.scan_real(coeffs, Weight.half_integral(args.k), sign, lo, hi, step, args.bits)
    changes = lfunction.sign_changes(pts)
    rows = [[fmt(p.sigma, args.bits), fmt(p.lvalue.real, args.bits), p.sign, fmt(p.lvalue.tail_bound, args.bits)]
            for p in pts]
    header = ["sigma", "lstar", "sign", "tail_bound"]
    fmt_ = args.format or "csv"
    intervals = [[fmt(a, args.bits), fmt(b, args.bits)] for a, b in changes]
    if fmt_ == "json":
        doc = _header("scan", args, prec=prec, k=args.k, sign="+" if sign == 1 else "-", form=label,
                      points=[dict(zip(header, r)) for r in rows],
                      summary={"points": len(rows), "sign_changes": intervals})
        return _json(doc), EXIT_OK
    out = _csv(header, rows)
    if fmt_ == "text":
        desc = "; ".join(f"[{a}, {b}]" for a, b in intervals) or "none"
        out += f"# {label} prec={prec} bits={args.bits}: {len(intervals)} sign change(s): {desc}\n"
    return out, EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    prec = args.prec or 600
    report = verify.full_report(args.kmax, args.bits, prec, timings=not args.no_timings)
    code = EXIT_OK if report["summary"]["fail"] == 0 else EXIT_FAIL
    fmt_ = args.format or "json"
    if fmt_ == "json":
        return _json(report), code
    rows = [[c["check_id"], c["status"], c["paper_anchor"], c["measured"], c["tolerance"]] for c in report["checks"]]
    out = _csv(["check_id", "status", "anchor", "measured", "tolerance"], rows)
    if fmt_ == "text":
        s = report["summary"]
        out += f"# bits={args.bits} prec={prec} k_max={args.kmax}: pass {s['pass']}, fail {s['fail']}, skipped {s['skipped']}\n"
    return out, code


# -- parser -------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--bits", type=int, default=d(lfunction.DEFAULT_BITS), help="working precision in bits")
    p.add_argument("--prec", type=int, default=d(None), help="series precision (q-adic); auto if omitted")
    p.add_argument("--format", choices=("json", "csv", "text"), default=d(None))
    p.add_argument("--out", default=d(None), help="write output to FILE instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="halfint4", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="q-expansion of a named form")
    p.add_argument("form", help="one of " + ", ".join(FORM_NAMES))
    p.add_argument("n_terms", type=int)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("basis", help="echelon basis of a space of weight k+1/2")
    p.add_argument("k", type=int)
    p.add_argument("kind", choices=("full", "cusp", "plus", "minus"))
    p.add_argument("--terms", type=int, default=10, help="coefficients shown per basis form")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("hecke", help="T(p^2) matrices and eigenforms on a W4 eigenspace")
    p.add_argument("k", type=int)
    p.add_argument("sign", help="+ or -")
    p.add_argument("primes", help="comma-separated odd primes, e.g. 3,5")
    p.add_argument("--terms", type=int, default=10)
    p.set_defaults(func=cmd_hecke)

    for name, fn, helptext in (("lstar", cmd_lstar, "completed L-value at one point"),
                               ("scan", cmd_scan, "L* along a real grid")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("k", type=int)
        p.add_argument("sign", help="+ or -")
        if name == "lstar":
            p.add_argument("s", help="real, p/q, or a+bi")
            p.add_argument("--cross-check", action="store_true", help="also run the quadrature oracle")
        else:
            p.add_argument("lo")
            p.add_argument("hi")
            p.add_argument("step")
        p.add_argument("--eigen", type=int, default=None, metavar="INDEX",
                       help="use Hecke eigenform INDEX instead of the product form")
        p.set_defaults(func=fn)

    p = sub.add_parser("verify", help="run the verification suites and emit a JSON report")
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--no-timings", action="store_true", help="zero the seconds fields for byte-stable output")
    p.set_defaults(func=cmd_verify)

    for action in sub.choices.values():
        _common(action, suppress=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.bits < 16:
        parser.error("--bits must be at least 16")
    if args.prec is not None and args.prec < 1:
        parser.error("--prec must be positive")
    try:
        text, code = args.func(args)
    except (UsageError, DomainError, MembershipError, PrecisionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

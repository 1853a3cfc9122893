"""Command line: fields, qualify, corollary, tables, sieve, certificate-verify."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import certificate as Ct
from . import cyclotomic as C
from . import polynomial as P
from . import sieve as S
from .classgroup import genus_number
from .orders import DEFAULT_MAX_NODES
from .zmod import factorize, is_prime, subgroup_closure

SCHEMA = 1
EXIT_OK, EXIT_USAGE, EXIT_REJECTED, EXIT_UNDECIDED = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------- parsing


def field_from_polynomial(poly) -> C.AbelianFieldSpec:
    """Abelian field of prime degree p generated by a root of ``poly``.

    Candidate conductors are built from primes q | disc with q = 1 mod p
    (exponent 1) and p itself (exponent 2).
    """
    p = P.degree(poly)
    if p < 2 or not is_prime(p) or poly[-1] != 1:
        raise UsageError("polynomial must be monic of prime degree")
    disc = abs(P.discriminant(poly))
    if disc == 0:
        raise UsageError("polynomial is not squarefree")
    level = 1
    for q in factorize(disc).primes:
        if q == p:
            level *= p * p
        elif q % p == 1:
            level *= q
    spec = C.identify_field(poly, C.enumerate_prime_degree_subfields(level, p)) if level > 1 else None
    if spec is None:
        raise UsageError(f"{P.to_string(poly)} does not define an abelian field of degree {p}")
    return spec


def parse_field(text: str):
    """``level:g1,g2`` or a monic polynomial in x.  Returns (spec, polynomial or None)."""
    text = text.strip()
    if ":" in text:
        head, _, gens = text.partition(":")
        try:
            level = int(head)
            gs = [int(g) for g in gens.split(",") if g.strip()]
        except ValueError as exc:
            raise UsageError(f"malformed field descriptor {text!r}") from exc
        if level < 1 or any(math.gcd(g, level) != 1 for g in gs):
            raise UsageError(f"generators must be units modulo {level}")
        try:
            return C.AbelianFieldSpec(level, subgroup_closure(gs, level)).canonical, None
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    try:
        poly = P.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return field_from_polynomial(poly), poly


def parse_pair(text: str) -> tuple[int, int]:
    try:
        p, q = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"expected p,q but got {text!r}") from exc
    return p, q


# ----------------------------------------------------------------- output


def dump_json(obj) -> str:
    return json.dumps({"schema": SCHEMA, **obj}, indent=2, sort_keys=True) + "\n"


def dump_csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return str(v)


def _report_rows(reports):
    return [
        {
            "K1": r["K1"],
            "K2": r["K2"],
            "conclusion": r["conclusion"],
            "reasons": "; ".join(r["reasons"]),
            "class_numbers": r["class_numbers"],
            "d": (r["certificate"] or {}).get("d"),
            "f": (r["certificate"] or {}).get("f"),
        }
        for r in reports
    ]


REPORT_COLUMNS = ["K1", "K2", "conclusion", "reasons", "class_numbers", "d", "f"]


def _exit_for(conclusions) -> int:
    if "undecided" in conclusions:
        return EXIT_UNDECIDED
    if conclusions and all(c == "rejected" for c in conclusions):
        return EXIT_REJECTED
    return EXIT_OK


# --------------------------------------------------------------- commands


def cmd_fields(args):
    if args.n < 1 or args.p < 2 or not is_prime(args.p):
        raise UsageError("need n >= 1 and a prime degree p")
    rows = []
    for spec in C.enumerate_prime_degree_subfields(args.n, args.p):
        g = genus_number(spec)
        rows.append(
            {
                "field": spec.descriptor(),
                "conductor": spec.conductor,
                "degree": spec.degree,
                "polynomial": P.to_string(list(C.defining_polynomial(spec).coefficients)),
                "ramified_primes": [q for q, _ in g.ramified_primes],
                "genus_number": g.genus_number,
            }
        )
    cols = ["field", "conductor", "degree", "polynomial", "ramified_primes", "genus_number"]
    return {"command": "fields", "n": args.n, "p": args.p, "fields": rows}, rows, cols, EXIT_OK


def cmd_qualify(args):
    (k1, f1), (k2, f2) = parse_field(args.K1), parse_field(args.K2)
    rep = Ct.qualify_pair(k1, k2, f1, f2, max_nodes=args.max_nodes).to_dict()
    code = {"qualified": EXIT_OK, "rejected": EXIT_REJECTED}.get(rep["conclusion"], EXIT_UNDECIDED)
    return {"command": "qualify", "report": rep}, _report_rows([rep]), REPORT_COLUMNS, code


def cmd_corollary(args):
    try:
        reports = [r.to_dict() for r in Ct.corollary_driver(*args.primes, max_nodes=args.max_nodes)]
    except Ct.QualificationError as exc:
        raise UsageError(str(exc)) from exc
    concl = [r["conclusion"] for r in reports]
    out = {
        "command": "corollary",
        "primes": args.primes,
        "reports": reports,
        "qualified": "qualified" in concl,
        "statement": Ct.CONCLUSION if "qualified" in concl else None,
    }
    code = EXIT_OK if "qualified" in concl else _exit_for(concl) if concl else EXIT_REJECTED
    return out, _report_rows(reports), REPORT_COLUMNS, code


def cmd_tables(args):
    pairs = [parse_pair(t) for t in args.pairs] if args.pairs else Ct.TABLE_PAIRS
    rows = Ct.reproduce_tables(pairs, max_nodes=args.max_nodes)
    flat = []
    for r in rows:
        for t in r["table_rows"] or [{}]:
            flat.append({**r, "table": t.get("table"), "serial": t.get("serial"), "match": t.get("match")})
    cols = ["p", "q", "field", "conductor", "polynomial", "class_number", "genus_number", "hcf_abelian",
            "table", "serial", "match"]
    ok = all(t["match"] for r in rows for t in r["table_rows"])
    return {"command": "tables", "pairs": [list(p) for p in pairs], "rows": rows, "all_match": ok}, flat, cols, EXIT_OK


def _sieve_setup(args):
    if args.pair:
        (k1, f1), (k2, f2) = parse_field(args.pair[0]), parse_field(args.pair[1])
        rep = Ct.qualify_pair(k1, k2, f1, f2, max_nodes=args.max_nodes)
        if rep.conclusion != "qualified":
            return None, None, None, rep
        d1, d2 = Ct.field_data(k1, f1, args.max_nodes), Ct.field_data(k2, f2, args.max_nodes)
        units = [*d1.units.units[:2], d2.units.units[0]]
        params = S.SieveParams(rep.certificate.u1, rep.certificate.f, args.X, args.a, args.b, args.epsilon)
        return params, C.compositum(k1, k2), units, rep
    if args.u1 is None or args.f is None:
        raise UsageError("sieve needs --pair K1 K2 or both --u1 and --f")
    return S.SieveParams(args.u1, args.f, args.X, args.a, args.b, args.epsilon), None, None, None


def cmd_sieve(args):
    params, K, units, qual = _sieve_setup(args)
    if params is None:
        code = EXIT_REJECTED if qual.conclusion == "rejected" else EXIT_UNDECIDED
        return {"command": "sieve", "report": qual.to_dict()}, [], [], code
    bad = params.problems()
    if bad:
        raise UsageError("; ".join(bad))
    rep, summary = S.run_sieve(params, K, units, seed=args.seed)
    out = {
        "command": "sieve",
        "params": {"u1": str(params.u1), "f": str(params.f), "X": params.X, "a": params.a, "b": params.b,
                   "epsilon": params.epsilon},
        "J_count": rep.J_count,
        "M_count": rep.M_count,
        "M_n_counts": rep.M_n_counts,
        "dominant_n0": rep.dominant_n0,
        "density_ratio": rep.density_ratio,
        "winner_count": rep.winner_count,
        "winner_count_n0": rep.winner_count_n0,
        "records": [dict(zip(S.CSV_HEADER, r.row())) for r in rep.records],
        "ladder": summary,
    }
    return out, (rep, summary), None, EXIT_OK


def cmd_certificate_verify(args):
    (k1, f1), (k2, f2) = parse_field(args.K1), parse_field(args.K2)
    d1, d2 = Ct.field_data(k1, f1, args.max_nodes), Ct.field_data(k2, f2, args.max_nodes)
    try:
        ctx = Ct.build_pair_context(k1, k2, d1, d2)
    except Ct.QualificationError as exc:
        out = {"command": "certificate-verify", "error": str(exc)}
        return out, [out], ["command", "error"], EXIT_REJECTED
    if args.d is None:
        cert = Ct.choose_residue_class(ctx)
    else:
        d = args.d % ctx.f
        cert = Ct.ResidueClassCertificate(d, ctx.f, d or ctx.f, {})
    checks = Ct.verify_certificate(ctx, cert)
    out = {"command": "certificate-verify", "K1": k1.descriptor(), "K2": k2.descriptor(),
           "d": str(cert.d), "f": str(ctx.f), "checks": checks, "valid": all(checks.values())}
    row = {"K1": out["K1"], "K2": out["K2"], "d": out["d"], "f": out["f"], **checks, "valid": out["valid"]}
    return out, [row], list(row), EXIT_OK if out["valid"] else EXIT_REJECTED


# ------------------------------------------------------------------ main


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=["json", "csv"], default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    common.add_argument("-o", "--out-file", default=None)

    ap = argparse.ArgumentParser(prog="euclid-cert", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fields", parents=[common], help="subfields of prime degree p of Q(zeta_n)")
    p.add_argument("n", type=int)
    p.add_argument("p", type=int)
    p.set_defaults(func=cmd_fields)

    p = sub.add_parser("qualify", parents=[common], help="qualify a pair of fields")
    p.add_argument("K1")
    p.add_argument("K2")
    p.set_defaults(func=cmd_qualify)

    p = sub.add_parser("corollary", parents=[common], help="all admissible pairs from Q(zeta_p1q1), Q(zeta_p2q2)")
    p.add_argument("primes", type=int, nargs=4, metavar="P")
    p.set_defaults(func=cmd_corollary)

    p = sub.add_parser("tables", parents=[common], help="recompute the cubic subfields of Q(zeta_pq)")
    p.add_argument("pairs", nargs="*", metavar="p,q")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("sieve", parents=[common], help="progression sieve and residue-symbol statistics")
    p.add_argument("--pair", nargs=2, metavar="K")
    p.add_argument("--u1", type=int)
    p.add_argument("--f", type=int)
    p.add_argument("--X", type=int, default=10**6)
    p.add_argument("--a", type=float, default=S.DEFAULT_A)
    p.add_argument("--b", type=float, default=S.DEFAULT_B)
    p.add_argument("--epsilon", type=float, default=None)
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("certificate-verify", parents=[common], help="check a residue class d for a pair")
    p.add_argument("K1")
    p.add_argument("K2")
    p.add_argument("--d", type=int)
    p.set_defaults(func=cmd_certificate_verify)
    return ap


def run(argv=None) -> tuple[int, str, str | None]:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_USAGE), "", None
    try:
        obj, rows, cols, code = args.func(args)
    except UsageError as exc:
        return EXIT_USAGE, f"error: {exc}\n", None
    if args.output == "json":
        text = dump_json(obj)
    elif args.command == "sieve" and isinstance(rows, tuple):
        text = S.to_csv(*rows)
    else:
        text = dump_csv(rows, cols or [])
    return code, text, args.out_file


def main(argv=None) -> int:
    code, text, out_file = run(argv)
    if code == EXIT_USAGE:
        sys.stderr.write(text)
    elif out_file:
        with open(out_file, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

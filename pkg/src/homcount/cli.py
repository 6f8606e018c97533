"""Command-line front end.

Exit status: 0 success, 1 a verification failed, 2 usage or input error,
3 enumeration budget exhausted.  JSON output writes every number as a decimal
string.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import frobenius, growth, homs, symchar, verification
from .errors import BudgetExceeded, HomcountError
from .groups import build_group
from .presentations import abelianization, parse_presentation, parse_sigma, parse_word

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(HomcountError):
    reason = "usage"


def _num(value):
    """Decimal-string form for json; Fractions keep ``p/q``."""
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, dict):
        return {k: _num(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_num(v) for v in value]
    return value


# report rendering ------------------------------------------------------------------------


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_num(report), indent=2) + "\n"
    if "tables" in report:
        return _render_tables(report, fmt)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["field", "value"])
        for key, value in report.items():
            writer.writerow([key, json.dumps(_num(value)) if isinstance(value, (list, dict)) else _num(value)])
        return buf.getvalue()
    lines = []
    for key, value in report.items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{key}:")
            lines.extend("  " + "  ".join(f"{k}={_num(v)}" for k, v in row.items()) for row in value)
        else:
            lines.append(f"{key}: {_num(value)}")
    return "\n".join(lines) + "\n"


def _render_tables(report: dict, fmt: str) -> str:
    """Tables with rows = genus, columns = n."""
    buf = io.StringIO()
    if fmt == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        for name, table in report["tables"].items():
            writer.writerow([name] + [str(n) for n in table["columns"]])
            for label, row in zip(table["rows"], table["values"]):
                writer.writerow([str(label)] + [str(v) for v in row])
        return buf.getvalue()
    for name, table in report["tables"].items():
        cells = [[f"{name}  g/n"] + [str(n) for n in table["columns"]]]
        cells += [[str(label)] + [str(v) for v in row] for label, row in zip(table["rows"], table["values"])]
        widths = [max(len(r[i]) for r in cells) for i in range(len(cells[0]))]
        for r in cells:
            buf.write("  ".join(c.rjust(w) for c, w in zip(r, widths)) + "\n")
        buf.write("\n")
    return buf.getvalue()


# input helpers -----------------------------------------------------------------------------


def _group(args):
    return build_group(args.group)


def _pres(args):
    return parse_presentation(args.pres)


def _constraints(args, pres, group):
    """``--constrain "<word>@<class>"``; class is an element label or ``#<class id>``."""
    out = []
    for item in args.constrain or []:
        if "@" not in item:
            raise UsageError(f"--constrain expects <word>@<class representative>, got {item!r}")
        word_text, cls_text = item.rsplit("@", 1)
        word = parse_word(word_text, pres.generator_names)
        cls_text = cls_text.strip()
        if cls_text.startswith("#"):
            if not cls_text[1:].isdigit():
                raise UsageError(f"bad class id {cls_text!r}")
            cid = int(cls_text[1:])
            if not 0 <= cid < len(group.classes):
                raise UsageError(f"class id {cid} out of range")
        else:
            cid = int(group.class_of[group.element(cls_text)])
        out.append(homs.ClassConstraint((word,), cid))
    return out


def _quotient_fields(count, order):
    q = Fraction(count, order)
    return {"count": count, "group_order": order, "quotient": q, "divisible": q.denominator == 1}


# subcommands -----------------------------------------------------------------------------------


def cmd_group_info(args):
    group = _group(args)
    classes = [{"id": c.id, "representative": group.labels[c.representative], "size": c.size,
                "centralizer_order": c.centralizer_order,
                "element_order": group.element_order(c.representative)}
               for c in group.classes]
    return {"group": group.name, "order": group.order, "class_count": len(classes),
            "classes": classes}, EXIT_OK


def cmd_hom_count(args):
    group, pres = _group(args), _pres(args)
    result = homs.enumerate_homs(pres, group, args.budget, store=False, workers=args.workers)
    ab = abelianization(pres)
    report = {"presentation": pres.format(), "group": group.name}
    report.update(_quotient_fields(result.count, group.order))
    report.update({"free_rank": ab.free_rank, "torsion": list(ab.torsion_divisors)})
    status = EXIT_OK
    if ab.is_infinite and not report["divisible"]:
        status = EXIT_FAILED
    return report, status


def cmd_hom_constrained(args):
    group, pres = _group(args), _pres(args)
    cons = _constraints(args, pres, group)
    result = homs.enumerate_constrained(pres, group, cons, args.budget, store=False, workers=args.workers)
    report = {"presentation": pres.format(), "group": group.name,
              "constraints": [f"{c.words[0].format(pres.generator_names)} in class {c.class_id}" for c in cons]}
    report.update(_quotient_fields(result.count, group.order))
    return report, EXIT_OK


def cmd_torsor_verify(args):
    group, pres = _group(args), _pres(args)
    sigma = parse_sigma(args.sigma or "", pres.generator_names)
    cons = _constraints(args, pres, group)
    rep = homs.verify_torsor(pres, sigma, group, cons, args.budget, args.workers)
    report = {
        "presentation": pres.format(),
        "sigma": sigma.format(pres.generator_names),
        "group": group.name,
        "upstairs_count": rep.upstairs_count,
        "group_order": rep.group_order,
        "quotient": rep.quotient,
        "twisted_orbit_count": rep.orbit_count,
        "fiber_sizes_match": rep.fiber_sizes_match,
        "support_matches_twisted": rep.support_matches_twisted,
        "pass": rep.passed,
        "fibers": [{"base": " ".join(group.labels[i] for i in f.base) or "()", "size": f.size,
                    "stabilizer_order": f.stabilizer_order, "twisted": f.twisted}
                   for f in rep.fibers if f.twisted or f.size],
    }
    return report, EXIT_OK if rep.passed else EXIT_FAILED


def cmd_surface_table(args):
    us, vs = growth.surface_tables(args.max_genus, args.max_n)
    genera = list(range(1, args.max_genus + 1))
    cols = list(range(1, args.max_n + 1))
    tables = {name: {"rows": genera, "columns": cols, "values": rows}
              for name, rows in (("u", us), ("v", vs))}
    return {"tables": tables}, EXIT_OK


def cmd_growth(args):
    if (args.genus is None) == (args.pres is None):
        raise UsageError("give exactly one of --genus or --pres")
    source = args.genus if args.genus is not None else _pres(args)
    if args.method == "character" and args.genus is None:
        raise UsageError("--method character needs --genus")
    if args.pres is not None and not abelianization(source).is_infinite:
        print("warning: finite abelianization; u_n may not be integral", file=sys.stderr)
    result = growth.growth(source, args.max_n, args.method, args.budget, args.workers)
    h = [1] + list(result.hom_counts)
    report = {
        "source": f"genus {args.genus}" if args.genus is not None else source.format(),
        "method": args.method,
        "hom_counts": list(result.hom_counts),
        "u": list(result.u),
        "v": list(result.v),
        "product_form": growth.product_form_check(h, result.v, args.max_n),
        "congruences": [{"p": p, "k": k, "holds": growth.congruence_check(result.u, p, k)}
                        for p, k in growth.applicable_congruences(args.max_n)],
    }
    ok = report["product_form"] and all(c["holds"] for c in report["congruences"])
    return report, EXIT_OK if ok else EXIT_FAILED


def cmd_char_table(args):
    if args.file:
        table = frobenius.load_character_table(args.file)
        doc = frobenius.table_document(table)
        doc["degrees"] = [str(d) for d in table.degrees]
        return doc, EXIT_OK
    table = symchar.character_table(args.n)
    return {
        "n": table.n,
        "partitions": [" ".join(map(str, p)) or "()" for p in table.partitions],
        "class_sizes": list(table.class_sizes),
        "degrees": list(table.degrees),
        "values": [list(row) for row in table.values],
    }, EXIT_OK


def cmd_bs_check(args):
    rep = frobenius.bs_identity_check(args.n_sym, args.m, args.n, args.budget)
    report = {
        "group": f"S{args.n_sym}",
        "word": f"x^{-args.m} y x^{args.n} y^-1",
        "hom_count": rep.hom_count,
        "quotient": Fraction(rep.hom_count, rep.group_order),
        "characters": [{"partition": " ".join(map(str, r.partition)), "degree_times_s": r.degree_times_s,
                        "adams_inner_product": r.adams_inner, "equal": r.equal} for r in rep.rows],
        "pass": rep.passed,
    }
    if args.n == 1:
        group = build_group(f"S{args.n_sym}")
        report["stable_classes"] = frobenius.m_stable_class_count(group, args.m, args.budget)
    return report, EXIT_OK if rep.passed else EXIT_FAILED


def cmd_verify_paper(args):
    results = verification.run_all(echo=lambda line: print(line, file=sys.stderr))
    report = {
        "checks": [{"name": c.name, "pass": c.passed, "detail": c.detail} for c in results],
        "pass": all(c.passed for c in results),
    }
    return report, EXIT_OK if report["pass"] else EXIT_FAILED


# argument parsing ----------------------------------------------------------------------------


def _budget(text):
    value = int(text)
    if value < 10**4:
        raise argparse.ArgumentTypeError("budget must be at least 10^4")
    return value


def _workers(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("workers must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=_budget, default=None,
                        help="relator-letter evaluations allowed (default $HOMCOUNT_BUDGET or 10^8)")
    common.add_argument("--workers", type=_workers, default=os.cpu_count() or 1)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="homcount", description="Count homomorphisms from finitely presented groups into finite groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def group_and_pres(p, pres=True):
        p.add_argument("--group", required=True, help="S<n> | C<n> | SL2_<p> | PSL2_<p> | cayley:<path>")
        if pres:
            p.add_argument("--pres", required=True, help='e.g. "gens: x, y; rels: [x,y]"')

    g = sub.add_parser("group").add_subparsers(dest="action", required=True)
    p = g.add_parser("info", parents=[common])
    group_and_pres(p, pres=False)
    p.set_defaults(func=cmd_group_info)

    h = sub.add_parser("hom").add_subparsers(dest="action", required=True)
    p = h.add_parser("count", parents=[common])
    group_and_pres(p)
    p.set_defaults(func=cmd_hom_count)
    p = h.add_parser("constrained", parents=[common])
    group_and_pres(p)
    p.add_argument("--constrain", action="append", required=True,
                   help="<word>@<element label or #class id>; repeatable")
    p.set_defaults(func=cmd_hom_constrained)

    t = sub.add_parser("torsor").add_subparsers(dest="action", required=True)
    p = t.add_parser("verify", parents=[common])
    group_and_pres(p)
    p.add_argument("--sigma", default="", help='e.g. "x -> x^-1; y -> x y"')
    p.add_argument("--constrain", action="append")
    p.set_defaults(func=cmd_torsor_verify)

    p = sub.add_parser("surface-table", parents=[common])
    p.add_argument("--max-genus", type=int, default=5)
    p.add_argument("--max-n", type=int, default=5)
    p.set_defaults(func=cmd_surface_table)

    p = sub.add_parser("growth", parents=[common])
    p.add_argument("--genus", type=int)
    p.add_argument("--pres")
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--method", choices=("brute", "character"), default="brute")
    p.set_defaults(func=cmd_growth)

    c = sub.add_parser("char").add_subparsers(dest="action", required=True)
    p = c.add_parser("table", parents=[common])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--file", default=None, help="load and validate a JSON character table")
    p.set_defaults(func=cmd_char_table)

    b = sub.add_parser("bs").add_subparsers(dest="action", required=True)
    p = b.add_parser("check", parents=[common])
    p.add_argument("--n-sym", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_bs_check)

    v = sub.add_parser("verify").add_subparsers(dest="action", required=True)
    p = v.add_parser("paper", parents=[common])
    p.set_defaults(func=cmd_verify_paper)
    return parser


def execute(argv=None) -> tuple[int, str]:
    """Run one command; returns (exit status, rendered report).

    With ``--output`` the report is also written to that path.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), ""
    if args.budget is None:
        args.budget = homs.default_budget()
    try:
        if args.func is cmd_char_table and (args.n is None) == (args.file is None):
            raise UsageError("give exactly one of --n or --file")
        report, status = args.func(args)
        text = render(report, args.format)
    except BudgetExceeded as exc:
        status, text = EXIT_BUDGET, _error_doc(exc, args.format, cost=exc.cost, budget=exc.budget)
    except HomcountError as exc:
        status = EXIT_FAILED if exc.reason == "sigma_inconsistent" else EXIT_USAGE
        text = _error_doc(exc, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    return status, text


def _error_doc(exc, fmt, **extra) -> str:
    doc = {"status": "error", "reason": exc.reason, "message": str(exc), **extra}
    return render(doc, fmt)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    status, text = execute(argv)
    if "--output" not in argv and "-o" not in argv:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())

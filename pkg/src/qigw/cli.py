"""Command-line front end: ``qigw <subcommand> ...``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from itertools import combinations_with_replacement, product
from typing import List, Sequence

from .exact import format_number

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CONVENTIONS = {
    "labeling": "preimages over 0 and infinity both labeled",
    "normalization": "i^(sum d - 3g - n + 3) times the coefficient of eps^(2l) hbar^(g-l)",
    "gw_series": "connected, z_i^(d_i+1) marks tau_(d_i)(omega)",
}


class UsageError(Exception):
    pass


# output helpers -------------------------------------------------------------------------------

def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _ints(xs: Sequence[int] | None) -> str:
    return " ".join(str(x) for x in xs or ())


def _table_text(kind: str, columns: List[str], rows: List[list], fmt: str) -> str:
    conv = {"kind": kind, **CONVENTIONS}
    if fmt == "json":
        return json.dumps({"conventions": conv, "columns": columns, "rows": rows}, indent=1) + "\n"
    buf = io.StringIO()
    if fmt == "csv":
        buf.write("# " + "; ".join(f"{k}={v}" for k, v in conv.items()) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)
    else:
        buf.write("\t".join(columns) + "\n")
        for r in rows:
            buf.write("\t".join(str(x) for x in r) + "\n")
    return buf.getvalue()


# subcommands ---------------------------------------------------------------------------------

def cmd_qint(args) -> int:
    from .closedform import purely_quantum

    value = purely_quantum(args.d, args.g)
    if args.format == "json":
        text = json.dumps({"d": list(args.d), "g": args.g, "value": format_number(value)}) + "\n"
    else:
        text = format_number(value) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_hurwitz(args) -> int:
    from .closedform import gjv_hurwitz, hurwitz_oracle

    mu = tuple(args.mu)
    value = gjv_hurwitz(args.g, mu)
    record = {"g": args.g, "mu": list(mu), "value": format_number(value)}
    status = EXIT_OK
    if args.oracle:
        oracle = hurwitz_oracle(args.g, (sum(mu),), mu, args.labeling)
        record["oracle"] = format_number(oracle)
        if oracle != value:
            status = EXIT_FAIL
    if args.format == "json":
        text = json.dumps(record) + "\n"
    else:
        text = record["value"] + (f" (oracle {record['oracle']})" if args.oracle else "") + "\n"
    _emit(text, args.out)
    return status


def cmd_gw(args) -> int:
    from .gw import connected_series, disconnected_series

    a = tuple(args.a)
    d = tuple(args.d)
    need = sum(x + 1 for x in d)
    cap = args.cap if args.cap is not None else need
    if cap < need:
        raise UsageError(f"--cap {cap} is below sum(d+1) = {need}")
    build = disconnected_series if args.disconnected else connected_series
    value = build(sum(a), a, len(d), cap).invariant(d)
    if args.format == "json":
        text = json.dumps({"A": sum(a), "a": list(a), "d": list(d), "connected": not args.disconnected,
                           "value": format_number(value)}) + "\n"
    else:
        text = format_number(value) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_wedge_vev(args) -> int:
    from .wedge import fock_vev, parse_word, vev

    word = parse_word(args.word)
    cap = args.cap if args.cap is not None else 6
    series = (fock_vev if args.fock else vev)(word, cap=cap)
    coeffs = {e: c for e, c in series.coefficients().items() if c}
    if args.format == "json":
        record = {
            "word": args.word,
            "variables": list(series.variables),
            "cap": series.cap,
            "coefficients": [[list(e), format_number(c)] for e, c in sorted(coeffs.items())],
        }
        text = json.dumps(record) + "\n"
    else:
        terms = []
        for e, c in sorted(coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            mono = " ".join(f"{v}^{x}" for v, x in zip(series.variables, e) if x)
            terms.append(f"({format_number(c)}){(' ' + mono) if mono else ''}")
        text = (" + ".join(terms) or "0") + f" + O(deg {series.cap + 1})\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_quantum(args) -> int:
    from .closedform import CorrelatorKey
    from .quantization.correlators import QuantumConfig, normalize, quantum_correlator
    from .quantization.diffpoly import load_density
    from .quantization.correlators import register_density

    for spec in args.density or ():
        deg, _, path = spec.partition("=")
        if not path:
            raise UsageError(f"--density expects D=FILE, got {spec!r}")
        register_density(int(deg), load_density(path))
    if args.l > args.g:
        raise UsageError("--l must not exceed --g")
    cfg = QuantumConfig(window=args.window)
    raw = quantum_correlator(args.d, args.l, args.g - args.l, cfg)
    key = CorrelatorKey((0,) + tuple(args.d), args.l, args.g - args.l)
    value = normalize(key, raw)
    if args.format == "json":
        text = json.dumps({"d": [0] + list(args.d), "g": args.g, "l": args.l,
                           "raw": format_number(raw), "value": format_number(value)}) + "\n"
    else:
        text = format_number(value) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_crosscheck(args) -> int:
    from .checks import SUITES, SuiteBounds, run_suite

    names = args.suite or []
    if not names:
        raise UsageError(f"no suite selected; choose from {', '.join(sorted(SUITES))}")
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {unknown}; choose from {', '.join(sorted(SUITES))}")
    overrides = {"max_genus": args.g, "cap": args.cap, "window": args.window}
    bounds = SuiteBounds.from_env(**overrides)
    reports = [run_suite(n, bounds) for n in names]
    if args.format == "json":
        text = json.dumps({"bounds": bounds.as_dict(), "reports": [r.to_dict() for r in reports]}, indent=1) + "\n"
    else:
        text = "\n".join(r.render() for r in reports) + "\n"
    _emit(text, args.out)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def _qint_rows(max_g: int, max_n: int):
    from .closedform import purely_quantum

    rows = []
    for g in range(max_g + 1):
        for n in range(1 + 2 * (g == 0), max_n + 1):
            if 2 * g - 3 + n < 0:
                continue
            low = 2 * g - 3 + n
            for d in combinations_with_replacement(range(low + 2 * g + 1), n):
                if low <= sum(d) <= low + 2 * g and (sum(d) - low) % 2 == 0:
                    rows.append([g, _ints(d), format_number(purely_quantum(d, g))])
    return ["g", "d", "value"], rows


def _hurwitz_rows(max_g: int, max_degree: int):
    from .closedform import gjv_hurwitz
    from .partitions import partitions

    rows = []
    for g in range(max_g + 1):
        for deg in range(1, max_degree + 1):
            for mu in sorted(partitions(deg)):
                rows.append([g, _ints(mu), format_number(gjv_hurwitz(g, mu))])
    return ["g", "mu", "value"], rows


def _gw_rows(a: Sequence[int], n: int, cap: int):
    from .gw import connected_series

    s = connected_series(sum(a), tuple(a), n, cap)
    rows = []
    for d in product(range(cap), repeat=n):
        if sum(x + 1 for x in d) <= cap:
            rows.append([sum(a), _ints(a), n, _ints(d), format_number(s.invariant(d))])
    return ["A", "a", "n", "d", "value"], rows


def cmd_table(args) -> int:
    if args.kind == "qint":
        columns, rows = _qint_rows(args.g if args.g is not None else 2, args.n or 3)
    elif args.kind == "hurwitz":
        columns, rows = _hurwitz_rows(args.g if args.g is not None else 1, args.max_degree or 4)
    else:
        if not args.a:
            raise UsageError("table gw needs --a")
        columns, rows = _gw_rows(args.a, args.n or 1, args.cap or 6)
    fmt = args.format if args.format != "text" else "csv"
    _emit(_table_text(args.kind, columns, rows, fmt), args.out)
    return EXIT_OK


# parser --------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qigw", description="Quantum intersection numbers, Hurwitz numbers "
                                "and relative GW invariants of CP^1 in exact arithmetic.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=("text", "json")):
        sp.add_argument("--format", choices=fmt, default=fmt[0])
        sp.add_argument("--out", help="write to this file instead of stdout")
        return sp

    sp = common(sub.add_parser("qint", help="purely quantum intersection number <tau_d>_{0,g}"))
    sp.add_argument("--d", type=int, nargs="+", required=True)
    sp.add_argument("--g", type=int, required=True)
    sp.set_defaults(func=cmd_qint)

    sp = common(sub.add_parser("hurwitz", help="one-part double Hurwitz number H^g_{|mu|,mu}"))
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--mu", type=int, nargs="+", required=True)
    sp.add_argument("--oracle", action="store_true", help="also count in the symmetric group")
    sp.add_argument("--labeling", choices=("both", "source", "target", "none"), default="both")
    sp.set_defaults(func=cmd_hurwitz)

    sp = common(sub.add_parser("gw", help="<A, prod tau_{d_i}(omega), a> of CP^1 relative to 0 and infinity"))
    sp.add_argument("--a", type=int, nargs="+", required=True, help="ramification over infinity")
    sp.add_argument("--d", type=int, nargs="+", required=True)
    sp.add_argument("--cap", type=int)
    sp.add_argument("--disconnected", action="store_true")
    sp.set_defaults(func=cmd_gw)

    sp = common(sub.add_parser("wedge-vev", help="vacuum expectation of a word, e.g. 'a2 E0(z) a-2'"))
    sp.add_argument("word")
    sp.add_argument("--cap", type=int)
    sp.add_argument("--fock", action="store_true", help="evaluate on Fock states instead of rewriting")
    sp.set_defaults(func=cmd_wedge_vev)

    sp = common(sub.add_parser("quantum", help="<tau_0 tau_d>_{l,g-l} from the quantized KdV hierarchy"))
    sp.add_argument("--d", type=int, nargs="+", required=True, help="indices after the leading tau_0")
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--l", type=int, default=0)
    sp.add_argument("--window", type=int)
    sp.add_argument("--density", action="append", metavar="D=FILE", help="load Hbar_D from a density file")
    sp.set_defaults(func=cmd_quantum)

    sp = common(sub.add_parser("crosscheck", help="run cross-check suites"))
    sp.add_argument("--suite", nargs="*", help="formula2 theorem1-l0 hurwitz wedge-oracle moyal dilaton")
    sp.add_argument("--g", type=int, help="maximum genus")
    sp.add_argument("--cap", type=int)
    sp.add_argument("--window", type=int)
    sp.set_defaults(func=cmd_crosscheck)

    sp = common(sub.add_parser("table", help="write a table of values"), fmt=("csv", "json", "text"))
    sp.add_argument("kind", choices=("qint", "hurwitz", "gw"))
    sp.add_argument("--g", type=int, help="maximum genus")
    sp.add_argument("--n", type=int, help="maximum number of points (qint) or number of points (gw)")
    sp.add_argument("--max-degree", type=int, help="maximum degree (hurwitz)")
    sp.add_argument("--a", type=int, nargs="+")
    sp.add_argument("--cap", type=int)
    sp.set_defaults(func=cmd_table)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qigw {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError) as exc:
        print(str(exc).strip("'\""), file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

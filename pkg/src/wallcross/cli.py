"""Command-line front end.

Exit codes: 0 success, 1 negative verdict, 2 input error, 3 precondition
violation.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import classifier, oracle, presets, series, simples, stability
from .io import (Inputs, fmt_rational, parse_charge, parse_dimvec, parse_int, parse_quiver,
                 parse_rational, parse_table, parse_walls, parse_lattice)
from .quiver import InputError, PreconditionError

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _window(text: Sequence[str]) -> tuple[int, int]:
    lo, hi = (parse_int(x) for x in text)
    if lo > hi:
        raise InputError(f"empty window [{lo}, {hi}]")
    return lo, hi


# -- subcommands ------------------------------------------------------------------------
# each returns (results, warnings, exit code)

def cmd_walls(args, inp: Inputs):
    q = parse_quiver(inp.load(args.quiver))
    m = parse_dimvec(q, args.m)
    xi = parse_charge(q, inp.load(args.charge)) if args.charge else None
    rows = stability.wall_report(m, xi)
    res: dict[str, Any] = {"m": m.as_dict(), "count": len(rows), "walls": rows}
    if xi is not None:
        groups = stability.coincident_walls(stability.enumerate_walls(m), xi)
        res["coincident"] = [[str(w) for w in g] for g in groups]
    return res, [], EXIT_OK


def cmd_simples(args, inp: Inputs):
    q = parse_quiver(inp.load(args.quiver))
    m = parse_dimvec(q, args.m)
    verdict = simples.has_simple(q, m)
    return verdict.to_record(), [], EXIT_OK if verdict.exists else EXIT_NEGATIVE


def cmd_classify(args, inp: Inputs):
    if args.two_vertex is not None:
        a, b = (parse_int(x) for x in args.two_vertex)
        return classifier.classify_two_vertex(a, b).to_record(), [], EXIT_OK
    if args.irreducible is not None:
        n, h1 = (parse_int(x) for x in args.irreducible)
        return presets.classify_irreducible_wall(n, h1).to_record(), [], EXIT_OK
    if args.spec is None or args.m is None:
        raise InputError("--flop and --flip need a spec file and --m")
    rec = inp.load(args.spec)
    if args.flop:
        q = parse_quiver(rec)
        return classifier.classify_symmetric_flop(q, parse_dimvec(q, args.m)).to_record(), [], EXIT_OK
    spec = classifier.ExtendedQuiverSpec.from_record(rec)
    m = parse_dimvec(spec.base, args.m)
    verdict = classifier.classify_extended_flip(spec, m)
    warnings = []
    if verdict.kind is classifier.Kind.INDETERMINATE:
        warnings.append({"code": "W_MIXED_FRAMING",
                         "message": "framing data is mixed; neither the flip nor the flop case applies"})
    return verdict.to_record(), warnings, EXIT_OK


def _series_record(s: series.TruncatedSeries) -> dict:
    return {"window": list(s.window), "t_cap": s.t_cap, "rows": s.to_rows()}


def cmd_series(args, inp: Inputs):
    action = args.action
    window = _window(args.window)
    cap = parse_int(args.t_cap)
    if action == "macmahon":
        s = series.mac_mahon(parse_int(args.e), parse_int(args.qmax))
        coeffs = [fmt_rational(s.coeff(n, ())) for n in range(s.window[0], s.window[1] + 1)]
        return {"e": parse_int(args.e), "coefficients": coeffs}, [], EXIT_OK
    if action == "palindrome":
        table = parse_table(inp.load(_need(args.l_table, "--l-table")))
        ok = series.palindrome_check(table)
        return {"palindromic": ok, "first_mismatch": table.asymmetry()}, [], EXIT_OK if ok else EXIT_NEGATIVE
    if action == "pt-formula":
        n_tab = parse_table(inp.load(_need(args.n_table, "--n-table")))
        l_tab = parse_table(inp.load(_need(args.l_table, "--l-table")), n_tab.lattice)
        return _series_record(series.pt_product_formula(n_tab, l_tab, window, cap)), [], EXIT_OK
    if action == "wall-cross":
        l_tab = parse_table(inp.load(_need(args.l_table, "--l-table")))
        walls = parse_walls(inp.load(_need(args.walls, "--walls")), l_tab.lattice)
        if not series.palindrome_check(l_tab):
            raise PreconditionError("L table is not symmetric under n -> -n")
        start = series.pt_product_formula(series.InvariantTable(l_tab.lattice, {}), l_tab, window, cap)
        for wd in walls:
            start = series.apply_wall_crossing(start, wd)
        return _series_record(start), [], EXIT_OK
    if action == "telescope":
        n_tab = parse_table(inp.load(_need(args.n_table, "--n-table")))
        l_tab = parse_table(inp.load(_need(args.l_table, "--l-table")), n_tab.lattice)
        if args.walls:
            walls = parse_walls(inp.load(args.walls), n_tab.lattice)
        else:
            walls = series.walls_from_table(n_tab, cap)
        rep = series.telescope_check(n_tab, l_tab, walls, window, cap)
        return rep.to_record(), [], EXIT_OK if rep.ok else EXIT_NEGATIVE
    if action == "dtpt":
        rec = inp.load(_need(args.p_table, "--p-table"))
        lattice = parse_lattice(rec.get("classes")) if isinstance(rec, dict) else None
        table = parse_table(rec, lattice)
        rows = [(w, n, v) for (w, n), v in table.values.items()]
        p = series.series_from_rows(table.lattice.rank, rows, window, cap)
        return _series_record(series.dtpt_transform(p, parse_int(args.e))), [], EXIT_OK
    raise InputError(f"unknown series action {action!r}")


def _need(value, flag: str):
    if value is None:
        raise InputError(f"this action needs {flag}")
    return value


def _preset_params(extra: Sequence[str]) -> dict:
    params: dict[str, Any] = {}
    it = iter(extra)
    for tok in it:
        if not tok.startswith("--"):
            raise InputError(f"unexpected argument {tok!r}")
        key = tok[2:].replace("-", "_")
        if "=" in key:
            key, val = key.split("=", 1)
        else:
            val = next(it, None)
            if val is None:
                raise InputError(f"{tok} needs a value")
        v = parse_rational(val)
        params[key] = int(v) if v.denominator == 1 else v
    return params


def cmd_preset(args, inp: Inputs, extra: Sequence[str]):
    params = _preset_params(extra)
    try:
        report = presets.preset_report(args.name, **params)
    except TypeError as exc:
        raise InputError(f"bad preset parameters: {exc}") from None
    warnings = []
    ladder = report.get("ladder")
    if ladder:
        warnings.extend(ladder.get("warnings", []))
    return report, warnings, EXIT_OK


def cmd_oracle(args, inp: Inputs):
    q = parse_quiver(inp.load(args.quiver))
    m = parse_dimvec(q, args.m)
    p = parse_int(args.p)
    rep = oracle.search_simple(q, m, p, args.budget, None if args.all else 1)
    verdict = simples.has_simple(q, m)
    res = rep.to_record()
    res["criterion"] = verdict.to_record()
    warnings = []
    if rep.witnesses and not verdict.exists:
        warnings.append({"code": "W_ORACLE_CONFLICT",
                         "message": "finite-field witness found against a negative criterion verdict"})
    if not rep.witnesses and verdict.exists:
        warnings.append({"code": "W_ORACLE_ADVISORY",
                         "message": f"no absolutely simple representation over F_{p}; not evidence against existence"})
    return res, warnings, EXIT_OK


# -- plumbing -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="wallcross", description="Quiver wall-crossing toolkit.")
    ap.add_argument("--format", choices=("text", "structured"), default="text")
    ap.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("walls", help="enumerate walls of a primitive dimension vector")
    p.add_argument("quiver")
    p.add_argument("--m", required=True)
    p.add_argument("--charge")

    p = sub.add_parser("simples", help="decide existence of simple representations")
    p.add_argument("quiver")
    p.add_argument("--m", required=True)

    p = sub.add_parser("classify", help="classify a wall-crossing diagram")
    p.add_argument("spec", nargs="?")
    p.add_argument("--m")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--flop", action="store_true")
    g.add_argument("--flip", action="store_true")
    g.add_argument("--two-vertex", nargs=2, metavar=("A", "B"))
    g.add_argument("--irreducible", nargs=2, metavar=("N", "H1"))

    p = sub.add_parser("series", help="generating-series identities")
    p.add_argument("action", choices=("pt-formula", "wall-cross", "telescope", "dtpt",
                                      "macmahon", "palindrome"))
    p.add_argument("--n-table")
    p.add_argument("--l-table")
    p.add_argument("--p-table")
    p.add_argument("--walls")
    p.add_argument("--window", nargs=2, default=("-8", "8"), metavar=("LO", "HI"))
    p.add_argument("--t-cap", default="2")
    p.add_argument("--e", default="1")
    p.add_argument("--qmax", default="9")

    p = sub.add_parser("preset", help="reproduce a worked example")
    p.add_argument("name")

    p = sub.add_parser("oracle", help="finite-field simplicity search")
    p.add_argument("quiver")
    p.add_argument("--m", required=True)
    p.add_argument("--p", default="2")
    p.add_argument("--all", action="store_true", help="collect every witness")
    return ap


def _render_text(obj: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines += _render_text(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines += _render_text(v, indent + 1)
            else:
                lines.append(f"{pad}- {_inline(v)}")
    else:
        lines.append(f"{pad}{_inline(obj)}")
    return lines


def _flat(v) -> bool:
    if isinstance(v, dict):
        return False
    return all(not isinstance(x, (dict, list)) for x in v)


def _inline(v) -> str:
    if isinstance(v, str) and "\n" in v:
        return "\n" + v
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True, default=_json_default)
    return str(v)


def _json_default(o):
    if isinstance(o, Fraction):
        return fmt_rational(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _normalize(obj):
    return json.loads(json.dumps(obj, sort_keys=True, default=_json_default))


def main(argv: Sequence[str] | None = None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    inp = Inputs()
    inp.feed(json.dumps(argv))
    fmt = "structured" if "--format=structured" in argv or _flag_value(argv, "--format") == "structured" else "text"
    try:
        ap = build_parser()
        args, extra = ap.parse_known_args(argv)
        fmt = args.format
        if extra and args.command != "preset":
            raise InputError(f"unrecognized arguments: {' '.join(extra)}")
        if args.budget <= 0:
            raise InputError("--budget must be positive")
        if args.command == "preset":
            results, warnings, code = cmd_preset(args, inp, extra)
        else:
            handler = {"walls": cmd_walls, "simples": cmd_simples, "classify": cmd_classify,
                       "series": cmd_series, "oracle": cmd_oracle}[args.command]
            results, warnings, code = handler(args, inp)
        report = {"command": argv, "input_digest": inp.digest, "results": results,
                  "warnings": warnings, "exit_code": code}
    except oracle.BudgetExceeded as exc:
        code = EXIT_INPUT
        report = _error_report(argv, inp, "E_BUDGET", str(exc), code, required=exc.required)
    except PreconditionError as exc:
        code = EXIT_PRECONDITION
        report = _error_report(argv, inp, "E_PRECONDITION", str(exc), code)
    except InputError as exc:
        code = EXIT_INPUT
        report = _error_report(argv, inp, "E_INPUT", str(exc), code)
    report = _normalize(report)
    if fmt == "structured":
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(_render_text(report)) + "\n")
    return code


def _flag_value(argv: Sequence[str], flag: str):
    for i, tok in enumerate(argv[:-1]):
        if tok == flag:
            return argv[i + 1]
    return None


def _error_report(argv, inp: Inputs, code_name: str, message: str, code: int, **extra) -> dict:
    err = {"code": code_name, "message": message, **extra}
    return {"command": argv, "input_digest": inp.digest, "results": None,
            "warnings": [], "error": err, "exit_code": code}


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()

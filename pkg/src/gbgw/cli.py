"""Command-line front end.

Commands: ``correlator``, ``table``, ``tau``, ``verify``. Values are exact:
rationals as ``"p/q"`` strings, nu-polynomials as ``[[degree, "p/q"], ...]``.
Exit codes: 0 success, 1 verification failure or table mismatch, 2 usage
error, 3 stabilization failure. The JSON layout is described in
``docs/output-schema.md``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from importlib import resources
from itertools import combinations_with_replacement
from typing import List, Optional, Sequence, Tuple

from .core import NuPoly, format_rational
from .correlators import (CorrelatorKey, StabilizationError, connected_correlator, insertion_weight,
                          nu_deformed_from_connected)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_STABILIZATION = 0, 1, 2, 3

TABLES = {
    "A2": (2, "norbury", 10), "A3": (3, "norbury", 7), "A4": (4, "norbury", 4),
    "B2": (2, "nu", 7), "B3": (3, "nu", 4), "B4": (4, "nu", 3),
}
SUITES = ("umatrix", "virasoro", "kdv", "painleve", "miwa", "tricomi", "cross")


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# values and serialization
# ---------------------------------------------------------------------------

def encode(value):
    """JSON form of an exact value."""
    if isinstance(value, NuPoly):
        return value.to_pairs()
    return format_rational(Fraction(value))


def decode(obj):
    """Inverse of :func:`encode`."""
    if isinstance(obj, list):
        return NuPoly.from_pairs(obj)
    return Fraction(obj)


def flat(value) -> str:
    """CSV form: a rational, or nu-polynomial terms as ``degree:coefficient``."""
    if isinstance(value, NuPoly):
        return " ".join(f"{d}:{c}" for d, c in value.to_pairs())
    return format_rational(Fraction(value))


def plain(value) -> str:
    return str(value) if isinstance(value, NuPoly) else format_rational(Fraction(value))


def parse_nu(text: Optional[str]):
    if text is None or text == "symbolic":
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--nu expects a rational p/q or 'symbolic', got {text!r}") from exc


def parse_ells(text: str) -> Tuple[int, ...]:
    try:
        ells = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise UsageError(f"--ells expects comma-separated integers, got {text!r}") from exc
    if not ells or min(ells) < 0:
        raise UsageError("--ells needs at least one nonnegative index")
    return ells


def correlator_value(ells: Sequence[int], normalization: str, nu, order: Optional[int] = None) -> dict:
    """Record for one key; ``nu`` is a Fraction or None (symbolic); ``order``
    fixes the truncation order instead of escalating."""
    key = CorrelatorKey(ells)
    kw = {} if order is None or key.n == 1 else {"N": order}
    if normalization == "norbury":
        if nu not in (None, 0):
            raise UsageError("the norbury normalization is defined at nu = 0 only")
        cv = connected_correlator(key, Fraction(0), **kw)
        value = insertion_weight(key.ells) * cv.connected
        nu_field = "0"
    else:
        cv = connected_correlator(key, None, **kw)
        value = cv.connected
        if normalization == "nu":
            value = nu_deformed_from_connected(key, value)
        if nu is not None:
            value = value(nu)
        nu_field = "symbolic" if nu is None else format_rational(nu)
    return {
        "key": list(key.ells),
        "normalization": normalization,
        "nu": nu_field,
        "value": value,
        "provenance": cv.provenance,
        "certified_order": cv.certified_order,
    }


def _json_record(rec: dict) -> dict:
    return {k: encode(v) if k == "value" else v for k, v in rec.items()}


def render_records(records: List[dict], fmt: str, extra: Optional[dict] = None) -> str:
    if fmt == "json":
        payload = [_json_record(r) for r in records]
        body = payload[0] if extra is None and len(payload) == 1 else {**(extra or {}), "rows": payload}
        return json.dumps(body, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "normalization", "nu", "value"])
        for r in records:
            w.writerow([",".join(map(str, r["key"])), r["normalization"], r["nu"], flat(r["value"])])
        return buf.getvalue()
    lines = [f"<{' '.join(f'tau_{l}' for l in r['key'])}> [{r['normalization']}, nu={r['nu']}] = "
             f"{plain(r['value'])}" for r in records]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_correlator(args) -> Tuple[int, str]:
    ells = parse_ells(args.ells)
    if args.symbolic and args.normalization == "norbury":
        raise UsageError("the norbury normalization is defined at nu = 0 only")
    nu = None if args.symbolic else parse_nu(args.nu)
    rec = correlator_value(ells, args.normalization, nu, args.order)
    return EXIT_OK, render_records([rec], args.format)


def load_snapshot() -> dict:
    text = resources.files("gbgw.data").joinpath("reference_tables.json").read_text()
    return json.loads(text)


def table_keys(name: str, max_index: int) -> List[Tuple[int, ...]]:
    n = TABLES[name][0]
    keys = list(combinations_with_replacement(range(1, max_index + 1), n))
    return sorted(keys)


def _table_row(job):
    key, normalization = job
    return correlator_value(key, normalization, None)


def _diff(name: str, records: List[dict], strict: bool) -> Tuple[dict, bool]:
    snap = load_snapshot()[name]
    entries, known = snap["entries"], snap.get("known_discrepancies", {})
    mismatches, known_hits, unchecked = [], [], []
    for r in records:
        k = ",".join(map(str, r["key"]))
        if k not in entries:
            unchecked.append(k)
            continue
        expected = decode(entries[k])
        if expected != r["value"]:
            row = {"key": k, "snapshot": entries[k], "computed": encode(r["value"])}
            if k in known and decode(known[k]["certified"]) == r["value"]:
                known_hits.append({**row, "note": known[k]["note"]})
            else:
                mismatches.append(row)
    report = {"compared": len(records) - len(unchecked), "mismatches": mismatches,
              "known_discrepancies": known_hits, "unchecked": unchecked}
    ok = not mismatches and not (strict and known_hits)
    return report, ok


def cmd_table(args) -> Tuple[int, str]:
    name = args.selector
    n, normalization, top = TABLES[name]
    max_index = top if args.max_index is None else args.max_index
    if max_index < 1:
        raise UsageError("--max-index must be at least 1")
    keys = table_keys(name, max_index)
    jobs = [(k, normalization) for k in keys]
    if args.jobs and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_table_row, jobs))
    else:
        records = [_table_row(j) for j in jobs]
    extra = {"table": name, "max_index": max_index, "normalization": normalization}
    status = EXIT_OK
    if args.diff:
        report, ok = _diff(name, records, args.strict)
        extra["diff"] = report
        status = EXIT_OK if ok else EXIT_FAIL
    if args.format == "json":
        out = render_records(records, "json", extra)
    else:
        out = render_records(records, args.format)
        if args.diff:
            d = extra["diff"]
            out += (f"# diff: compared {d['compared']}, mismatches {len(d['mismatches'])}, "
                    f"known discrepancies {len(d['known_discrepancies'])}, unchecked {len(d['unchecked'])}\n")
            for row in d["mismatches"]:
                out += f"# mismatch {row['key']}: snapshot {row['snapshot']} computed {row['computed']}\n"
            for row in d["known_discrepancies"]:
                out += f"# known {row['key']}: snapshot {row['snapshot']} computed {row['computed']}\n"
    return status, out


def cmd_tau(args) -> Tuple[int, str]:
    from .core import level as mono_level
    from .virasoro import solve_tau, solve_tau_at
    if args.level < 0:
        raise UsageError("--level must be nonnegative")
    nu = None if args.symbolic else parse_nu(args.nu)
    P = solve_tau(args.level).poly if nu is None else solve_tau_at(args.level, nu)
    if args.log:
        P = P.log()
    terms = [(list(m), v) for m, v in P.items()]
    nu_field = "symbolic" if nu is None else format_rational(nu)
    kind = "log_tau" if args.log else "tau"
    if args.format == "json":
        body = {"kind": kind, "level": args.level, "nu": nu_field,
                "terms": [{"monomial": m, "level": mono_level(m), "coefficient": encode(v)} for m, v in terms]}
        return EXIT_OK, json.dumps(body, indent=2, sort_keys=True) + "\n"
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["monomial", "level", "coefficient"])
        for m, v in terms:
            w.writerow([" ".join(map(str, m)), mono_level(m), flat(v)])
        return EXIT_OK, buf.getvalue()
    lines = [f"{kind} through level {args.level}, nu={nu_field}"]
    for m, v in terms:
        mono = "*".join(f"t{i}^{e}" if e > 1 else f"t{i}" for i, e in enumerate(m) if e) or "1"
        lines.append(f"{mono}: {plain(v)}")
    return EXIT_OK, "\n".join(lines) + "\n"


def cmd_verify(args) -> Tuple[int, str]:
    from .suites import run_suite
    checks = run_suite(args.suite, level=args.level, order=args.order, max_g=args.max_g)
    passed = all(ok for _, ok in checks)
    if args.format == "json":
        body = {"suite": args.suite, "passed": passed,
                "checks": [{"name": name, "passed": ok} for name, ok in checks]}
        out = json.dumps(body, indent=2, sort_keys=True) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "check", "passed"])
        for name, ok in checks:
            w.writerow([args.suite, name, "pass" if ok else "fail"])
        out = buf.getvalue()
    else:
        out = "".join(f"{'PASS' if ok else 'FAIL'} {args.suite}: {name}\n" for name, ok in checks)
        out += f"{args.suite}: {'pass' if passed else 'fail'}\n"
    return (EXIT_OK if passed else EXIT_FAIL), out


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gbgw", description="Exact gBGW correlators and consistency checks.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("json", "csv", "plain"), default="json")
        sp.add_argument("--out", help="write output to this file instead of stdout")

    c = sub.add_parser("correlator", help="one correlator")
    c.add_argument("--ells", required=True, help="comma-separated indices, e.g. 1,1")
    c.add_argument("--nu", help="rational value p/q (default: symbolic, or 0 for norbury)")
    c.add_argument("--symbolic", action="store_true", help="keep nu symbolic")
    c.add_argument("--normalization", choices=("connected", "norbury", "nu"), default="connected")
    c.add_argument("--order", type=int, help="fixed truncation order (default: escalate until stable)")
    common(c)
    c.set_defaults(func=cmd_correlator)

    t = sub.add_parser("table", help="regenerate a reference table")
    t.add_argument("selector", choices=sorted(TABLES))
    t.add_argument("--max-index", type=int, help="largest index (default: full snapshot range)")
    t.add_argument("--diff", action="store_true", help="compare with the bundled snapshot")
    t.add_argument("--strict", action="store_true", help="with --diff, known discrepancies also fail")
    t.add_argument("--jobs", type=int, default=1, help="worker processes (output order is fixed)")
    common(t)
    t.set_defaults(func=cmd_table)

    u = sub.add_parser("tau", help="tau (or log tau) coefficients through a level")
    u.add_argument("--level", type=int, required=True)
    u.add_argument("--nu", help="rational value p/q (default: symbolic)")
    u.add_argument("--symbolic", action="store_true")
    u.add_argument("--log", action="store_true", help="emit log tau instead of tau")
    common(u)
    u.set_defaults(func=cmd_tau)

    v = sub.add_parser("verify", help="run an invariant suite")
    v.add_argument("--suite", choices=SUITES, required=True)
    v.add_argument("--level", type=int, help="level bound (suite-specific default)")
    v.add_argument("--order", type=int, help="truncation order for the umatrix suite")
    v.add_argument("--max-g", type=int, help="largest genus for the tricomi suite")
    common(v)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("level", "order", "max_g"):
        val = getattr(args, name, None)
        if val is not None and val < 0:
            parser.error(f"--{name.replace('_', '-')} must be nonnegative")
    if getattr(args, "symbolic", False) and getattr(args, "nu", None) is not None:
        parser.error("--nu and --symbolic are mutually exclusive")
    try:
        status, out = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except StabilizationError as exc:
        print(f"gbgw: {exc}", file=sys.stderr)
        return EXIT_STABILIZATION
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())

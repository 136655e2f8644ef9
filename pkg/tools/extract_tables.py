"""Regenerate src/gbgw/data/reference_tables.json from the LaTeX source of the tables.

Usage: python3 tools/extract_tables.py SOURCE.md

Only used when refreshing the bundled snapshot; the package never imports it.
"""
from __future__ import annotations

import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from gbgw.core import NU, NuPoly

SECTIONS = [
    ("A2", r"Two-point intersection numbers", "two-point intersection numbers"),
    ("A3", r"Three-point intersection numbers", "three-point intersection numbers"),
    ("A4", r"Four-point intersection numbers, $1\leq\ell_1", "four-point intersection numbers"),
    ("B2", r"Two-point correlators", "two-point nu-correlators"),
    ("B3", r"Three-point correlators", "three-point nu-correlators"),
    ("B4", r"Four-point intersection numbers, $1\leq \ell_1", "four-point nu-correlators"),
]

# snapshot entries contradicted by both engines (permutation sum, and the
# Virasoro recursion at nu = 0 through level 37); printed values are kept
KNOWN_DISCREPANCIES = {
    "A4": {
        "2,4,4,4": "6833699075187046505588085982125/18014398509481984",
        "3,3,4,4": "2196546302342063504275650101475/4503599627370496",
        "3,4,4,4": "2063609941904116608849164300819025/144115188075855872",
        "4,4,4,4": "2184526337444238321563247236173914675/4611686018427387904",
    },
}
DISCREPANCY_NOTE = "printed value disagrees with the permutation sum and the Virasoro recursion"


def strip_phantoms(text: str) -> str:
    out, i = [], 0
    while True:
        j = text.find(r"\phantom{", i)
        if j < 0:
            out.append(text[i:])
            return "".join(out)
        out.append(text[i:j])
        depth, k = 0, j + len(r"\phantom")
        while True:
            if text[k] == "{":
                depth += 1
            elif text[k] == "}":
                depth -= 1
                if depth == 0:
                    break
            k += 1
        i = k + 1


def parse_key(text: str) -> tuple:
    ells = []
    for l, p in re.findall(r"\\tau\s*_\{?(\d+)\}?(?:\^\{?(\d+)\}?)?", text):
        ells += [int(l)] * int(p or 1)
    return tuple(sorted(ells))


TOKEN = re.compile(r"\s*(\d+|NU|\*\*|[()+\-*/])")


def to_python(expr: str) -> str:
    expr = expr.replace(r"\left(", "(").replace(r"\right)", ")")
    while r"\frac{" in expr:
        j = expr.index(r"\frac{")
        parts, k = [], j + len(r"\frac")
        for _ in range(2):
            depth, start = 0, k
            while True:
                if expr[k] == "{":
                    depth += 1
                elif expr[k] == "}":
                    depth -= 1
                    if depth == 0:
                        break
                k += 1
            parts.append(expr[start + 1:k])
            k += 1
        expr = expr[:j] + f"(({parts[0]})/({parts[1]}))" + expr[k:]
    expr = re.sub(r"\\nu\s*\^\s*\{?(\d+)\}?", r"NU**\1", expr)
    expr = expr.replace(r"\nu", "NU").replace("{", "(").replace("}", ")")
    tokens, pos = [], 0
    expr = expr.strip()
    while pos < len(expr):
        m = TOKEN.match(expr, pos)
        if not m:
            raise ValueError(f"cannot tokenize {expr[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    out, prev = [], None
    for t in tokens:
        operand_end = prev is not None and (prev in (")", "NU") or prev.isdigit())
        operand_start = t in ("(", "NU") or t.isdigit()
        after_power = len(out) > 0 and out[-1] == "**"
        if operand_end and operand_start and not after_power:
            out.append("*")
        out.append(t if (after_power or not t.isdigit()) else f"F({t})")
        prev = t
    return " ".join(out)


def evaluate(expr: str):
    value = eval(to_python(expr), {"F": Fraction, "NU": NU})
    return value


def entries(block: str):
    block = strip_phantoms(block)
    for junk in (r"\begin{tiny}", r"\end{tiny}", r"\begin{align*}", r"\end{align*}", r"\qquad", "\\\\", "&"):
        block = block.replace(junk, " ")
    pieces = block.split(r"\left\langle")[1:]
    for piece in pieces:
        head, _, expr = piece.partition("=")
        key = parse_key(head.split(r"\right\rangle")[0])
        yield key, expr.strip()


def main(path: str):
    text = Path(path).read_text()
    starts = []
    for name, marker, label in SECTIONS:
        starts.append((text.index(marker), name, label))
    starts.sort()
    tables = {}
    for i, (pos, name, label) in enumerate(starts):
        end = starts[i + 1][0] if i + 1 < len(starts) else text.index(r"\bibliographystyle")
        block = text[pos:end]
        block = block[block.index(r"\begin{tiny}"):block.index(r"\end{tiny}")]
        rows = {}
        for key, expr in entries(block):
            v = evaluate(expr)
            if name.startswith("A"):
                v = v if isinstance(v, Fraction) else v[0]
                rows[",".join(map(str, key))] = f"{v.numerator}/{v.denominator}"
            else:
                rows[",".join(map(str, key))] = NuPoly(v.coeffs if isinstance(v, NuPoly) else {0: v}).to_pairs()
        tables[name] = {"source": f"reference table: {label}", "entries": rows}
        if name in KNOWN_DISCREPANCIES:
            tables[name]["known_discrepancies"] = {
                k: {"certified": v, "note": DISCREPANCY_NOTE} for k, v in KNOWN_DISCREPANCIES[name].items()}
    out = Path(__file__).resolve().parent.parent / "src" / "gbgw" / "data" / "reference_tables.json"
    out.write_text(json.dumps(tables, indent=1, sort_keys=True) + "\n")
    print({k: len(v["entries"]) for k, v in tables.items()})


if __name__ == "__main__":
    main(sys.argv[1])

"""Command-line surface: basis enumeration, composition, rewriting, and the
cross-validation suites, with json/csv/text output and optional figures.

Word syntax: whitespace-separated letters applied right to left.
`R3 R1` and `bR2` are unary operations (b marks the Bockstein at odd
primes), a trailing `B` marks the self-bracket of an even-degree class,
`Sq2`, `P1`, `bP1` and `b` are Steenrod letters.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import checks, steenrod
from .fpcore import Prime
from .free_algebra import FreeAlgebra
from .power_ring import RWord, normalize_rword, op_basis, r_word_drop, rword_exists


class WordSyntaxError(ValueError):
    pass


def parse_word(p: int, text: str):
    """Parse a mixed word into tagged letters, applied right to left."""
    letters = []
    b_exp = 0
    for tok in text.split():
        low = tok
        if low == "B":
            b_exp += 1
            continue
        if low.startswith("Sq"):
            if p != 2:
                raise WordSyntaxError("Sq letters need p = 2")
            letters.append(("S", int(low[2:])))
        elif low.startswith("bP"):
            letters.append(("S", (1, int(low[2:]))))
        elif low == "b":
            letters.append(("S", (1, 0)))
        elif low.startswith("P"):
            letters.append(("S", (0, int(low[1:]))))
        elif low.startswith("bR"):
            if p == 2:
                raise WordSyntaxError("bR letters need an odd prime")
            letters.append(("R", (1, int(low[2:]))))
        elif low.startswith("R"):
            idx = int(low[1:])
            letters.append(("R", idx if p == 2 else (0, idx)))
        else:
            raise WordSyntaxError(f"cannot parse letter {tok!r}")
    if b_exp > 1:
        raise WordSyntaxError("at most one trailing B")
    return tuple(letters), b_exp


def _display_degree(deg: int, cohomological: bool) -> int:
    return -deg if cohomological else deg


def emit_rows(args, meta: dict, rows: list) -> None:
    if args.format == "json":
        print(json.dumps({"meta": meta, "rows": rows}, indent=2))
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["word", "degree", "weight", "coeff"])
        for r in rows:
            writer.writerow([r.get("word", ""), r.get("degree", ""),
                             r.get("weight", ""), r.get("coeff", "")])
        sys.stdout.write(buf.getvalue())
    else:
        for r in rows:
            coeff = f"  coeff={r['coeff']}" if "coeff" in r else ""
            print(f"{r['word']:<28} degree={r['degree']:<6} weight={r['weight']}{coeff}")


def cmd_basis(args) -> int:
    p = int(Prime(args.prime))
    window = (args.min_degree, args.max_degree)
    meta = vars(args).copy()
    meta.pop("func", None)
    rows = []
    if args.kind == "unary":
        for rw in op_basis(p, args.source, args.weight_cap, window):
            deg = args.source - rw.degree_drop(args.source)
            rows.append({"word": str(rw), "degree": _display_degree(deg, args.cohomological),
                         "weight": rw.weight()})
    elif args.kind in ("free", "bm"):
        gens = [int(x) for x in args.gens.split(",")]
        alg = FreeAlgebra(p, gens)
        if args.kind == "free":
            for el in alg.free_basis(window, args.weight_cap):
                word = str(el.rword(p))
                gen_word = "".join(f"x{i+1}" for i in el.word)
                if el.dbl:
                    gen_word = f"[{gen_word},{gen_word}]"
                rows.append({"word": f"{word}({gen_word})" if word != "1" else gen_word,
                             "degree": _display_degree(alg.elem_degree(el), args.cohomological),
                             "weight": alg.elem_weight(el)})
        else:
            for s in alg.bm_basis(window, args.weight_cap):
                gen_word = "".join(f"x{i+1}" for i in s.word)
                rows.append({"word": f"{list(s.seq)};e={s.e};{gen_word}",
                             "degree": _display_degree(alg.bm_degree(s), args.cohomological),
                             "weight": alg.bm_weight(s)})
    elif args.kind == "slinear":
        table, listing = slinear_basis_rows(p, args.source, window, args.weight_cap)
        for word, deg, wt in listing:
            rows.append({"word": word, "degree": _display_degree(deg, args.cohomological),
                         "weight": wt})
    else:
        print(f"unknown basis kind {args.kind}", file=sys.stderr)
        return 2
    emit_rows(args, meta, rows)
    if args.figure:
        from .free_algebra import DimTable
        from .plotting import dims_figure
        table = DimTable.count((r["degree"], r["weight"]) for r in rows)
        dims_figure(table, args.figure, f"{args.kind} basis")
    return 0


def slinear_basis_rows(p: int, source: int, window, weight_cap: int):
    from .free_algebra import DimTable
    lo, hi = window
    swords = steenrod.admissible_steenrod_words(p, max(0, source - lo))
    gens = []
    names = []
    for sw in swords:
        d = source - steenrod.steenrod_word_degree(p, sw)
        if _max_reachable(p, d, weight_cap) < lo:
            continue
        gens.append(d)
        if p == 2:
            names.append("".join(f"Sq{a}" for a in sw) or "1")
        else:
            names.append("".join(("b" if e else "") + (f"P{n}" if n else "") for e, n in sw) or "1")
    alg = FreeAlgebra(p, gens)
    listing = []
    table = DimTable()
    for el in alg.free_basis(window, weight_cap):
        gen_word = ",".join(names[i] for i in el.word)
        if el.dbl:
            gen_word = f"[{gen_word}|{gen_word}]"
        word = str(el.rword(p))
        label = f"{word}({gen_word})" if word != "1" else f"({gen_word})"
        deg, wt = alg.elem_degree(el), alg.elem_weight(el)
        listing.append((label, deg, wt))
        table.cells[(deg, wt)] = table.cells.get((deg, wt), 0) + 1
    return table, listing


def _max_reachable(p: int, t: int, weight_cap: int) -> int:
    """Largest degree an operation word within the weight cap can reach from
    a degree-t class (greedy minimal-drop chains)."""
    best = t
    cur = t
    length = 0
    while p ** (length + 1) <= weight_cap:
        length += 1
        cur = p * cur - p + 1 if (p == 2 or cur % 2) else cur  # bottom chain
        best = max(best, cur)
    return best


def cmd_compose(args) -> int:
    p = int(Prime(args.prime))
    try:
        inner, binner = parse_word(p, args.inner)
        outer, bouter = parse_word(p, args.outer)
    except WordSyntaxError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    if binner or bouter or any(tag == "S" for tag, _ in inner + outer):
        print("error: compose handles unary R-words", file=sys.stderr)
        return 2
    rinner = tuple(payload for _, payload in inner)
    router = tuple(payload for _, payload in outer)
    j = args.source
    if not rword_exists(p, rinner, j):
        print(f"error: {args.inner!r} is not defined on degree {j}", file=sys.stderr)
        return 2
    mid = j - r_word_drop(p, rinner)
    if not rword_exists(p, router, mid):
        print(f"error: {args.outer!r} is not defined on degree {mid}", file=sys.stderr)
        return 2
    nf = normalize_rword(p, router + rinner, j)
    rows = [{"word": str(RWord(p, w)), "degree":
             _display_degree(j - r_word_drop(p, w), args.cohomological),
             "weight": p ** len(w), "coeff": c}
            for w, c in sorted(nf.items())]
    if not rows:
        rows = [{"word": "0", "degree": "", "weight": "", "coeff": 0}]
    meta = {k: v for k, v in vars(args).items() if k != "func"}
    emit_rows(args, meta, rows)
    return 0


def cmd_rewrite(args) -> int:
    p = int(Prime(args.prime))
    try:
        letters, b_exp = parse_word(p, args.word)
    except WordSyntaxError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    if b_exp:
        print("error: rewrite does not take B suffixes", file=sys.stderr)
        return 2
    j = args.source
    meta = {k: v for k, v in vars(args).items() if k != "func"}
    if all(tag == "R" for tag, _ in letters):
        nf = normalize_rword(p, tuple(pl for _, pl in letters), j)
        rows = [{"word": str(RWord(p, w)),
                 "degree": _display_degree(j - r_word_drop(p, w), args.cohomological),
                 "weight": p ** len(w), "coeff": c}
                for w, c in sorted(nf.items())]
    else:
        out = steenrod.canonicalize(p, letters, j)
        rows = []
        for t, c in sorted(out.items(), key=lambda kv: str(kv[0])):
            rows.append({"word": format_term(p, t),
                         "degree": _display_degree(steenrod.term_degree(p, t, j),
                                                   args.cohomological),
                         "weight": steenrod.term_weight(p, t), "coeff": c})
    if not rows:
        rows = [{"word": "0", "degree": "", "weight": "", "coeff": 0}]
    emit_rows(args, meta, rows)
    return 0


def format_term(p: int, t) -> str:
    rletters, node = t
    rw = str(RWord(p, rletters)) if rletters else ""
    if node[0] == "gen":
        if p == 2:
            sw = "".join(f"Sq{a}" for a in node[1])
        else:
            sw = "".join(("b" if e else "") + (f"P{n}" if n else "b") for e, n in node[1])
        inner = f"{sw}(x)" if sw else "x"
    else:
        inner = f"[{format_term(p, node[1])}, {format_term(p, node[2])}]"
    return f"{rw} {inner}".strip()


def cmd_dims(args) -> int:
    p = int(Prime(args.prime))
    gens = [int(x) for x in args.gens.split(",")]
    alg = FreeAlgebra(p, gens)
    window = (args.min_degree, args.max_degree)
    table = alg.dims_free(window, args.weight_cap) if args.basis == "free" \
        else alg.dims_bm(window, args.weight_cap)
    rows = [{"word": f"weight {wt}", "degree": _display_degree(deg, args.cohomological),
             "weight": wt, "coeff": n}
            for wt, deg, n in table.rows()]
    meta = {k: v for k, v in vars(args).items() if k != "func"}
    emit_rows(args, meta, rows)
    if args.figure:
        from .plotting import dims_figure
        dims_figure(table, args.figure,
                    f"dims p={p} gens={gens} ({args.basis})")
    return 0


def cmd_check(args) -> int:
    p = int(Prime(args.prime))
    reports = []
    if args.what == "bm":
        gens = [int(x) for x in args.gens.split(",")]
        window = (args.min_degree, args.max_degree)
        reports.append(checks.check_bm(p, gens, args.weight_cap, window))
    elif args.what == "bar":
        window = (args.min_degree, args.max_degree)
        reports.append(checks.check_bar(args.source, args.weight_cap_bar, window))
        if args.figure and reports[-1].rows:
            from .plotting import bar_report_figure
            bar_report_figure(reports[-1].rows, args.figure)
    elif args.what == "adem":
        reports.append(checks.check_adem(p, args.index_bound, args.source_bound))
    elif args.what == "lie":
        gens = [int(x) for x in args.gens.split(",")]
        reports.append(checks.check_lie(p, gens, args.weight_cap))
    elif args.what == "nishida":
        reports.append(checks.check_nishida(p, args.index_bound))
    elif args.what == "stability":
        reports.append(checks.check_stability(p, args.index_bound, args.source_bound))
    else:
        print(f"unknown check {args.what}", file=sys.stderr)
        return 2
    ok = all(r.passed for r in reports)
    if args.format == "json":
        print(json.dumps({"meta": {k: v for k, v in vars(args).items() if k != "func"},
                          "rows": [{"name": r.name, "passed": r.passed,
                                    "detail": r.detail} for r in reports]}, indent=2))
    else:
        for r in reports:
            print(r.line())
    return 0 if ok else 1


def _add_common(sp, with_gens=False, with_window=True):
    sp.add_argument("-p", "--prime", type=int, default=2)
    sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
    sp.add_argument("--cohomological", action="store_true",
                    help="display cohomological (negated) degrees")
    sp.add_argument("--seed", type=int, default=0, help="seed for sampled runs")
    sp.add_argument("--jobs", type=int, default=1, help="parallel cells (advisory)")
    sp.add_argument("--figure", help="write a matplotlib figure to this path")
    if with_gens:
        sp.add_argument("--gens", default="1", help="comma-separated generator degrees")
    if with_window:
        sp.add_argument("--min-degree", type=int, default=-20)
        sp.add_argument("--max-degree", type=int, default=20)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="partition-ops",
        description="operation calculus on homotopy of spectral partition Lie "
                    "algebras / mod-p TAQ cohomology")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("basis", help="enumerate operation or algebra bases")
    b.add_argument("--kind", choices=("unary", "free", "bm", "slinear"), default="unary")
    b.add_argument("-j", "--source", type=int, default=0)
    b.add_argument("--weight-cap", type=int, default=2,
                   help="weight exponent cap (unary/slinear) or weight cap (free/bm)")
    _add_common(b, with_gens=True)
    b.set_defaults(func=cmd_basis)

    c = sub.add_parser("compose", help="compose two unary operation words")
    c.add_argument("outer")
    c.add_argument("inner")
    c.add_argument("-j", "--source", type=int, required=True)
    _add_common(c, with_window=False)
    c.set_defaults(func=cmd_compose)

    r = sub.add_parser("rewrite", help="normalize a mixed operation word")
    r.add_argument("word")
    r.add_argument("-j", "--source", type=int, required=True,
                   help="degree of the class the word is applied to")
    _add_common(r, with_window=False)
    r.set_defaults(func=cmd_rewrite)

    d = sub.add_parser("dims", help="graded dimension table of a free algebra")
    d.add_argument("--basis", choices=("free", "bm"), default="free")
    d.add_argument("--weight-cap", type=int, default=4)
    _add_common(d, with_gens=True)
    d.set_defaults(func=cmd_dims)

    k = sub.add_parser("check", help="run a cross-validation suite")
    k.add_argument("what", choices=("bm", "bar", "adem", "lie", "nishida", "stability"))
    k.add_argument("-j", "--source", type=int, default=1)
    k.add_argument("--weight-cap", type=int, default=6)
    k.add_argument("-W", "--weight-cap-bar", type=int, default=4)
    k.add_argument("--index-bound", type=int, default=8)
    k.add_argument("--source-bound", type=int, default=4)
    _add_common(k, with_gens=True)
    k.set_defaults(func=cmd_check)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

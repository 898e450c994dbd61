"""Cross-validation suites: every claimed basis, relation, and rewrite is
checked against an independent route (sequence counts, bar homology,
confluence of rewrite orders, classical Lie identities, degree bookkeeping).
Each check returns a small report consumed by the CLI and the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import bar, ringoid, steenrod
from .free_algebra import FreeAlgebra
from .power_ring import (
    RWord, _adem_window_ok, normalize_rword, to_R_letters,
    translation_bijection_ok, verify_adem_R, stable_under_suspension,
)
from .ringoid import ADDITIVE, FULL
from .lie import FreeShiftedLie, LieSymbol


@dataclass
class CheckReport:
    name: str
    passed: bool
    detail: str = ""
    rows: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"[{status}] {self.name}{extra}"


# -- dimension agreement -------------------------------------------------------


def check_bm(p: int, gen_degrees, weight_cap: int, degree_window) -> CheckReport:
    alg = FreeAlgebra(p, gen_degrees)
    a = alg.dims_free(degree_window, weight_cap)
    b = alg.dims_bm(degree_window, weight_cap)
    bad = a.diff(b)
    rows = [(wt, deg, n) for (wt, deg, n) in a.rows()]
    name = f"bm p={p} gens={list(gen_degrees)} wcap={weight_cap} window={degree_window}"
    if bad:
        return CheckReport(name, False, f"{len(bad)} mismatched cells: {bad[:5]}", rows)
    return CheckReport(name, True, f"{a.total()} classes in {len(a.nonzero())} cells", rows)


# -- bar oracle ------------------------------------------------------------------


def check_bar(gen_degree: int, weight_cap: int, degree_window) -> CheckReport:
    ok, rows = bar.compare_with_E2(gen_degree, weight_cap, degree_window)
    bad = [r for r in rows if not r[5]]
    name = f"bar p=2 j={gen_degree} W={weight_cap} window={degree_window}"
    if not ok:
        return CheckReport(name, False, f"{len(bad)} mismatched cells: {bad[:5]}", rows)
    return CheckReport(name, True, f"{len(rows)} cells agree", rows)


# -- rewriting coherence ------------------------------------------------------------


def _letters_for(p: int, bound: int):
    if p == 2:
        return list(range(-bound, bound + 1))
    return [(e, i) for i in range(-bound, bound + 1) for e in (0, 1)]


def dual_confluence_sweep(p: int, index_bound: int, source_bound: int,
                          length: int = 3, variants=(ADDITIVE, FULL)) -> CheckReport:
    letters = _letters_for(p, index_bound)
    bad = []
    total = 0
    for variant in variants:
        if p > 2 and variant == FULL:
            continue  # one bound system at odd p
        for j in range(-source_bound, source_bound + 1):
            for word in itertools.product(letters, repeat=length):
                if not ringoid.word_exists(p, variant, j, word):
                    continue
                total += 1
                left = ringoid.normal_form_word(p, variant, j, word, "leftmost")
                right = ringoid.normal_form_word(p, variant, j, word, "rightmost")
                if left != right:
                    bad.append((variant, j, word))
    name = f"dual confluence p={p} |i|<={index_bound} |j|<={source_bound} len={length}"
    if bad:
        return CheckReport(name, False, f"{len(bad)} divergent words: {bad[:3]}")
    return CheckReport(name, True, f"{total} words confluent")


def adem_verification_sweep(p: int, index_bound: int, source_bound: int) -> CheckReport:
    bad = []
    total = 0
    for j in range(-source_bound, source_bound + 1):
        if p == 2:
            pairs = itertools.product(range(-index_bound, index_bound + 1), repeat=2)
            eps = [(0, 0)]
        else:
            pairs = itertools.product(range(-index_bound, index_bound + 1), repeat=2)
            eps = [(0, 0), (0, 1), (1, 0), (1, 1)]
        for a, b in pairs:
            for ea, eb in eps:
                if not _adem_window_ok(p, j, a, b, ea, eb):
                    continue
                total += 1
                if not verify_adem_R(p, j, a, b, ea, eb):
                    bad.append((j, a, b, ea, eb))
    name = f"verify_adem_R p={p} indices<={index_bound} |j|<={source_bound}"
    if bad:
        return CheckReport(name, False, f"{len(bad)} failing pairs: {bad[:5]}")
    return CheckReport(name, True, f"{total} relation instances hold")


def translation_sweep(p: int, source_bound: int, filtration_cap: int, degree_window) -> CheckReport:
    bad = [j for j in range(-source_bound, source_bound + 1)
           if not translation_bijection_ok(p, j, filtration_cap, degree_window)]
    name = f"translation bijection p={p} |j|<={source_bound}"
    if bad:
        return CheckReport(name, False, f"broken at sources {bad}")
    return CheckReport(name, True, "weight- and degree-preserving bijection")


def check_adem(p: int, index_bound: int = 8, source_bound: int = 4,
               verify_bound: int = 12) -> CheckReport:
    parts = [
        dual_confluence_sweep(p, index_bound, source_bound),
        adem_verification_sweep(p, verify_bound, source_bound),
        translation_sweep(p, source_bound, 3, (-40, 40)),
    ]
    ok = all(r.passed for r in parts)
    detail = "; ".join(r.line() for r in parts)
    return CheckReport(f"adem p={p}", ok, detail, rows=[r.line() for r in parts])


# -- restricted Lie suite --------------------------------------------------------------


def check_lie(p: int, gen_degrees, weight_cap: int = 6) -> CheckReport:
    lie = FreeShiftedLie(p, gen_degrees)
    syms = [s for s in lie.basis_symbols(weight_cap)]
    failures = []

    def el(s):
        return {s: 1}

    # graded antisymmetry and Jacobi on basis triples within the weight cap
    pairs = [(a, b) for a in syms for b in syms
             if lie.symbol_weight(a) + lie.symbol_weight(b) <= weight_cap]
    for a, b in pairs:
        da, db = lie.symbol_degree(a), lie.symbol_degree(b)
        lhs = lie.bracket(el(a), el(b))
        rhs = lie.scale(lie.bracket(el(b), el(a)), (-1) ** (da * db))
        if lhs != rhs:
            failures.append(("antisym", a, b))
    triples = [(a, b, c) for a in syms for b in syms for c in syms
               if lie.symbol_weight(a) + lie.symbol_weight(b) + lie.symbol_weight(c) <= weight_cap]
    for x, y, z in triples:
        dx, dy, dz = (lie.symbol_degree(s) for s in (x, y, z))
        t1 = lie.scale(lie.bracket(el(x), lie.bracket(el(y), el(z))), (-1) ** (dx * dz))
        t2 = lie.scale(lie.bracket(el(y), lie.bracket(el(z), el(x))), (-1) ** (dy * dx))
        t3 = lie.scale(lie.bracket(el(z), lie.bracket(el(x), el(y))), (-1) ** (dz * dy))
        if lie.add(t1, t2, t3):
            failures.append(("jacobi", x, y, z))

    # ad(x^[p]) = ad(x)^p against every basis class in range
    for s in syms:
        d = lie.symbol_degree(s)
        if p > 2 and d % 2 == 0:
            continue
        if lie.symbol_weight(s) * p > weight_cap:
            continue
        restricted = lie.restriction_expand(el(s))
        for y in syms:
            if lie.symbol_weight(y) + lie.symbol_weight(s) * p > weight_cap:
                continue
            via_restriction = lie.bracket(el(y), restricted)
            via_ad = lie.ad_power(el(s), el(y), p)
            if via_restriction != via_ad:
                failures.append(("ad-power", s, y))

    # (x+y)^[p] = x^[p] + y^[p] + sum s_i/i as operators (via ad) and directly
    from .fpcore import inverse_mod_p
    gens = [lie.generator(i) for i in range(len(gen_degrees))]
    for i, x in enumerate(gens):
        for jdx in range(i + 1, len(gens)):
            y = gens[jdx]
            dx = lie.element_degree(x)
            dy = lie.element_degree(y)
            if p > 2 and (dx % 2 == 0 or dy % 2 == 0):
                continue
            lhs = lie.restriction_of_sum(lie.add(x, y))
            rhs = lie.add(lie.restriction_of_sum(x), lie.restriction_of_sum(y))
            for k, sk in enumerate(lie.s_coefficients(x, y), start=1):
                rhs = lie.add(rhs, lie.scale(sk, inverse_mod_p(k, p)))
            if lhs != rhs:
                failures.append(("sum-restriction", i, jdx))
            # operator identity: ad((x+y)^[p]) = ad(x+y)^p
            for z in gens:
                via_r = lie.bracket(z, lhs)
                via_ad = lie.ad_power(lie.add(x, y), z, p)
                if via_r != via_ad:
                    failures.append(("sum-ad", i, jdx))
    name = f"lie p={p} gens={list(gen_degrees)} wcap={weight_cap}"
    if failures:
        return CheckReport(name, False, f"{len(failures)} failures: {failures[:4]}")
    return CheckReport(name, True, f"{len(syms)} basis classes checked")


# -- Nishida suite -----------------------------------------------------------------------


def check_nishida(p: int = 2, index_bound: int = 8) -> CheckReport:
    failures = []
    degrees = range(-3, 4)
    if p == 2:
        s_letters = range(1, index_bound + 1)
        r_letters = range(-index_bound, index_bound + 1)

        def rdrop(b):
            return b

        def sdrop(a):
            return a
    else:
        s_letters = [(0, n) for n in range(1, index_bound // 2 + 1)]
        r_letters = [(e, i) for i in range(-2, index_bound // 2 + 1) for e in (0, 1)]
        rdrop = lambda lt: 2 * (p - 1) * lt[1] + lt[0]
        sdrop = lambda lt: 2 * (p - 1) * lt[1] + lt[0]

    from .power_ring import r_letter_defined
    for n in degrees:
        for s in s_letters:
            for r in r_letters:
                if not r_letter_defined(p, r, n):
                    continue
                out = steenrod.nishida_rewrite(p, s, r, n)
                want_deg = n - rdrop(r) - sdrop(s)
                want_wt = p
                for t, c in out.items():
                    if steenrod.term_degree(p, t, n) != want_deg:
                        failures.append(("degree", n, s, r, t))
                    if steenrod.term_weight(p, t) != want_wt:
                        failures.append(("weight", n, s, r, t))

    if p == 2:
        # local confluence of the two canonicalization orders
        for n in range(-2, 3):
            for a in range(1, 5):
                for b in range(-4, 5):
                    for c in range(-4, 5):
                        letters = (("S", a), ("R", b), ("R", c))
                        lhs = steenrod.canonicalize(2, letters, n, "rightmost")
                        rhs = steenrod.canonicalize(2, letters, n, "leftmost")
                        if lhs != rhs:
                            failures.append(("confluence", n, a, b, c))
        # the printed bottom case: Sq^1 on the bottom of an even class
        for n in (-2, 0, 2):
            b = -n + 1
            out = steenrod.nishida_rewrite(2, 1, b, n)
            want = {((), ("brk", ((), ("gen", ())), ((), ("gen", (1,))))): 1}
            if out != want:
                failures.append(("bottom", n, out))
    name = f"nishida p={p} indices<={index_bound}"
    if failures:
        return CheckReport(name, False, f"{len(failures)} failures: {failures[:4]}")
    return CheckReport(name, True, "degree/weight homogeneous, confluent")


# -- stability -------------------------------------------------------------------------


def check_stability(p: int, index_bound: int = 6, source_bound: int = 4,
                    length_cap: int = 2) -> CheckReport:
    letters = _letters_for(p, index_bound)
    bad = []
    total = 0
    for j in range(-source_bound, source_bound + 1):
        for ln in range(1, length_cap + 1):
            for rl in itertools.product(letters, repeat=ln):
                if p == 2:
                    rletters = rl
                else:
                    rletters = rl
                total += 1
                if not stable_under_suspension(p, rletters, j):
                    bad.append((j, rletters))
    name = f"stability p={p} indices<={index_bound} |j|<={source_bound}"
    if bad:
        return CheckReport(name, False, f"{len(bad)} unstable words: {bad[:5]}")
    return CheckReport(name, True, f"{total} words stable under suspension")

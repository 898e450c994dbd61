"""Free algebras over the power ring with shifted restricted Lie structure:
basis enumeration, operation/bracket/restriction evaluation, and the
independent sequence-counting oracle.

Two rival encodings of the same basis are implemented.

* Operation words on Lie classes: admissible R-words applied to Lyndon
  brackets (and to self-bracket classes of even-degree words at odd p,
  rendered as a B suffix), where iterated restrictions appear as
  bottom-operation letters.

* Counting sequences (i_1, ..., i_k, e, w): a Lyndon word w, a marker
  e in {0, iota}, and integers with i_j congruent to 0 or 1 mod 2(p-1),
  i_j < p i_{j+1}, and i_k <= (p-1)(1+e) deg(w) - iota, graded by
  ((1+e) deg(w) - e) + sum(i) - k and weighted by (1+e) |w| p^k.

Their graded dimension tables must agree cell by cell; that equality is the
central cross-check of the whole calculus.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fpcore import inverse_mod_p, merge_int_terms
from . import ringoid
from .ringoid import FULL
from .lie import FreeShiftedLie, LieSymbol
from .power_ring import (
    PowerOp, RWord, from_R_letters, normalize_rword, r_letter_drop,
    r_word_drop, to_R_letters,
)


@dataclass(frozen=True)
class FreeBasisElement:
    """An admissible operation word applied to a Lie basis class."""

    rletters: tuple
    word: tuple
    dbl: int = 0

    def rword(self, p: int) -> RWord:
        return RWord(p, self.rletters, b_exp=self.dbl)


@dataclass(frozen=True)
class BMSequence:
    seq: tuple
    e: int
    word: tuple


class DimTable:
    """Map (degree, weight) -> dimension over F_p."""

    def __init__(self, cells=None):
        self.cells = dict(cells or {})

    @classmethod
    def count(cls, pairs) -> "DimTable":
        t = cls()
        for deg, wt in pairs:
            t.cells[(deg, wt)] = t.cells.get((deg, wt), 0) + 1
        return t

    def __getitem__(self, key) -> int:
        return self.cells.get(key, 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, DimTable) and self.nonzero() == other.nonzero()

    def nonzero(self) -> dict:
        return {k: v for k, v in self.cells.items() if v}

    def rows(self):
        return sorted((wt, deg, n) for (deg, wt), n in self.cells.items() if n)

    def total(self) -> int:
        return sum(self.cells.values())

    def diff(self, other: "DimTable"):
        keys = set(self.nonzero()) | set(other.nonzero())
        return [(k, self[k], other[k]) for k in sorted(keys) if self[k] != other[k]]


def _iota(p: int, word_degree: int) -> int:
    return 1 if (p > 2 and word_degree % 2 == 0) else 0


class FreeAlgebra:
    """The free algebra on generators of the given internal degrees."""

    def __init__(self, p: int, gen_degrees, lambda_unit=None):
        self.p = p
        self.gen_degrees = tuple(gen_degrees)
        self.lie = FreeShiftedLie(p, gen_degrees)
        # the restriction differs from the bottom operation by a unit that
        # the theory leaves open; all dimension-level statements are
        # independent of it and it defaults to 1
        self.lambda_unit = lambda_unit or (lambda degree: 1)

    # -- grading ------------------------------------------------------------

    def class_degree(self, word, dbl: int = 0) -> int:
        d = self.lie.word_degree(word)
        return 2 * d - 1 if dbl else d

    def class_weight(self, word, dbl: int = 0) -> int:
        return len(word) * (2 if dbl else 1)

    def elem_degree(self, el: FreeBasisElement) -> int:
        return self.class_degree(el.word, el.dbl) - r_word_drop(self.p, el.rletters)

    def elem_weight(self, el: FreeBasisElement) -> int:
        return self.class_weight(el.word, el.dbl) * self.p ** len(el.rletters)

    # -- the operation-word basis --------------------------------------------

    def free_basis(self, degree_window, weight_cap: int):
        lo, hi = degree_window
        out = []
        for sym in self.lie.lie_classes(weight_cap):
            base_wt = self.class_weight(sym.word, sym.dbl)
            d = self.class_degree(sym.word, sym.dbl)
            max_len = 0
            while base_wt * self.p ** (max_len + 1) <= weight_cap:
                max_len += 1
            for q in ringoid._admissible_words(self.p, FULL, d, max_len, lo, hi):
                out.append(FreeBasisElement(to_R_letters(self.p, q), sym.word, sym.dbl))
        out.sort(key=lambda e: (self.elem_weight(e), self.elem_degree(e), str(e.rword(self.p)), e.word))
        return out

    # -- the sequence basis ----------------------------------------------------

    def bm_basis(self, degree_window, weight_cap: int):
        lo, hi = degree_window
        p = self.p
        out = []
        for w, d in self.lie.lyndon_basis(weight_cap):
            iota = _iota(p, d)
            for e in ({0, iota} if iota else {0}):
                base_wt = (1 + e) * len(w)
                if base_wt > weight_cap:
                    continue
                base_deg = (1 + e) * d - e
                if lo <= base_deg <= hi:
                    out.append(BMSequence((), e, w))
                cap = (p - 1) * (1 + e) * d - iota
                k = 1
                while base_wt * p ** k <= weight_cap:
                    for seq in self._bm_sequences(k, cap, base_deg, lo, hi):
                        out.append(BMSequence(seq, e, w))
                    k += 1
        out.sort(key=lambda s: (self.bm_weight(s), self.bm_degree(s), s.seq, s.word))
        return out

    def _bm_sequences(self, k: int, cap: int, base_deg: int, lo: int, hi: int):
        """Sequences i_1 < p i_2 < ... with the stated congruence and cap,
        built from i_k downward; prefixes prune when even the greedy-maximal
        completion lands below the window."""
        p = self.p
        mod = 2 * (p - 1)

        def congruent(i: int) -> bool:
            return i % mod in (0, 1 % mod)

        def next_max(c: int) -> int:
            i = p * c - 1
            while not congruent(i):
                i -= 1
            return i

        def max_completion(c: int, t: int) -> int:
            s = 0
            cur = c
            for _ in range(t):
                cur = next_max(cur)
                s += cur
            return s

        out = []

        def rec(rev, total, length):
            # rev holds (i_k, i_{k-1}, ...); extend to the left with smaller entries
            if length == k:
                if lo <= base_deg + total - k <= hi:
                    out.append(tuple(reversed(rev)))
                return
            top = next_max(rev[-1]) if rev else cap
            i = top if congruent(top) else top - 1
            while not congruent(i):
                i -= 1
            while True:
                rem = k - length - 1
                best = base_deg + total + i + max_completion(i, rem) - k
                if best < lo:
                    break
                rec(rev + [i], total + i, length + 1)
                i -= 1
                while not congruent(i):
                    i -= 1

        rec([], 0, 0)
        return out

    def bm_degree(self, s: BMSequence) -> int:
        d = self.lie.word_degree(s.word)
        return ((1 + s.e) * d - s.e) + sum(s.seq) - len(s.seq)

    def bm_weight(self, s: BMSequence) -> int:
        return (1 + s.e) * len(s.word) * self.p ** len(s.seq)

    # -- dimension tables -------------------------------------------------------

    def dims_free(self, degree_window, weight_cap: int) -> DimTable:
        return DimTable.count((self.elem_degree(e), self.elem_weight(e))
                              for e in self.free_basis(degree_window, weight_cap))

    def dims_bm(self, degree_window, weight_cap: int) -> DimTable:
        return DimTable.count((self.bm_degree(s), self.bm_weight(s))
                              for s in self.bm_basis(degree_window, weight_cap))

    # -- evaluation ---------------------------------------------------------------

    def element(self, el: FreeBasisElement, coef: int = 1) -> dict:
        return {el: coef % self.p} if coef % self.p else {}

    def apply_rletters(self, rletters, element: dict) -> dict:
        """Apply an operation word (R-letters, applied right to left) to a
        formal sum, renormalizing to the admissible basis."""
        out: dict = {}
        for el, c in element.items():
            d = self.class_degree(el.word, el.dbl)
            combined = tuple(rletters) + el.rletters
            for w, c2 in normalize_rword(self.p, combined, d).items():
                merge_int_terms(out, FreeBasisElement(w, el.word, el.dbl), c * c2, self.p)
        return out

    def apply_op(self, op: PowerOp, element: dict) -> dict:
        """Apply a power-ring element; its source must match the degree of
        every summand."""
        if op.is_unit:
            for el in element:
                if self.elem_degree(el) != op.source:
                    raise ValueError("operation source does not match the class degree")
            return dict(element)
        out: dict = {}
        for el, c in element.items():
            if self.elem_degree(el) != op.source:
                raise ValueError("operation source does not match the class degree")
            for q, cq in op.terms.items():
                part = self.apply_rletters(to_R_letters(self.p, q), {el: (c * cq) % self.p})
                for el2, c2 in part.items():
                    merge_int_terms(out, el2, c2, self.p)
        return out

    # -- brackets and restrictions ---------------------------------------------------

    def bottom_letter(self, degree: int):
        if self.p == 2:
            return -degree + 1
        if degree % 2 == 0:
            raise ValueError("no bottom operation on even degrees at odd p")
        return (0, (-degree + 1) // 2)

    def _bottom_tower_exponent(self, el: FreeBasisElement):
        """If el's word is an iterated bottom operation, its height, else None."""
        t = self.class_degree(el.word, el.dbl)
        n = 0
        for letter in reversed(el.rletters):
            if self.p > 2 and t % 2 == 0:
                return None
            if letter != self.bottom_letter(t):
                return None
            t = self.p * t - self.p + 1
            n += 1
        return n

    def _to_lie(self, el: FreeBasisElement):
        e = self._bottom_tower_exponent(el)
        if e is None:
            return None
        return LieSymbol(el.word, el.dbl, e)

    def _from_lie(self, sym: LieSymbol) -> FreeBasisElement:
        letters = []
        t = self.class_degree(sym.word, sym.dbl)
        for _ in range(sym.e):
            letters.append(self.bottom_letter(t))
            t = self.p * t - self.p + 1
        return FreeBasisElement(tuple(reversed(letters)), sym.word, sym.dbl)

    def _lie_to_elements(self, lie_el: dict) -> dict:
        out: dict = {}
        for sym, c in lie_el.items():
            merge_int_terms(out, self._from_lie(sym), c, self.p)
        return out

    def bracket_eval(self, a: dict, b: dict) -> dict:
        """Bilinear bracket: vanishes against any operation word that is not
        an iterated restriction; on restriction towers and bare Lie classes
        it delegates to the shifted Lie algebra."""
        out: dict = {}
        for e1, c1 in a.items():
            s1 = self._to_lie(e1)
            if s1 is None:
                continue
            for e2, c2 in b.items():
                s2 = self._to_lie(e2)
                if s2 is None:
                    continue
                res = self.lie.bracket({s1: 1}, {s2: 1})
                for el, c in self._lie_to_elements(res).items():
                    merge_int_terms(out, el, c1 * c2 * c, self.p)
        return out

    def restriction_eval(self, element: dict) -> dict:
        """p-th power operation on a formal sum, expanded through the
        restriction-of-sums rule; odd p requires odd-degree summands."""
        terms = sorted(element.items(), key=lambda kv: (str(kv[0].rword(self.p)), kv[0].word, kv[0].dbl))
        if not terms:
            return {}
        el, coef = terms[0]
        d = self.elem_degree(el)
        if self.p > 2 and d % 2 == 0:
            raise ValueError("restriction undefined on even-degree classes at odd p")
        lam = self.lambda_unit(d) % self.p
        head_restr = self.scale(self.apply_rletters((self.bottom_letter(d),), {el: 1}),
                                lam * coef)
        rest = dict(terms[1:])
        if not rest:
            return head_restr
        out = self.add(head_restr, self.restriction_eval(rest))
        head = {el: coef}
        sis = self.s_coefficients(head, rest)
        for i, si in enumerate(sis, start=1):
            out = self.add(out, self.scale(si, inverse_mod_p(i, self.p)))
        return out

    def s_coefficients(self, x: dict, y: dict):
        p = self.p
        by_power = {0: dict(x)}
        for _ in range(p - 1):
            nxt: dict = {}
            for e, el in by_power.items():
                bx = self.bracket_eval(el, x)
                by = self.bracket_eval(el, y)
                if bx:
                    nxt[e + 1] = self.add(nxt.get(e + 1, {}), bx)
                if by:
                    nxt[e] = self.add(nxt.get(e, {}), by)
            by_power = {e: el for e, el in nxt.items() if el}
        return [by_power.get(i - 1, {}) for i in range(1, p)]

    # -- small element algebra ---------------------------------------------------

    def add(self, *elements) -> dict:
        out: dict = {}
        for el in elements:
            for s, c in el.items():
                merge_int_terms(out, s, c, self.p)
        return out

    def scale(self, el: dict, c: int) -> dict:
        c %= self.p
        return {s: (c * v) % self.p for s, v in el.items() if (c * v) % self.p}

"""Free shifted (restricted) Lie algebras over F_p on Lyndon bases.

The bracket drops degree by one and Koszul signs are taken on internal
degrees: [x, y] = (-1)^{|x||y|} [y, x] and the graded Jacobi identity

    (-1)^{|x||z|}[x,[y,z]] + (-1)^{|y||x|}[y,[z,x]] + (-1)^{|z||y|}[z,[x,y]] = 0

hold, with [x, x] = 0 for all x at p = 2 and for odd-degree x at odd p, and
[x, [x, x]] = 0 at p = 3.

Basis symbols are triples (word, dbl, e): a Lyndon word in the generator
alphabet, an optional doubling marker for the self-bracket [w, w] of an
even-degree word at odd p, and a restriction-tower exponent.  Restriction
applies to every class at p = 2 and to odd-degree classes at odd p; each
step sends degree d to p*d - p + 1 and multiplies weight by p.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .fpcore import merge_int_terms

MAX_BRACKET_DEPTH = 200


@dataclass(frozen=True)
class LieSymbol:
    word: tuple
    dbl: int = 0
    e: int = 0

    def __str__(self) -> str:
        base = "".join(f"x{i+1}" for i in self.word)
        if self.dbl:
            base = f"[{base},{base}]"
        for _ in range(self.e):
            base += "^[p]"
        return base


def is_lyndon(word) -> bool:
    n = len(word)
    if n == 0:
        return False
    for k in range(1, n):
        if word[k:] + word[:k] <= word:
            return False
    return True


def lyndon_words(alphabet_size: int, max_len: int):
    """All Lyndon words over 0..alphabet_size-1 of length <= max_len (Duval)."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m <= max_len:
            out.append(tuple(w))
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == alphabet_size - 1:
            w.pop()
    out.sort(key=lambda u: (len(u), u))
    return out


@lru_cache(maxsize=1 << 14)
def _std_split(word) -> tuple:
    """Standard factorization: the longest proper Lyndon suffix and its prefix."""
    for k in range(1, len(word)):
        if is_lyndon(word[k:]):
            return word[:k], word[k:]
    raise ValueError(f"{word} has no standard factorization")


class FreeShiftedLie:
    """The free shifted restricted Lie algebra on graded generators.

    Elements are dicts LieSymbol -> residue.  Generators are indexed
    0..k-1, ordered by index, with the given internal degrees.
    """

    def __init__(self, p: int, gen_degrees):
        self.p = p
        self.gen_degrees = tuple(gen_degrees)

    # -- grading -----------------------------------------------------------

    def word_degree(self, word) -> int:
        return sum(self.gen_degrees[i] for i in word) - (len(word) - 1)

    def symbol_degree(self, sym: LieSymbol) -> int:
        d = self.word_degree(sym.word)
        if sym.dbl:
            d = 2 * d - 1
        for _ in range(sym.e):
            d = self.p * d - self.p + 1
        return d

    def symbol_weight(self, sym: LieSymbol) -> int:
        return len(sym.word) * (2 if sym.dbl else 1) * self.p ** sym.e

    def _check_symbol(self, sym: LieSymbol) -> None:
        if sym.dbl and (self.p == 2 or self.word_degree(sym.word) % 2):
            raise ValueError("doubling marker needs an even-degree word at odd p")
        if sym.e and self.p > 2:
            base = 2 * self.word_degree(sym.word) - 1 if sym.dbl else self.word_degree(sym.word)
            if base % 2 == 0:
                raise ValueError("restriction tower on an even-degree class")

    # -- bases -------------------------------------------------------------

    def lyndon_basis(self, weight_cap: int):
        """Lyndon words with their degrees, weight = length <= weight_cap."""
        return [(w, self.word_degree(w))
                for w in lyndon_words(len(self.gen_degrees), weight_cap)]

    def lie_classes(self, weight_cap: int):
        """Basis classes of the free shifted Lie algebra (no towers):
        Lyndon words plus doubles of even-degree words at odd p."""
        out = []
        for w, d in self.lyndon_basis(weight_cap):
            out.append(LieSymbol(w))
            if self.p > 2 and d % 2 == 0 and 2 * len(w) <= weight_cap:
                out.append(LieSymbol(w, dbl=1))
        return out

    def basis_symbols(self, weight_cap: int):
        """Basis of the free shifted restricted Lie algebra up to weight_cap."""
        out = []
        for sym in self.lie_classes(weight_cap):
            out.append(sym)
            if self.p == 2 or self.symbol_degree(sym) % 2:
                e = 1
                while self.symbol_weight(LieSymbol(sym.word, sym.dbl, e)) <= weight_cap:
                    out.append(LieSymbol(sym.word, sym.dbl, e))
                    e += 1
        return out

    # -- element helpers ----------------------------------------------------

    def generator(self, idx: int) -> dict:
        return {LieSymbol((idx,)): 1}

    def add(self, *elements) -> dict:
        out: dict = {}
        for el in elements:
            for s, c in el.items():
                merge_int_terms(out, s, c, self.p)
        return out

    def scale(self, el: dict, c: int) -> dict:
        c %= self.p
        return {s: (c * v) % self.p for s, v in el.items() if (c * v) % self.p}

    def element_degree(self, el: dict):
        degs = {self.symbol_degree(s) for s in el}
        if len(degs) > 1:
            raise ValueError("inhomogeneous element")
        return degs.pop() if degs else None

    # -- the bracket ---------------------------------------------------------

    def bracket(self, u: dict, v: dict, _depth: int = 0) -> dict:
        if _depth > MAX_BRACKET_DEPTH:
            raise RecursionError("bracket rewriting exceeded the depth guard")
        out: dict = {}
        for s1, c1 in u.items():
            for s2, c2 in v.items():
                for s, c in self._bracket_symbols(s1, s2, _depth + 1).items():
                    merge_int_terms(out, s, c1 * c2 * c, self.p)
        return out

    def _bracket_symbols(self, s1: LieSymbol, s2: LieSymbol, depth: int) -> dict:
        p = self.p
        d1 = self.symbol_degree(s1)
        d2 = self.symbol_degree(s2)
        if s2.e > 0 or s2.dbl:
            # reduce via ad(x^{[p]}) = ad(x)^p and ad([w,w]) = -2 ad(w)^2
            if s2.dbl and s2.e == 0 and s1 == LieSymbol(s2.word):
                return {}
            base = LieSymbol(s2.word)
            n = p ** s2.e
            coef = 1
            if s2.dbl:
                n *= 2
                coef = (-2) % p
            cur = {s1: 1}
            for _ in range(n):
                cur = self.bracket(cur, {base: 1}, depth)
                if not cur:
                    return {}
            return self.scale(cur, coef)
        if s1.e > 0 or s1.dbl:
            sign = -1 if (d1 * d2) % 2 else 1
            flipped = self._bracket_symbols(s2, s1, depth)
            return self.scale(flipped, sign)
        # both plain Lyndon words
        w1, w2 = s1.word, s2.word
        if w1 == w2:
            if p > 2 and d1 % 2 == 0:
                return {LieSymbol(w1, dbl=1): 1}
            return {}
        if w1 > w2:
            sign = -1 if (d1 * d2) % 2 else 1
            return self.scale(self._bracket_symbols(s2, s1, depth), sign)
        return self._bracket_lyndon(w1, w2, depth)

    def _bracket_lyndon(self, u, v, depth: int) -> dict:
        """[b(u), b(v)] for Lyndon words u < v, expanded in the basis."""
        if len(u) == 1 or _std_split(u)[1] >= v:
            return {LieSymbol(u + v): 1}
        u1, u2 = _std_split(u)
        dA = self.word_degree(u1)
        dB = self.word_degree(u2)
        dC = self.word_degree(v)
        # [[A,B],C] = -(-1)^{AB+A+CA+C}[[B,C],A] - (-1)^{BC+B+C}[[A,C],B]
        e1 = (dA * dB + dA + dC * dA + dC) % 2
        e2 = (dB * dC + dB + dC) % 2
        A = {LieSymbol(u1): 1}
        B = {LieSymbol(u2): 1}
        C = {LieSymbol(v): 1}
        t1 = self.bracket(self.bracket(B, C, depth), A, depth)
        t2 = self.bracket(self.bracket(A, C, depth), B, depth)
        out = self.add(self.scale(t1, -(-1) ** e1), self.scale(t2, -(-1) ** e2))
        return out

    # -- derived operations ---------------------------------------------------

    def ad_power(self, x: dict, y: dict, n: int) -> dict:
        """n-fold [., x] applied to y."""
        cur = dict(y)
        for _ in range(n):
            cur = self.bracket(cur, x)
        return cur

    def s_coefficients(self, x: dict, y: dict):
        """Coefficients s_1 .. s_{p-1}: s_i is the coefficient of t^{i-1} in
        ad(tx + y)^{p-1}(x)."""
        p = self.p
        by_power = {0: dict(x)}
        for _ in range(p - 1):
            nxt: dict = {}
            for e, el in by_power.items():
                bx = self.bracket(el, x)
                by = self.bracket(el, y)
                if bx:
                    nxt[e + 1] = self.add(nxt.get(e + 1, {}), bx)
                if by:
                    nxt[e] = self.add(nxt.get(e, {}), by)
            by_power = {e: el for e, el in nxt.items() if el}
        return [by_power.get(i - 1, {}) for i in range(1, p)]

    def restriction_expand(self, el: dict) -> dict:
        """Restriction of a single basis class: the sum over left-nested
        brackets of p copies collapses to the tower symbol with e + 1."""
        if len(el) != 1:
            raise ValueError("restriction_expand expects a single basis word")
        (sym, coef), = el.items()
        d = self.symbol_degree(sym)
        if self.p > 2 and d % 2 == 0:
            raise ValueError("restriction undefined on even-degree classes at odd p")
        # (c x)^[p] = c^p x^[p] = c x^[p] over F_p
        return {LieSymbol(sym.word, sym.dbl, sym.e + 1): coef}

    def restriction_of_sum(self, el: dict) -> dict:
        """Restriction of an arbitrary element, expanded through the
        two-term rule (x+y)^[p] = x^[p] + y^[p] + sum_i s_i(x,y)/i."""
        from .fpcore import inverse_mod_p
        terms = sorted(el.items(), key=lambda kv: str(kv[0]))
        if not terms:
            return {}
        sym, coef = terms[0]
        head = {sym: coef}
        out = self.restriction_expand({sym: 1})
        out = self.scale(out, coef)  # c^p = c in F_p
        rest = dict(terms[1:])
        if not rest:
            return out
        tail = self.restriction_of_sum(rest)
        out = self.add(out, tail)
        sis = self.s_coefficients(head, rest)
        for i, si in enumerate(sis, start=1):
            out = self.add(out, self.scale(si, inverse_mod_p(i, self.p)))
        return out

"""Koszul duals of the Dyer-Lashof algebra: dual Adem rewriting and bases.

Words of dual generators act on a class through a *source internal degree*
j.  A word is stored as a tuple of letters applied right to left: at p = 2 a
letter is an integer i standing for (Q^i)^*, at odd p a pair (eps, i)
standing for (beta^eps Q^i)^*.  Walking the word from the right, each letter
moves the running internal degree d by -i (p = 2) or -(2(p-1)i - eps)
(odd p) and drops filtration by one.

Existence of a letter at running degree d:

* p = 2, additive variant:  i > -d at every position;
* p = 2, full variant:      i >= -j at the rightmost position (the bottom
  operation on the class is a genuine generator) and i > -d elsewhere --- a
  letter sitting exactly at the bottom of an intermediate degree kills the
  word, which is the quadratic relation (Q^{a-j})^* (Q^a)^* = 0;
* odd p (both variants):    2i > -d at every position.

The quadratic rewriting sends an inadmissible adjacent pair to the linear
combination of admissible pairs dictated by the dual Adem relations; normal
forms are supported on admissible words only, where admissibility means
i_l > 2 i_{l+1} (p = 2) resp. i_l > p i_{l+1} - eps_{l+1} (odd p) together
with the rightmost existence bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .fpcore import binom_mod_p, merge_int_terms

ADDITIVE = "additive"
FULL = "full"

# Rewriting is strongly normalizing; the guard only trips on an actual bug.
MAX_REWRITE_STEPS = 10**6


class RelationNotApplicable(ValueError):
    """The dual Adem relation was requested outside its window."""


class RewriteLimitError(RuntimeError):
    """Iteration guard exceeded; signals a non-termination bug."""


# ---------------------------------------------------------------------------
# letters


def letter_drop(p: int, letter) -> int:
    """Internal-degree drop of one dual letter."""
    if p == 2:
        return letter
    eps, i = letter
    return 2 * (p - 1) * i - eps


def letter_total_drop(p: int, letter) -> int:
    """Total (homotopy) degree drop: internal drop plus one filtration step."""
    return letter_drop(p, letter) + 1


def _letter_exists(p: int, variant: str, letter, d: int, rightmost: bool, j: int) -> bool:
    if p == 2:
        if variant == FULL and rightmost:
            return letter >= -j
        return letter > -d
    _, i = letter
    return 2 * i > -d


def word_internal_drop(p: int, letters) -> int:
    return sum(letter_drop(p, lt) for lt in letters)


def word_total_drop(p: int, letters) -> int:
    return word_internal_drop(p, letters) + len(letters)


def application_degrees(p: int, j: int, letters) -> list:
    """Running internal degree at which each letter applies (index-aligned)."""
    degs = [0] * len(letters)
    d = j
    for m in range(len(letters) - 1, -1, -1):
        degs[m] = d
        d -= letter_drop(p, letters[m])
    return degs


def word_exists(p: int, variant: str, j: int, letters) -> bool:
    d = j
    n = len(letters)
    for m in range(n - 1, -1, -1):
        if not _letter_exists(p, variant, letters[m], d, m == n - 1, j):
            return False
        d -= letter_drop(p, letters[m])
    return True


def _pair_admissible(p: int, a, b) -> bool:
    if p == 2:
        return a > 2 * b
    (_, ia), (eb, ib) = a, b
    return ia > p * ib - eb


def is_admissible_word(p: int, variant: str, j: int, letters) -> bool:
    """Admissible = existence bounds plus the strict inequality chain."""
    if not word_exists(p, variant, j, letters):
        return False
    for m in range(len(letters) - 1):
        if not _pair_admissible(p, letters[m], letters[m + 1]):
            return False
    return True


# ---------------------------------------------------------------------------
# the quadratic relations


def dual_adem_pair(p: int, variant: str, a, b, d: int):
    """Expand the inadmissible pair (a, b) applied at inner degree d.

    Returns a dict mapping two-letter tuples to coefficients mod p.  Raises
    RelationNotApplicable when (a, b, d) is outside the relation's window.
    """
    if p == 2:
        if not (a <= 2 * b and b > -d and a > b - d):
            raise RelationNotApplicable(f"(Q^{a})*(Q^{b})* at degree {d}")
        out: dict = {}
        c = -d + 1
        while a + b - c > 2 * c:
            coef = binom_mod_p(b - c - 1, a - 2 * c - 1, p)
            if coef:
                merge_int_terms(out, (a + b - c, c), coef, p)
            c += 1
        return out

    (ea, ia), (eb, ib) = a, b
    if eb == 0:
        window = ia <= p * ib and 2 * ib > -d and 2 * ia > 2 * (p - 1) * ib - d
    else:
        # LHS-existence window; the boundary case 2*ia = 2(p-1)ib - d occurs
        # at even d and must still rewrite (possibly to zero).
        window = ia < p * ib and 2 * ib > -d and 2 * ia > 2 * (p - 1) * ib - d - 1
    if not window:
        raise RelationNotApplicable(f"(b^{ea}Q^{ia})*(b^{eb}Q^{ib})* at degree {d}")

    out = {}
    s = ia + ib
    c = -(d // 2)
    while 2 * c <= -d:
        c += 1
    if eb == 0 and ea == 0:
        while s - c > p * c:
            coef = -(-1) ** ((ia - c) % 2) * binom_mod_p((p - 1) * (ib - c) - 1, ia - p * c - 1, p)
            if coef % p:
                merge_int_terms(out, ((0, s - c), (0, c)), coef, p)
            c += 1
    elif eb == 0 and ea == 1:
        c0 = c
        while s - c >= p * c:
            sign = (-1) ** ((ia - c) % 2)
            coef = sign * binom_mod_p((p - 1) * (ib - c), ia - p * c, p)
            if coef % p:
                merge_int_terms(out, ((0, s - c), (1, c)), coef, p)
            c += 1
        c = c0
        while s - c > p * c:
            sign = (-1) ** ((ia - c) % 2)
            coef = -sign * binom_mod_p((p - 1) * (ib - c) - 1, ia - p * c - 1, p)
            if coef % p:
                merge_int_terms(out, ((1, s - c), (0, c)), coef, p)
            c += 1
    else:
        while s - c >= p * c:
            sign = (-1) ** ((ia - c) % 2)
            coef = sign * binom_mod_p((p - 1) * (ib - c) - 1, ia - p * c, p)
            if coef % p:
                merge_int_terms(out, ((ea, s - c), (1, c)), coef, p)
            c += 1
    return out


@lru_cache(maxsize=1 << 18)
def _pair_table(p: int, variant: str, a, b, d: int):
    return tuple(dual_adem_pair(p, variant, a, b, d).items())


# ---------------------------------------------------------------------------
# normal forms


def _first_bad_position(p: int, variant: str, j: int, letters):
    """(kind, index) of the leftmost violation, or None if admissible.

    kind "dead" means an existence failure (word is zero); kind "pair"
    means letters[index], letters[index+1] form an inadmissible pair.
    """
    n = len(letters)
    degs = [0] * n
    d = j
    for m in range(n - 1, -1, -1):
        if not _letter_exists(p, variant, letters[m], d, m == n - 1, j):
            return ("dead", m, degs)
        degs[m] = d
        d -= letter_drop(p, letters[m])
    for m in range(n - 1):
        if not _pair_admissible(p, letters[m], letters[m + 1]):
            return ("pair", m, degs)
    return None


def normal_form_word(p: int, variant: str, j: int, letters, strategy: str = "leftmost"):
    """Normal form of a single word: dict admissible-word -> coefficient.

    `strategy` picks which inadmissible pair to rewrite first; any choice
    yields the same result (confluence), which the test suite checks.
    """
    pending = {tuple(letters): 1}
    out: dict = {}
    steps = 0
    while pending:
        word, coef = pending.popitem()
        steps += 1
        if steps > MAX_REWRITE_STEPS:
            raise RewriteLimitError("dual Adem rewriting exceeded the iteration guard")
        status = _scan(p, variant, j, word, strategy)
        if status is None:
            merge_int_terms(out, word, coef, p)
            continue
        kind, m, degs = status
        if kind == "dead":
            continue
        for pair, c2 in _pair_table(p, variant, word[m], word[m + 1], degs[m + 1]):
            neww = word[:m] + pair + word[m + 2:]
            merge_int_terms(pending, neww, coef * c2, p)
    return out


def _scan(p: int, variant: str, j: int, letters, strategy: str):
    n = len(letters)
    degs = [0] * n
    d = j
    for m in range(n - 1, -1, -1):
        if not _letter_exists(p, variant, letters[m], d, m == n - 1, j):
            return ("dead", m, degs)
        degs[m] = d
        d -= letter_drop(p, letters[m])
    rng = range(n - 1) if strategy == "leftmost" else range(n - 2, -1, -1)
    for m in rng:
        if not _pair_admissible(p, letters[m], letters[m + 1]):
            return ("pair", m, degs)
    return None


@lru_cache(maxsize=1 << 17)
def normal_form_cached(p: int, variant: str, j: int, letters):
    return tuple(sorted(normal_form_word(p, variant, j, letters).items()))


# ---------------------------------------------------------------------------
# element-level interface


@dataclass(frozen=True)
class DualOpWord:
    """A composable word of dual generators with its source internal degree."""

    p: int
    j: int
    letters: tuple
    variant: str = ADDITIVE

    @property
    def filtration(self) -> int:
        return -len(self.letters)

    @property
    def weight_exp(self) -> int:
        return len(self.letters)

    @property
    def internal_target(self) -> int:
        return self.j - word_internal_drop(self.p, self.letters)

    @property
    def total_target(self) -> int:
        return self.j - word_total_drop(self.p, self.letters)

    def is_admissible(self) -> bool:
        return is_admissible_word(self.p, self.variant, self.j, self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        if self.p == 2:
            return " ".join(f"(Q{i})*" for i in self.letters)
        return " ".join(("(bQ%d)*" % i) if e else ("(Q%d)*" % i) for e, i in self.letters)


def is_admissible_dual(word: DualOpWord) -> bool:
    return word.is_admissible()


def dual_adem_rewrite(word: DualOpWord) -> "DualElement":
    """Single-pair expansion of a two-letter word, at its own source degree."""
    if len(word.letters) != 2:
        raise ValueError("dual_adem_rewrite expects an adjacent pair")
    a, b = word.letters
    terms = dual_adem_pair(word.p, word.variant, a, b, word.j)
    return DualElement(word.p, word.j, dict(terms), word.variant)


@dataclass
class DualElement:
    """An F_p-combination of dual words sharing one source degree.

    The terms of a normal form automatically share target bidegree and
    weight whenever the input terms did; the class itself only enforces the
    common source.
    """

    p: int
    j: int
    terms: dict = field(default_factory=dict)
    variant: str = ADDITIVE

    def normal_form(self, strategy: str = "leftmost") -> "DualElement":
        out: dict = {}
        for word, coef in self.terms.items():
            for w2, c2 in normal_form_word(self.p, self.variant, self.j, word, strategy).items():
                merge_int_terms(out, w2, coef * c2, self.p)
        return DualElement(self.p, self.j, out, self.variant)

    def suspend(self, t: int) -> "DualElement":
        if t <= 0:
            raise ValueError("suspension step must be positive")
        return DualElement(self.p, self.j + t, dict(self.terms), self.variant)

    def scaled(self, c: int) -> "DualElement":
        c %= self.p
        return DualElement(self.p, self.j,
                           {w: (c * v) % self.p for w, v in self.terms.items() if (c * v) % self.p},
                           self.variant)

    def __add__(self, other: "DualElement") -> "DualElement":
        if (self.p, self.j, self.variant) != (other.p, other.j, other.variant):
            raise ValueError("cannot add dual elements with different sources")
        out = dict(self.terms)
        for w, c in other.terms.items():
            merge_int_terms(out, w, c, self.p)
        return DualElement(self.p, self.j, out, self.variant)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (isinstance(other, DualElement)
                and (self.p, self.j, self.variant) == (other.p, other.j, other.variant)
                and self.terms == other.terms)


def normal_form_dual(elem: DualElement, strategy: str = "leftmost") -> DualElement:
    return elem.normal_form(strategy)


def suspend(elem: DualElement, t: int) -> DualElement:
    return elem.suspend(t)


# ---------------------------------------------------------------------------
# enumeration of admissible words


def unstable_ext_basis(p: int, j: int, variant: str, filtration_cap: int,
                       degree_window, include_even_aux: bool = True):
    """All admissible words from source j with at most filtration_cap letters
    whose target total degree lies in degree_window = (lo, hi).

    At odd p and even j the free object carries a second generator, the
    self-bracket class in degree 2j - 1; its words are enumerated too and
    tagged by source degree.  Returns a list of DualOpWord.
    """
    lo, hi = degree_window
    if lo > hi:
        return []
    words = [DualOpWord(p, j, w, variant)
             for w in _admissible_words(p, variant, j, filtration_cap, lo, hi)]
    if p > 2 and j % 2 == 0 and include_even_aux:
        aux = 2 * j - 1
        if filtration_cap >= 1:
            words += [DualOpWord(p, aux, w, variant)
                      for w in _admissible_words(p, variant, aux, filtration_cap - 1, lo, hi)
                      if w]
    return words


def _admissible_words(p: int, variant: str, j: int, max_len: int, lo: int, hi: int):
    """DFS over admissible words built from the rightmost letter outward.

    A candidate letter is viable if the word emitted now lands in
    [lo, hi], or some further extension can still land above lo.  The
    minimal-drop completion is the greedy chain (every bound loosens as the
    letter index shrinks), so the feasibility check is exact; completions
    can always drop arbitrarily far, so `hi` never prunes a branch.
    """
    out = []
    if lo <= j <= hi:
        out.append(())
    if max_len <= 0:
        return out

    def min_chain_drops(letter, t: int) -> int:
        # total-degree drop of the t-step minimal admissible extension
        s = 0
        cur = letter
        for _ in range(t):
            if p == 2:
                nxt = 2 * cur + 1
                s += nxt + 1
                cur = nxt
            else:
                e, i = cur
                ni = p * i - e + 1
                s += 2 * (p - 1) * ni - 1 + 1
                cur = (1, ni)
        return s

    def candidates(inner):
        if p == 2:
            if inner is None:
                return count_from(-j if variant == FULL else -j + 1)
            return count_from(2 * inner + 1)
        if inner is None:
            imin = -(j // 2)
            while 2 * imin <= -j:
                imin += 1
        else:
            e, i = inner
            imin = p * i - e + 1
        # eps = 1 first: candidates must come in increasing total-drop order
        return ((eps, i) for i in count_from(imin) for eps in (1, 0))

    def rec(rev, drops, inner, length):
        for letter in candidates(inner):
            ndrops = drops + letter_total_drop(p, letter)
            final0 = j - ndrops
            budget = max_len - length - 1
            reachable = [final0] + [final0 - min_chain_drops(letter, t)
                                    for t in range(1, budget + 1)]
            if max(reachable) < lo:
                break  # larger letters only push every completion lower
            nrev = rev + [letter]
            if lo <= final0 <= hi:
                out.append(tuple(reversed(nrev)))
            if budget > 0 and any(f >= lo for f in reachable[1:]):
                rec(nrev, ndrops, letter, length + 1)

    rec([], 0, None, 0)
    return out


def count_from(start: int):
    i = start
    while True:
        yield i
        i += 1

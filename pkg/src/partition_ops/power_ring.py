"""The power ring of unary operations in total-degree notation.

An operation word R^{a_1} ... R^{a_k} (p = 2) or
beta^{eps_1} R^{i_1} ... beta^{eps_k} R^{i_k} (odd p) acts on a class of
total degree j; the letter R^a drops total degree by a, beta^eps R^i by
2(p-1)i + eps.  Internally a word is the dual-ringoid word obtained by the
letterwise translation

    R^a            <->  (Q^{a-1})^*            (p = 2)
    beta^eps R^i   <->  (beta^{1-eps} Q^i)^*   (odd p)

sourced at the class degree, and composition is the sheared Yoneda product:
suspend the outer factor by the inner weight exponent, juxtapose, rewrite
to the admissible basis.  In R-notation the suspension is invisible and
composition is plain concatenation.

A word is admissible when a_m >= 2 a_{m+1} and a_k > -j (p = 2), resp.
i_m >= p i_{m+1} + eps_{m+1} and 2 i_k > -j (odd p); admissible words form
a basis of the unary operations on a degree-j class, bottom operations
(restrictions) included.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fpcore import binom_mod_p, merge_int_terms
from . import ringoid
from .ringoid import ADDITIVE, FULL


class DegreeMismatchError(ValueError):
    pass


class UndefinedOperationError(ValueError):
    """An operation letter below the bottom of its argument."""


def r_letter_drop(p: int, letter) -> int:
    if p == 2:
        return letter
    eps, i = letter
    return 2 * (p - 1) * i + eps


def r_word_drop(p: int, letters) -> int:
    return sum(r_letter_drop(p, lt) for lt in letters)


def to_R_letters(p: int, qletters) -> tuple:
    if p == 2:
        return tuple(i + 1 for i in qletters)
    return tuple((1 - eps, i) for eps, i in qletters)


def from_R_letters(p: int, rletters) -> tuple:
    if p == 2:
        return tuple(a - 1 for a in rletters)
    return tuple((1 - eps, i) for eps, i in rletters)


@dataclass(frozen=True)
class RWord:
    """An operation word in R-notation, with an optional self-bracket marker.

    b_exp = 1 means the word is applied to the self-bracket of an
    even-degree class (odd primes only); the marker is innermost and
    contributes total-degree drop 1 - j on a degree-j class.
    """

    p: int
    letters: tuple
    b_exp: int = 0

    @property
    def weight_exp(self) -> int:
        return len(self.letters)

    def degree_drop(self, source: int | None = None) -> int:
        drop = r_word_drop(self.p, self.letters)
        if self.b_exp:
            if source is None:
                raise ValueError("B-words need their source degree to grade")
            drop += 1 - source
        return drop

    def weight(self, lie_weight: int = 1) -> int:
        return (2 if self.b_exp else 1) * lie_weight * self.p ** len(self.letters)

    def __str__(self) -> str:
        parts = []
        for lt in self.letters:
            if self.p == 2:
                parts.append(f"R{lt}")
            else:
                eps, i = lt
                parts.append(f"bR{i}" if eps else f"R{i}")
        if self.b_exp:
            parts.append("B")
        return " ".join(parts) if parts else "1"


def to_R_notation(word: ringoid.DualOpWord) -> RWord:
    return RWord(word.p, to_R_letters(word.p, word.letters))


def from_R_notation(rword: RWord, j: int, variant: str = FULL) -> ringoid.DualOpWord:
    if rword.b_exp:
        raise ValueError("B-marked words act through the self-bracket class")
    return ringoid.DualOpWord(rword.p, j, from_R_letters(rword.p, rword.letters), variant)


def r_letter_defined(p: int, letter, j: int) -> bool:
    """Does the single operation exist on a degree-j class (bottom included)?"""
    if p == 2:
        return letter >= -j + 1
    _, i = letter
    return 2 * i > -j


def rword_exists(p: int, rletters, j: int) -> bool:
    """Stagewise existence of the translated word in the free ringoid."""
    q = from_R_letters(p, rletters)
    d = j
    n = len(q)
    for m in range(n - 1, -1, -1):
        if p == 2:
            if q[m] < -d:
                return False
            d -= q[m]
        else:
            eps, i = q[m]
            if 2 * i <= -d:
                return False
            d -= 2 * (p - 1) * i - eps
    return True


def normalize_rword(p: int, rletters, j: int) -> dict:
    """Admissible expansion of an R-word on a degree-j class.

    Returns a dict RWord-letter-tuple -> coefficient; words whose letters
    fall below existence rewrite to zero silently.
    """
    q = from_R_letters(p, rletters)
    nf = ringoid.normal_form_word(p, FULL, j, q)
    return {to_R_letters(p, w): c for w, c in nf.items()}


@dataclass
class PowerOp:
    """An element of the power ring: a normal-form combination of words
    acting on a fixed source total degree."""

    p: int
    source: int
    weight_exp: int
    terms: dict = field(default_factory=dict)  # qword -> coef, sourced at source
    is_unit: bool = False

    @property
    def target(self) -> int:
        if self.is_unit:
            return self.source
        drops = {ringoid.word_total_drop(self.p, w) for w in self.terms}
        if len(drops) > 1:
            raise ValueError("inhomogeneous power-ring element")
        return self.source - drops.pop() if drops else None

    def r_terms(self) -> dict:
        return {to_R_letters(self.p, w): c for w, c in self.terms.items()}

    def is_zero(self) -> bool:
        return not self.is_unit and not self.terms

    def __str__(self) -> str:
        if self.is_unit:
            return f"iota_{self.source}"
        if not self.terms:
            return "0"
        bits = []
        for w, c in sorted(self.terms.items()):
            rw = RWord(self.p, to_R_letters(self.p, w))
            bits.append(f"{c}*{rw}" if c != 1 else str(rw))
        return " + ".join(bits)


def identity_op(p: int, j: int) -> PowerOp:
    return PowerOp(p, j, 0, {(): 1}, is_unit=True)


def word_op(p: int, rletters, j: int) -> PowerOp:
    """The operation of a single R-word on a degree-j class."""
    rletters = tuple(rletters)
    if not rletters:
        return identity_op(p, j)
    if not rword_exists(p, rletters, j):
        raise UndefinedOperationError(f"{RWord(p, rletters)} is not defined on degree {j}")
    terms = ringoid.normal_form_word(p, FULL, j, from_R_letters(p, rletters))
    return PowerOp(p, j, len(rletters), terms)


def compose(beta: PowerOp, alpha: PowerOp) -> PowerOp:
    """Sheared Yoneda composition beta after alpha."""
    if beta.p != alpha.p:
        raise DegreeMismatchError("mixed primes")
    if beta.is_unit:
        return PowerOp(alpha.p, alpha.source, alpha.weight_exp, dict(alpha.terms), alpha.is_unit)
    if alpha.is_unit:
        return PowerOp(beta.p, beta.source, beta.weight_exp, dict(beta.terms), beta.is_unit)
    if alpha.is_zero() or beta.is_zero():
        return PowerOp(beta.p, alpha.source, beta.weight_exp + alpha.weight_exp, {})
    if beta.source != alpha.target:
        raise DegreeMismatchError(
            f"compose: outer source {beta.source} != inner target {alpha.target}")
    p = beta.p
    out: dict = {}
    for u, cu in beta.terms.items():
        for v, cv in alpha.terms.items():
            word = u + v
            for w, c in ringoid.normal_form_word(p, FULL, alpha.source, word).items():
                merge_int_terms(out, w, cu * cv * c, p)
    return PowerOp(p, alpha.source, beta.weight_exp + alpha.weight_exp, out)


def op_basis(p: int, j: int, weight_exp_cap: int, degree_window, include_b: bool = True):
    """Admissible R-words on a degree-j class, sorted by (weight, degree, word).

    At odd p and even j the basis also contains B-terminated words, acting
    through the self-bracket class of degree 2j - 1."""
    lo, hi = degree_window
    words = []
    for w in ringoid._admissible_words(p, FULL, j, weight_exp_cap, lo, hi):
        words.append(RWord(p, to_R_letters(p, w)))
    if p > 2 and j % 2 == 0 and include_b:
        aux = 2 * j - 1
        for w in ringoid._admissible_words(p, FULL, aux, weight_exp_cap, lo, hi):
            words.append(RWord(p, to_R_letters(p, w), b_exp=1))

    def sortkey(rw: RWord):
        return (rw.weight(), j - rw.degree_drop(j), str(rw))

    words.sort(key=sortkey)
    return words


# ---------------------------------------------------------------------------
# the operation-level Adem relations, checked against the rewriting engine


def _adem_window_ok(p: int, j: int, a, b, eps_a: int, eps_b: int) -> bool:
    if p == 2:
        return b - j < a < 2 * b and b > -j + 1
    if eps_a == 1 and eps_b == 1:
        return a <= p * b and 2 * b > -j and 2 * a > 2 * (p - 1) * b - j
    if eps_a == 0 and eps_b == 1:
        return a <= p * b and 2 * b > -j and 2 * a > 2 * (p - 1) * b + 1 - j
    # eps_b == 0
    return a < p * b and 2 * b > -j and 2 * a > 2 * (p - 1) * b - j


def _adem_rhs(p: int, j: int, a, b, eps_a: int, eps_b: int) -> dict:
    """Right-hand side of the printed relation, as R-letter words."""
    out: dict = {}
    if p == 2:
        c = -j + 2
        while a + b - c >= 2 * c:
            coef = binom_mod_p(b - c - 1, a - 2 * c, 2)
            if coef:
                merge_int_terms(out, (a + b - c, c), coef, 2)
            c += 1
        return out
    c0 = -(j // 2)
    while 2 * c0 <= -j:
        c0 += 1
    if eps_a == 1 and eps_b == 1:
        c = c0
        while a + b - c > p * c:
            sign = -1 if (a - c) % 2 == 0 else 1  # (-1)^{a-c+1}
            coef = sign * binom_mod_p((p - 1) * (b - c) - 1, a - p * c - 1, p)
            if coef % p:
                merge_int_terms(out, ((1, a + b - c), (1, c)), coef, p)
            c += 1
        return out
    if eps_a == 0 and eps_b == 1:
        c = c0
        while a + b - c >= p * c:
            sign = 1 if (a - c) % 2 == 0 else -1
            coef = sign * binom_mod_p((p - 1) * (b - c), a - p * c, p)
            if coef % p:
                merge_int_terms(out, ((1, a + b - c), (0, c)), coef, p)
            c += 1
        c = c0
        while a + b - c > p * c:
            sign = 1 if (a - c) % 2 == 0 else -1
            coef = -sign * binom_mod_p((p - 1) * (b - c) - 1, a - p * c - 1, p)
            if coef % p:
                merge_int_terms(out, ((0, a + b - c), (1, c)), coef, p)
            c += 1
        return out
    c = c0
    while a + b - c >= p * c:
        sign = 1 if (a - c) % 2 == 0 else -1
        coef = sign * binom_mod_p((p - 1) * (b - c) - 1, a - p * c, p)
        if coef % p:
            merge_int_terms(out, ((eps_a, a + b - c), (0, c)), coef, p)
        c += 1
    return out


def verify_adem_R(p: int, j: int, a, b, eps_a: int = 0, eps_b: int = 0) -> bool:
    """Evaluate both sides of the operation-level Adem relation on a degree-j
    class: the left side through the rewriting engine, the right side from
    the printed sum.  Returns equality of admissible expansions."""
    if not _adem_window_ok(p, j, a, b, eps_a, eps_b):
        raise RelationWindowError(f"pair ({a},{b}) with eps=({eps_a},{eps_b}) at degree {j}")
    if p == 2:
        lhs_letters = (a, b)
    else:
        lhs_letters = ((eps_a, a), (eps_b, b))
    lhs = normalize_rword(p, lhs_letters, j)
    rhs: dict = {}
    for word, coef in _adem_rhs(p, j, a, b, eps_a, eps_b).items():
        for w2, c2 in normalize_rword(p, word, j).items():
            merge_int_terms(rhs, w2, coef * c2, p)
    return lhs == rhs


class RelationWindowError(ValueError):
    pass


def stable_under_suspension(p: int, rletters, j: int) -> bool:
    """Operations are stable: the expansion of a word at source j and at
    source j + 1 have identical coefficients (targets shift by one)."""
    return normalize_rword(p, rletters, j) == normalize_rword(p, rletters, j + 1)


def translation_bijection_ok(p: int, j: int, filtration_cap: int, degree_window) -> bool:
    """The letterwise translation matches the two admissibility systems,
    preserving weight and total degree."""
    lo, hi = degree_window
    duals = ringoid._admissible_words(p, FULL, j, filtration_cap, lo, hi)
    rwords = set()
    for q in duals:
        r = to_R_letters(p, q)
        if from_R_letters(p, r) != tuple(q):
            return False
        if r_word_drop(p, r) != ringoid.word_total_drop(p, q):
            return False
        if not _r_admissible(p, r, j):
            return False
        rwords.add(r)
    # converse: every R-admissible word in the window is hit
    expect = set()
    for r in _r_admissible_words(p, j, filtration_cap, lo, hi):
        expect.add(r)
    return rwords == expect


def _r_admissible(p: int, rletters, j: int) -> bool:
    if not rletters:
        return True
    if p == 2:
        if rletters[-1] <= -j:
            return False
        return all(rletters[m] >= 2 * rletters[m + 1] for m in range(len(rletters) - 1))
    ek, ik = rletters[-1]
    if 2 * ik <= -j:
        return False
    for m in range(len(rletters) - 1):
        (_, i1), (e2, i2) = rletters[m], rletters[m + 1]
        if i1 < p * i2 + e2:
            return False
    return True


def _r_admissible_words(p: int, j: int, max_len: int, lo: int, hi: int):
    """Direct enumeration in R-notation, mirroring the R-side inequalities:
    innermost letter above the bottom of j, then the admissibility chain.
    Candidates come in increasing drop order; a branch dies when even its
    greedy-minimal completions land below the window."""
    out = [()] if lo <= j <= hi else []
    if max_len <= 0:
        return out

    def min_completion_drop(letter, t: int) -> int:
        s = 0
        cur = letter
        for _ in range(t):
            if p == 2:
                cur = 2 * cur
                s += cur
            else:
                e, i = cur
                cur = (0, p * i + e)
                s += 2 * (p - 1) * (p * i + e)
        return s

    def candidates(inner):
        if p == 2:
            return count_from(-j + 1 if inner is None else 2 * inner)
        if inner is None:
            imin = -(j // 2)
            while 2 * imin <= -j:
                imin += 1
        else:
            e, i = inner
            imin = p * i + e
        return ((eps, i) for i in count_from(imin) for eps in (0, 1))

    def rec(rev, drops, inner, length):
        for letter in candidates(inner):
            ndrops = drops + r_letter_drop(p, letter)
            final0 = j - ndrops
            budget = max_len - length - 1
            reachable = [final0] + [final0 - min_completion_drop(letter, t)
                                    for t in range(1, budget + 1)]
            if max(reachable) < lo:
                break
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

"""The primal mod-p Dyer-Lashof algebra and its free unstable polynomial
algebras.

A word (i_1, ..., i_k) denotes Q^{i_1} ... Q^{i_k} with Q^{i_k} applied
first.  At p = 2 a letter is an integer i (the operation Q^i, degree i,
weight 2); at odd p a letter is a pair (eps, i) denoting beta^eps Q^i of
degree 2(p-1)i - eps and weight p.

Admissible means i_l <= 2 i_{l+1} (p = 2) resp. i_l <= p i_{l+1} - eps_{l+1}
(odd p); inadmissible adjacent pairs expand through the Adem relations.

On an unstable algebra, letters strictly below the degree of their argument
act by zero and the bottom letter (i = |x| at p = 2; 2i = |x|, no Bockstein,
at odd p) is the p-th power.  Free objects are polynomial on the
strictly-allowable admissible words applied to generators, with p-th powers
appearing as repeated factors.
"""

from __future__ import annotations

from functools import lru_cache

from .fpcore import binom_mod_p, merge_int_terms

MAX_REWRITE_STEPS = 10**6


class RewriteLimitError(RuntimeError):
    pass


def primal_letter_degree(p: int, letter) -> int:
    if p == 2:
        return letter
    eps, i = letter
    return 2 * (p - 1) * i - eps


def primal_word_degree(p: int, letters) -> int:
    return sum(primal_letter_degree(p, lt) for lt in letters)


def is_admissible_primal(p: int, letters) -> bool:
    for m in range(len(letters) - 1):
        if p == 2:
            if letters[m] > 2 * letters[m + 1]:
                return False
        else:
            (_, il), (er, ir) = letters[m], letters[m + 1]
            if il > p * ir - er:
                return False
    return True


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@lru_cache(maxsize=1 << 16)
def _primal_pair(p: int, left, right):
    """Adem expansion of one inadmissible primal pair; tuple of (pair, coef)."""
    out: dict = {}
    if p == 2:
        r, s = left, right
        # Q^r Q^s = sum_{r+s-i <= 2i} binom(i-s-1, 2i-r) Q^{r+s-i} Q^i;
        # nonzero terms need 0 <= 2i-r <= i-s-1, i.e. i <= r-s-1.
        for i in range(_ceil_div(r + s, 3), r - s):
            coef = binom_mod_p(i - s - 1, 2 * i - r, 2)
            if coef:
                merge_int_terms(out, (r + s - i, i), coef, 2)
        return tuple(out.items())

    (el, r), (er, s) = left, right
    if er == 0:
        # (beta^el Q^r) Q^s for r > ps
        for i in range(_ceil_div(r + s, p + 1), r - (p - 1) * s):
            sign = -1 if (r + i) % 2 else 1
            c = sign * binom_mod_p((p - 1) * (i - s) - 1, p * i - r, p)
            if c % p:
                merge_int_terms(out, ((el, r + s - i), (0, i)), c, p)
        return tuple(out.items())
    # (beta^el Q^r) (beta Q^s) for r >= ps.  The range is r+s-i <= pi: the
    # boundary term at r = ps (giving beta Q^{ps} Q^s) is required for the
    # relations to annihilate the dual ones under the quadratic pairing.
    start = _ceil_div(r + s, p + 1)
    for i in range(start, r - (p - 1) * s + 1):
        sign = -1 if (r + i) % 2 else 1
        if el == 0:
            c1 = sign * binom_mod_p((p - 1) * (i - s), p * i - r, p)
            if c1 % p:
                merge_int_terms(out, ((1, r + s - i), (0, i)), c1, p)
            c2 = -sign * binom_mod_p((p - 1) * (i - s) - 1, p * i - r - 1, p)
            if c2 % p:
                merge_int_terms(out, ((0, r + s - i), (1, i)), c2, p)
        else:
            c = -sign * binom_mod_p((p - 1) * (i - s) - 1, p * i - r - 1, p)
            if c % p:
                merge_int_terms(out, ((1, r + s - i), (1, i)), c, p)
    return tuple(out.items())


def _primal_inadmissible_at(p: int, letters, m: int) -> bool:
    if p == 2:
        return letters[m] > 2 * letters[m + 1]
    (_, il), (er, ir) = letters[m], letters[m + 1]
    return il > p * ir - er


def primal_adem_rewrite(p: int, letters) -> dict:
    """Expansion of a word in the admissible basis: dict word -> coef."""
    pending = {tuple(letters): 1}
    out: dict = {}
    steps = 0
    while pending:
        word, coef = pending.popitem()
        steps += 1
        if steps > MAX_REWRITE_STEPS:
            raise RewriteLimitError("primal Adem rewriting exceeded the iteration guard")
        pos = None
        for m in range(len(word) - 1):
            if _primal_inadmissible_at(p, word, m):
                pos = m
                break
        if pos is None:
            merge_int_terms(out, word, coef, p)
            continue
        for pair, c2 in _primal_pair(p, word[pos], word[pos + 1]):
            neww = word[:pos] + pair + word[pos + 2:]
            merge_int_terms(pending, neww, coef * c2, p)
    return out


# ---------------------------------------------------------------------------
# free unstable polynomial algebras
#
# A monomial is a sorted tuple of factors (word, generator); repeated
# factors are p-th powers.  Generators must be mutually orderable.


def factor_degree(p: int, factor, gen_deg) -> int:
    word, g = factor
    return primal_word_degree(p, word) + gen_deg(g)


def factor_weight(p: int, factor) -> int:
    word, _ = factor
    return p ** len(word)


def monomial_degree(p: int, mono, gen_deg) -> int:
    return sum(factor_degree(p, f, gen_deg) for f in mono)


def monomial_weight(p: int, mono) -> int:
    return sum(factor_weight(p, f) for f in mono)


def allowable_words(p: int, gdeg: int, max_len: int, lo: int, hi: int):
    """Strictly-allowable admissible words on one generator whose resulting
    degree lies in [lo, hi], built from the innermost letter outward.

    A letter applied at running degree t must exceed the bottom (i > t at
    p = 2, 2i - eps > t at odd p); letters to the left are capped by the
    admissibility chain, and the very first letter is capped by the window:
    once the degree passes max(hi, 0) it can only keep climbing.
    """
    out = [()] if lo <= gdeg <= hi else []
    if max_len <= 0:
        return out

    def rec(word_rev, t, length):
        if length == max_len:
            return
        prev = word_rev[-1] if word_rev else None
        if p == 2:
            i = t + 1
            while prev is None or i <= 2 * prev:
                nt = t + i
                if i > 0 and nt > max(hi, 0):
                    break
                nrev = word_rev + [i]
                if lo <= nt <= hi:
                    out.append(tuple(reversed(nrev)))
                rec(nrev, nt, length + 1)
                i += 1
        else:
            i = t // 2 - 1
            while True:
                i += 1
                if prev is not None:
                    pe, pi = prev
                    if i > p * pi - pe:
                        break
                hit_cap = False
                for eps in (1, 0):
                    if 2 * i - eps <= t:
                        continue
                    d = primal_letter_degree(p, (eps, i))
                    nt = t + d
                    if d > 0 and nt > max(hi, 0):
                        hit_cap = True
                        continue
                    nrev = word_rev + [(eps, i)]
                    if lo <= nt <= hi:
                        out.append(tuple(reversed(nrev)))
                    rec(nrev, nt, length + 1)
                if prev is None and hit_cap:
                    break

    rec([], gdeg, 0)
    return out


def _min_letter_raise(p: int, t: int) -> int:
    """Smallest degree jump of a strictly-allowable letter at degree t."""
    if p == 2:
        return t + 1
    best = None
    for eps in (0, 1):
        i = t // 2
        while 2 * i - eps <= t:
            i += 1
        d = 2 * (p - 1) * i - eps
        best = d if best is None else min(best, d)
    return best


def free_polyR_basis(p: int, gens, degree_window, weight_cap: int):
    """Monomial basis of the free unstable polynomial algebra.

    `gens` is a list of (symbol, degree) pairs with orderable symbols.
    Returns sorted factor-tuples with total degree inside the window and
    total weight at most weight_cap.  At odd p, factors of odd degree are
    exterior and appear at most once.
    """
    import math

    lo, hi = degree_window
    if lo > hi or weight_cap < 1:
        return []

    max_len = 0
    while p ** (max_len + 1) <= weight_cap:
        max_len += 1

    degmap = dict(gens)

    def gen_deg(g):
        return degmap[g]

    def min_factor_deg(g, k):
        t = degmap[g]
        for _ in range(k):
            t += _min_letter_raise(p, t)
        return t

    # minimal total degree of a factor multiset of exact total weight w
    @lru_cache(maxsize=None)
    def min_deg_for_weight(w: int) -> float:
        if w == 0:
            return 0
        best = math.inf
        for g, _ in gens:
            for k in range(max_len + 1):
                fw = p ** k
                if fw <= w:
                    best = min(best, min_factor_deg(g, k) + min_deg_for_weight(w - fw))
        return best

    def min_future(wbudget: int) -> float:
        return min([0] + [min_deg_for_weight(w) for w in range(1, wbudget + 1)])

    abs_min = min(min_factor_deg(g, k) for g, _ in degmap.items() for k in range(max_len + 1))
    factors = []
    for g in sorted(degmap):
        f_hi = hi - min(0, min_future(weight_cap - 1))
        for w in allowable_words(p, degmap[g], max_len, abs_min, int(f_hi)):
            factors.append((w, g))
    factors.sort(key=lambda f: (factor_degree(p, f, gen_deg), f))

    out = []

    def rec(start, chosen, sdeg, swt):
        if chosen and lo <= sdeg <= hi:
            out.append(tuple(sorted(chosen)))
        for idx in range(start, len(factors)):
            f = factors[idx]
            fw = factor_weight(p, f)
            if swt + fw > weight_cap:
                continue
            fd = factor_degree(p, f, gen_deg)
            if sdeg + fd + min_future(weight_cap - swt - fw) > hi:
                break  # factors sorted by degree: nothing later fits either
            if p > 2 and fd % 2 and f in chosen:
                continue  # odd-degree factors are exterior
            chosen.append(f)
            rec(idx, chosen, sdeg + fd, swt + fw)
            chosen.pop()

    rec(0, [], 0, 0)
    out.sort(key=lambda m: (monomial_weight(p, m), monomial_degree(p, m, gen_deg), m))
    return out


# ---------------------------------------------------------------------------
# evaluation (the monad multiplication), p = 2 only


def _apply_letter(i: int, mono, gen_deg) -> dict:
    """Q^i applied to a basis monomial over F_2; dict monomial -> coef."""
    if len(mono) == 1:
        word, g = mono[0]
        total: dict = {}
        for w2, c in primal_adem_rewrite(2, (i,) + tuple(word)).items():
            for m2, c2 in _reduce_word(w2, g, gen_deg).items():
                merge_int_terms(total, m2, c * c2, 2)
        return total
    head = mono[:1]
    tail = mono[1:]
    hdeg = factor_degree(2, head[0], gen_deg)
    tdeg = monomial_degree(2, tail, gen_deg)
    out: dict = {}
    # Cartan: Q^u below the degree of its argument vanishes
    for u in range(hdeg, i - tdeg + 1):
        left = _apply_letter(u, head, gen_deg)
        if not left:
            continue
        right = _apply_letter(i - u, tail, gen_deg)
        if not right:
            continue
        for m1, c1 in left.items():
            for m2, c2 in right.items():
                merge_int_terms(out, tuple(sorted(m1 + m2)), c1 * c2, 2)
    return out


def _reduce_word(word, g, gen_deg) -> dict:
    """Reduce an admissible word on a bare generator by unstability, turning
    bottom letters into squares (p = 2)."""
    t = gen_deg(g)
    for m in range(len(word) - 1, -1, -1):
        i = word[m]
        if i < t:
            return {}
        if i == t:
            inner = (tuple(word[m + 1:]), g)
            square = tuple(sorted((inner, inner)))
            return _apply_word(word[:m], square, gen_deg)
        t += i
    return {((tuple(word), g),): 1}


def _apply_word(word, mono, gen_deg) -> dict:
    out = {mono: 1}
    for m in range(len(word) - 1, -1, -1):
        nxt: dict = {}
        for mm, c in out.items():
            for m2, c2 in _apply_letter(word[m], mm, gen_deg).items():
                merge_int_terms(nxt, m2, c * c2, 2)
        out = nxt
        if not out:
            return out
    return out


def unstable_reduce(p: int, word, gen_degree: int) -> dict:
    """Reduce an admissible word applied to a single generator "x".

    Returns a dict monomial -> coefficient over the one-generator universe.
    At odd p only the letter-level reductions are performed (kill below the
    bottom, p-th power at the bottom)."""
    gen = "x"

    def gen_deg(g):
        return gen_degree

    if p == 2:
        return _reduce_word(tuple(word), gen, gen_deg)
    t = gen_degree
    for m in range(len(word) - 1, -1, -1):
        eps, i = word[m]
        if 2 * i - eps < t:
            return {}
        if 2 * i - eps == t and eps == 0 and t % 2 == 0:
            if m != 0:
                raise NotImplementedError("odd-p evaluation above a p-th power")
            inner = (tuple(word[m + 1:]), gen)
            return {tuple(sorted([inner] * p)): 1}
        t += 2 * (p - 1) * i - eps
    return {((tuple(word), gen),): 1}


def polyR_monad_mult(p: int, expression, gen_deg) -> dict:
    """Evaluate an outer structure applied to inner basis monomials (p = 2).

    `expression` is a monomial whose factors are (word, inner_monomial)
    pairs, i.e. the outer layer of a two-layer free algebra; the result is
    the basis expansion of the evaluated product."""
    if p != 2:
        raise NotImplementedError("monad multiplication is implemented at p = 2")
    out = {(): 1}
    for word, inner in expression:
        evaluated = _apply_word(tuple(word), inner, gen_deg)
        nxt: dict = {}
        for m1, c1 in out.items():
            for m2, c2 in evaluated.items():
                merge_int_terms(nxt, tuple(sorted(m1 + m2)), c1 * c2, 2)
        out = nxt
        if not out:
            break
    return out

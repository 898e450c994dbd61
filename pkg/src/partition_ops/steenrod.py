"""S-linear operations: Steenrod words, Nishida commutation, Cartan
formulas, and canonicalization of mixed operation words.

Steenrod letters are integers a (Sq^a) at p = 2 and pairs (eps, n)
(beta^eps P^n) at odd p, with (1, 0) the bare Bockstein; words apply right
to left and Sq^0 = P^0 is the identity.  Admissible means a_i >= 2 a_{i+1}
resp. n_i >= p n_{i+1} + eps_{i+1}; inadmissible pairs expand through the
classical Adem relations, kept in one table-driven function.

Mixed words canonicalize by pushing Steenrod letters inward (to the right)
past the unary R-operations via the Nishida relations; a Steenrod letter
meeting the bottom operation of a class additionally produces bracket
terms.  A canonical term is an R-word applied to either a generator
carrying a Steenrod word or a bracket of two canonical terms:

    term = (rletters, node),  node = ("gen", sword) | ("brk", term, term).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

from .fpcore import binom_mod_p, inverse_mod_p, merge_int_terms
from .power_ring import normalize_rword, r_letter_drop, r_word_drop

MAX_CANON_STEPS = 10**5


# ---------------------------------------------------------------------------
# Steenrod words


def steenrod_letter_degree(p: int, letter) -> int:
    """Degree drop in homotopy grading (= cohomological degree)."""
    if p == 2:
        return letter
    eps, n = letter
    return 2 * (p - 1) * n + eps


def steenrod_word_degree(p: int, word) -> int:
    return sum(steenrod_letter_degree(p, lt) for lt in word)


def is_admissible_steenrod(p: int, word) -> bool:
    if p == 2:
        return all(word[m] >= 2 * word[m + 1] for m in range(len(word) - 1))
    for m in range(len(word) - 1):
        (_, a), (e2, b) = word[m], word[m + 1]
        if b == 0:
            # a bare Bockstein is only admissible as the closing letter
            if m + 1 != len(word) - 1 or word[m + 1] != (1, 0):
                return False
        elif a < p * b + e2:
            return False
    return True


@lru_cache(maxsize=1 << 15)
def _steenrod_pair(p: int, left, right):
    """Adem expansion of one inadmissible Steenrod pair."""
    out: dict = {}
    if p == 2:
        a, b = left, right
        for t in range(0, a // 2 + 1):
            coef = binom_mod_p(b - t - 1, a - 2 * t, 2)
            if coef:
                word = (a + b - t,) if t == 0 else (a + b - t, t)
                merge_int_terms(out, word, coef, 2)
        return tuple(out.items())
    (e1, a), (e2, b) = left, right
    if e2 == 0:
        for t in range(0, a // p + 1):
            sign = -1 if (a + t) % 2 else 1
            c = sign * binom_mod_p((p - 1) * (b - t) - 1, a - p * t, p)
            if c % p:
                word = ((e1, a + b - t),) if t == 0 else ((e1, a + b - t), (0, t))
                merge_int_terms(out, word, c, p)
        return tuple(out.items())
    # left beta^{e1} P^a against beta P^b, applicable for a <= pb
    for t in range(0, a // p + 1):
        sign = -1 if (a + t) % 2 else 1
        if e1 == 0:
            c1 = sign * binom_mod_p((p - 1) * (b - t), a - p * t, p)
            if c1 % p:
                word = ((1, a + b - t),) if t == 0 else ((1, a + b - t), (0, t))
                merge_int_terms(out, word, c1, p)
        c2 = -sign * binom_mod_p((p - 1) * (b - t) - 1, a - p * t - 1, p)
        if c2 % p:
            word = ((e1, a + b - t), (1, t))
            merge_int_terms(out, word, c2, p)
    return tuple(out.items())


def steenrod_adem_rewrite(p: int, word) -> dict:
    """Admissible-basis expansion of a Steenrod word: dict word -> coef.

    Interior bare Bocksteins merge into the following letter; a double
    Bockstein kills the word."""
    pending = {tuple(lt for lt in word if lt not in (0, (0, 0))): 1}
    out: dict = {}
    steps = 0
    while pending:
        w, coef = pending.popitem()
        steps += 1
        if steps > MAX_CANON_STEPS:
            raise RuntimeError("Steenrod rewriting exceeded the iteration guard")
        action = None  # ("zero",) | ("merge", m) | ("pair", m)
        for m in range(len(w) - 1):
            if p == 2:
                if w[m] < 2 * w[m + 1]:
                    action = ("pair", m)
                    break
                continue
            (e1, a), (e2, b) = w[m], w[m + 1]
            if a == 0:  # bare Bockstein left of something
                if e2 == 1:
                    action = ("zero",)
                else:
                    action = ("merge", m)
                break
            if b == 0:
                if e1 == 1:
                    action = ("zero",)
                    break
                continue  # trailing/interior "P^a beta": admissible shape
            if a < p * b + e2:
                action = ("pair", m)
                break
        if action is None:
            merge_int_terms(out, w, coef, p)
            continue
        if action[0] == "zero":
            continue
        if action[0] == "merge":
            m = action[1]
            neww = w[:m] + ((1, w[m + 1][1]),) + w[m + 2:]
            merge_int_terms(pending, neww, coef, p)
            continue
        m = action[1]
        for pair, c2 in _steenrod_pair(p, w[m], w[m + 1]):
            neww = w[:m] + pair + w[m + 2:]
            merge_int_terms(pending, neww, coef * c2, p)
    return out


def admissible_steenrod_words(p: int, max_degree: int):
    """All admissible Steenrod words of degree <= max_degree, the empty word
    (identity) included."""
    out = [()]
    if max_degree < 1:
        return out
    if p == 2:
        def rec(rev, total):
            lowest = 2 * rev[-1] if rev else 1
            for a in range(lowest, max_degree - total + 1):
                nrev = rev + [a]
                out.append(tuple(reversed(nrev)))
                rec(nrev, total + a)
        rec([], 0)
        return out

    def rec(rev, total):
        if rev:
            pe, ps = rev[-1]
            lowest = lambda e: p * ps + e
        else:
            lowest = lambda e: 1
        s = 1
        while True:
            added = False
            for e in (0, 1):
                d = 2 * (p - 1) * s + e
                if s >= lowest(e) and total + d <= max_degree:
                    nrev = rev + [(e, s)]
                    out.append(tuple(reversed(nrev)))
                    rec(nrev, total + d)
                    added = True
            if 2 * (p - 1) * s > max_degree - total and not added:
                break
            s += 1
        return

    rec([], 0)
    closed = []
    for w in out:
        if steenrod_word_degree(p, w) + 1 <= max_degree:
            closed.append(w + ((1, 0),))
    return out + closed


# ---------------------------------------------------------------------------
# mixed terms


def gen_node(sword=()) -> tuple:
    return ("gen", tuple(sword))


def node_degree(p: int, node, class_degree: int) -> int:
    if node[0] == "gen":
        return class_degree - steenrod_word_degree(p, node[1])
    _, t1, t2 = node
    return term_degree(p, t1, class_degree) + term_degree(p, t2, class_degree) - 1


def term_degree(p: int, t, class_degree: int) -> int:
    rletters, node = t
    return node_degree(p, node, class_degree) - r_word_drop(p, rletters)


def node_weight(p: int, node) -> int:
    if node[0] == "gen":
        return 1
    _, t1, t2 = node
    return term_weight(p, t1) + term_weight(p, t2)


def term_weight(p: int, t) -> int:
    rletters, node = t
    return node_weight(p, node) * p ** len(rletters)


def _r_bottom(p: int, degree: int):
    if p == 2:
        return -degree + 1
    if degree % 2 == 0:
        return None
    return (0, (-degree + 1) // 2)


def _nishida_linear(p: int, s_letter, r_letter, arg_degree: int):
    """Linear part of one Steenrod letter past one R-letter on a class of
    the given degree: list of (r', s'|None, coef).  The bottom case shares
    the same sum; its extra bracket terms are produced separately."""
    out = []
    if p == 2:
        a, b = s_letter, r_letter
        for c in range(0, a // 2 + 1):
            coef = binom_mod_p(b - 1 - c, a - 2 * c, 2)
            if coef:
                out.append((a + b - c, c if c else None, coef))
        return out
    es, nn = s_letter
    if es != 0:
        raise ValueError("push the bare Bockstein separately")
    er, jj = r_letter
    for i in range(0, nn // p + 1):
        sign = -1 if (nn - i) % 2 else 1
        if er == 0:
            c = sign * binom_mod_p((jj - i) * (p - 1) - 1, nn - p * i, p)
            if c % p:
                out.append(((0, nn + jj - i), (0, i) if i else None, c))
        else:
            c1 = sign * binom_mod_p((jj - i) * (p - 1), nn - p * i, p)
            if c1 % p:
                out.append(((1, nn + jj - i), (0, i) if i else None, c1))
            c2 = sign * binom_mod_p((jj - i) * (p - 1) - 1, nn - p * i - 1, p)
            if c2 % p:
                out.append(((0, nn + jj - i), (1, i), c2))
    return out


def _nishida_bracket_leaves(p: int, s_letter, lam: int = 1):
    """Bracket corrections for a Steenrod letter on the bottom operation:
    list of (leaf_swords, coef); the leaves nest left-to-right onto copies
    of the argument class."""
    out = []
    if p == 2:
        a = s_letter
        for l in range(0, (a + 1) // 2):
            k = a - l
            if l < k:
                out.append((( (l,) if l else (), (k,) ), 1))
        return out
    _, nn = s_letter
    lam_inv = inverse_mod_p(lam, p)

    def nondecreasing(total, parts, minimum):
        if parts == 1:
            if total >= minimum:
                yield (total,)
            return
        for first in range(minimum, total // parts + 1):
            for rest in nondecreasing(total - first, parts - 1, first):
                yield (first,) + rest

    for I in nondecreasing(nn, p, 0):
        for sigma in permutations(range(1, p)):
            order = (0,) + sigma
            leaves = tuple(((0, I[idx]),) if I[idx] else () for idx in order)
            out.append((leaves, lam_inv))
    return out


def canonicalize(p: int, letters, class_degree: int, order: str = "rightmost") -> dict:
    """Canonical form (dict term -> coef) of a mixed word applied to a
    degree-`class_degree` generator.  `letters` are ("S", payload) and
    ("R", payload) tags, applied right to left."""
    return _canon_term(p, tuple(letters), gen_node(), class_degree, order)


def nishida_rewrite(p: int, s_letter, r_letter, class_degree: int) -> dict:
    """One Steenrod letter pushed past one R-letter (bottom included) on a
    class of the given degree."""
    return canonicalize(p, (("S", s_letter), ("R", r_letter)), class_degree)


def cartan_bracket(p: int, s_letter, t1, t2, class_degree: int) -> dict:
    """Steenrod letter applied to the bracket of two canonical terms."""
    return _push_s_into_bracket(p, s_letter, ("brk", t1, t2), class_degree, "rightmost")


def _letters_degree(p: int, lts) -> int:
    return sum(r_letter_drop(p, l[1]) if l[0] == "R" else steenrod_letter_degree(p, l[1])
               for l in lts)


def _canon_term(p: int, letters, node, class_degree: int, order: str) -> dict:
    out: dict = {}
    pending: dict = {(tuple(letters), node): 1}
    steps = 0
    while pending:
        (lts, nd), coef = pending.popitem()
        steps += 1
        if steps > MAX_CANON_STEPS:
            raise RuntimeError("canonicalization exceeded the iteration guard")
        pos = _find_sr(lts, order)
        if pos is None:
            for t2, c2 in _finalize(p, lts, nd, class_degree, order).items():
                merge_int_terms(out, t2, coef * c2, p)
            continue
        s_letter = lts[pos][1]
        r_letter = lts[pos + 1][1]
        suffix = lts[pos + 2:]
        arg_deg = node_degree(p, nd, class_degree) - _letters_degree(p, suffix)
        if p > 2 and s_letter[1] == 0:
            # bare Bockstein: beta R^j -> betaR^j, beta betaR^j -> 0
            er, jj = r_letter
            if er == 0:
                nlts = lts[:pos] + (("R", (1, jj)),) + suffix
                merge_int_terms(pending, (nlts, nd), coef, p)
            continue
        if p > 2 and s_letter[0] == 1:
            # split beta P^n into beta . P^n
            nlts = lts[:pos] + (("S", (1, 0)), ("S", (0, s_letter[1])), ("R", r_letter)) + suffix
            merge_int_terms(pending, (nlts, nd), coef, p)
            continue
        for rp, sp, c in _nishida_linear(p, s_letter, r_letter, arg_deg):
            ins = (("R", rp),) + ((("S", sp),) if sp is not None else ())
            merge_int_terms(pending, ((lts[:pos] + ins + suffix), nd), coef * c, p)
        if r_letter == _r_bottom(p, arg_deg):
            for leaves, c in _nishida_bracket_leaves(p, s_letter):
                for bnode, c2 in _build_bracket(p, leaves, suffix, nd, class_degree, order).items():
                    merge_int_terms(pending, ((lts[:pos], bnode)), coef * c * c2, p)
    return out


def _build_bracket(p: int, leaves, suffix, nd, class_degree: int, order: str) -> dict:
    """Left-nested bracket of Steenrod-decorated copies of the argument
    (suffix applied to nd): dict bracket-node -> coef.  Brackets always
    have at least two leaves, so every accumulated term is a bare node."""
    leaf_elems = []
    for sword in leaves:
        pre = tuple(("S", lt) for lt in sword)
        leaf_elems.append(_canon_term(p, pre + tuple(suffix), nd, class_degree, order))
    acc = dict(leaf_elems[0])
    for nxt in leaf_elems[1:]:
        stepped: dict = {}
        for lt, cl in acc.items():
            for rt, cr in nxt.items():
                merge_int_terms(stepped, ((), ("brk", lt, rt)), cl * cr, p)
        acc = stepped
    return {t[1]: c for t, c in acc.items()}


def _push_s_into_bracket(p: int, s_letter, node, class_degree: int, order: str) -> dict:
    """Cartan: a Steenrod letter distributes over a bracket node; returns
    dict node -> coef."""
    _, t1, t2 = node
    out: dict = {}

    def prep(s, t):
        if s is None:
            return {t: 1}
        pre = (("S", s),) + tuple(("R", l) for l in t[0])
        return _canon_term(p, pre, t[1], class_degree, order)

    if p == 2:
        a = s_letter
        for i in range(0, a + 1):
            left = prep(i if i else None, t1)
            right = prep(a - i if a - i else None, t2)
            _acc_brk(p, out, left, right, 1)
        return out
    eps, n = s_letter
    if n == 0 and eps == 1:
        _acc_brk(p, out, prep((1, 0), t1), {t2: 1}, 1)
        _acc_brk(p, out, {t1: 1}, prep((1, 0), t2), 1)
        return out
    for i in range(0, n + 1):
        if eps == 0:
            left = prep((0, i) if i else None, t1)
            right = prep((0, n - i) if n - i else None, t2)
            _acc_brk(p, out, left, right, 1)
        else:
            bl = prep((1, i), t1)
            right = prep((0, n - i) if n - i else None, t2)
            _acc_brk(p, out, bl, right, 1)
            left = prep((0, i) if i else None, t1)
            br = prep((1, n - i), t2)
            _acc_brk(p, out, left, br, 1)
    return out


def _acc_brk(p: int, out: dict, left: dict, right: dict, coef: int) -> None:
    for lt, cl in left.items():
        for rt, cr in right.items():
            merge_int_terms(out, ("brk", lt, rt), coef * cl * cr, p)


def _find_sr(lts, order: str):
    rng = range(len(lts) - 1)
    if order == "rightmost":
        rng = range(len(lts) - 2, -1, -1)
    for m in rng:
        if lts[m][0] == "S" and lts[m + 1][0] == "R":
            return m
    return None


def _finalize(p: int, lts, node, class_degree: int, order: str) -> dict:
    """Letters have the shape R* S*: fold the Steenrod run into the node,
    normalize the R-run on the node's degree."""
    split = len(lts)
    for m, l in enumerate(lts):
        if l[0] == "S":
            split = m
            break
    rrun = tuple(l[1] for l in lts[:split])
    srun = tuple(l[1] for l in lts[split:])
    out: dict = {}
    if node[0] == "gen":
        for sw, c in steenrod_adem_rewrite(p, srun + node[1]).items():
            nn = gen_node(sw)
            deg = node_degree(p, nn, class_degree)
            for rw, c2 in normalize_rword(p, rrun, deg).items():
                merge_int_terms(out, (rw, nn), c * c2, p)
        return out
    if srun:
        # push the innermost Steenrod letter into the bracket, keep going
        inner = _push_s_into_bracket(p, srun[-1], node, class_degree, order)
        rest = tuple(("R", l) for l in rrun) + tuple(("S", l) for l in srun[:-1])
        for nd2, c in inner.items():
            for t2, c2 in _canon_term(p, rest, nd2, class_degree, order).items():
                merge_int_terms(out, t2, c * c2, p)
        return out
    deg = node_degree(p, node, class_degree)
    for rw, c2 in normalize_rword(p, rrun, deg).items():
        merge_int_terms(out, (rw, node), c2, p)
    return out

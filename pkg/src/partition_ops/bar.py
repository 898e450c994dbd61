"""Desk-scale homology oracle over F_2: the normalized two-sided bar complex
of the free unstable polynomial monad on a one-generator trivial algebra.

Level s holds the s-fold free algebra on the generator; faces are the outer
augmentation, the layer-merging monad multiplications, and the trivial
action on the generator.  Degeneracies insert bare layers, so the
normalized complex keeps exactly the monomials with no all-bare layer.
Boundary maps preserve internal degree and weight, hence the complex
splits into finite (degree, weight) blocks and homology ranks come from
Gaussian elimination over F_2.

The homology dimensions are compared cell by cell against the admissible
dual-word counts; agreement in every cell is the collapse statement at
desk scale.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .fpcore import merge_int_terms
from . import dyer_lashof as dl
from . import ringoid
from .ringoid import FULL

GENERATOR = "x"


class ResourceBudgetError(RuntimeError):
    pass


def _memory_cap_mb() -> int:
    return int(os.environ.get("PARTITION_OPS_MEM_MB", "2048"))


# -- expressions --------------------------------------------------------------


def expr_degree(p: int, expr, level: int, gen_degree: int) -> int:
    if level == 0:
        return gen_degree
    return sum(dl.primal_word_degree(p, w) + expr_degree(p, arg, level - 1, gen_degree)
               for w, arg in expr)


def expr_weight(p: int, expr, level: int) -> int:
    if level == 0:
        return 1
    return sum(p ** len(w) * expr_weight(p, arg, level - 1) for w, arg in expr)


def _is_bare(expr) -> bool:
    return len(expr) == 1 and expr[0][0] == ()


def _depth_nodes(expr, depth: int):
    if depth == 1:
        return [expr]
    out = []
    for _, arg in expr:
        out.extend(_depth_nodes(arg, depth - 1))
    return out


def is_degenerate(expr, level: int) -> bool:
    for d in range(1, level + 1):
        nodes = _depth_nodes(expr, d)
        if nodes and all(_is_bare(n) for n in nodes):
            return True
    return False


# -- faces ---------------------------------------------------------------------


def _merge_outer(expr, level: int, gen_degree: int) -> dict:
    """Monad multiplication of the two outermost layers."""
    def gen_deg(arg):
        return expr_degree(2, arg, level - 2, gen_degree)
    return dl.polyR_monad_mult(2, expr, gen_deg)


def _map_args(expr, fn) -> dict:
    """Apply a dict-valued map to every factor argument, multilinearly."""
    out = {(): 1}
    for w, arg in expr:
        expanded = fn(arg)
        nxt: dict = {}
        for m1, c1 in out.items():
            for a2, c2 in expanded.items():
                merged = tuple(sorted(m1 + ((w, a2),)))
                merge_int_terms(nxt, merged, c1 * c2, 2)
        out = nxt
        if not out:
            break
    return out


def face(expr, level: int, i: int, gen_degree: int) -> dict:
    """d_i on a level-`level` basis expression: dict expression -> coef."""
    if i == 0:
        return {expr[0][1]: 1} if _is_bare(expr) else {}
    if i == level:
        # trivial action on the generator at the innermost layer
        if level == 1:
            return {GENERATOR: 1} if _is_bare(expr) else {}
        return _map_args(expr, lambda arg: face(arg, level - 1, level - 1, gen_degree))
    if i == 1:
        return _merge_outer(expr, level, gen_degree)
    return _map_args(expr, lambda arg: face(arg, level - 1, i - 1, gen_degree))


def boundary(expr, level: int, gen_degree: int) -> dict:
    out: dict = {}
    for i in range(level + 1):
        for e2, c in face(expr, level, i, gen_degree).items():
            merge_int_terms(out, e2, c, 2)
    return out


# -- the complex -----------------------------------------------------------------


@dataclass
class BarComplex:
    gen_degree: int
    weight_cap: int
    window: tuple
    levels: list = field(default_factory=list)          # level -> [expr]
    cells: list = field(default_factory=list)           # level -> {(t, w): [expr]}
    boundaries: list = field(default_factory=list)      # level -> {(t, w): matrix}


def build_bar_complex(gen_degree: int, weight_cap: int, degree_window) -> BarComplex:
    """Assemble the normalized complex with its per-cell boundary matrices;
    checks that the boundary squares to zero."""
    if weight_cap < 1 or weight_cap > 4:
        raise ValueError("the oracle is tuned for weight caps 2..4")
    lo, hi = degree_window
    cx = BarComplex(gen_degree, weight_cap, (lo, hi))

    levels = [[GENERATOR]]
    max_level = weight_cap  # nondegenerate weight grows with the level
    for s in range(1, max_level + 1):
        prev = levels[s - 1]
        gens = [(e, expr_degree(2, e, s - 1, gen_degree)) for e in prev]
        basis = dl.free_polyR_basis(2, gens, (lo, hi), weight_cap)
        basis = [e for e in basis if not is_degenerate(e, s)]
        levels.append(basis)
    cx.levels = levels

    cx.cells = []
    for s, basis in enumerate(levels):
        bycell: dict = {}
        for e in basis:
            key = (expr_degree(2, e, s, gen_degree), expr_weight(2, e, s))
            bycell.setdefault(key, []).append(e)
        cx.cells.append(bycell)

    budget = 0
    for s in range(1, len(levels)):
        for key, col in cx.cells[s].items():
            rows = cx.cells[s - 1].get(key, [])
            budget += max(1, len(rows)) * len(col)
    if budget > _memory_cap_mb() * (1 << 20):
        raise ResourceBudgetError(
            f"bar complex needs ~{budget} matrix bytes, over PARTITION_OPS_MEM_MB")

    cx.boundaries = [dict() for _ in levels]
    for s in range(1, len(levels)):
        for key, col_basis in cx.cells[s].items():
            rows = cx.cells[s - 1].get(key, [])
            index = {e: r for r, e in enumerate(rows)}
            mat = np.zeros((len(rows), len(col_basis)), dtype=np.uint8)
            for c, e in enumerate(col_basis):
                for e2, coef in boundary(e, s, gen_degree).items():
                    if e2 in index:
                        mat[index[e2], c] ^= coef & 1
                    elif not (s - 1 > 0 and is_degenerate(e2, s - 1)):
                        # boundary leaves the window only by leaving the
                        # basis cell entirely, which homogeneity forbids
                        raise AssertionError("boundary escaped its cell")
            cx.boundaries[s][key] = mat

    _assert_square_zero(cx)
    return cx


def _assert_square_zero(cx: BarComplex) -> None:
    for s in range(2, len(cx.levels)):
        for key, mat in cx.boundaries[s].items():
            up = cx.boundaries[s - 1].get(key)
            if up is None or up.size == 0 or mat.size == 0:
                continue
            prod = (up.astype(np.int64) @ mat.astype(np.int64)) % 2
            if prod.any():
                raise AssertionError(f"boundary does not square to zero in cell {key}")


def _rank_f2(mat: np.ndarray) -> int:
    if mat.size == 0:
        return 0
    m = mat.copy() % 2
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        pivot = None
        for r in range(rank, rows):
            if m[r, c]:
                pivot = r
                break
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(rows):
            if r != rank and m[r, c]:
                m[r] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def homology_dims(cx: BarComplex) -> dict:
    """dict (level, degree, weight) -> dimension of the homology."""
    out: dict = {}
    for s in range(len(cx.levels)):
        keys = set(cx.cells[s])
        for key in keys:
            n = len(cx.cells[s][key])
            rank_in = _rank_f2(cx.boundaries[s][key]) if s >= 1 and key in cx.boundaries[s] else 0
            rank_out = 0
            if s + 1 < len(cx.levels) and key in cx.boundaries[s + 1]:
                rank_out = _rank_f2(cx.boundaries[s + 1][key])
            dim = n - rank_in - rank_out
            if dim:
                out[(s, key[0], key[1])] = dim
    return out


def dual_word_counts(gen_degree: int, weight_cap: int, degree_window) -> dict:
    """dict (level, degree, weight) -> number of admissible dual words.

    A length-s word on the dual generator matches primal homological level
    s, internal degree gen_degree + (sum of its index drops), weight 2^s."""
    lo, hi = degree_window
    src = -gen_degree
    max_len = weight_cap.bit_length()
    total_lo = -hi - max_len
    total_hi = -lo
    out: dict = {}
    for w in ringoid._admissible_words(2, FULL, src, max_len, total_lo, total_hi):
        s = len(w)
        wt = 2 ** s
        if wt > weight_cap:
            continue
        t = gen_degree + sum(w)
        if lo <= t <= hi:
            key = (s, t, wt)
            out[key] = out.get(key, 0) + 1
    return out


def compare_with_E2(gen_degree: int, weight_cap: int, degree_window):
    """Per-cell comparison of bar homology against dual-word counts.

    Returns (all_equal, rows) with rows (level, degree, weight, bar_dim,
    word_count, equal)."""
    cx = build_bar_complex(gen_degree, weight_cap, degree_window)
    h = homology_dims(cx)
    e2 = dual_word_counts(gen_degree, weight_cap, degree_window)
    keys = sorted(set(h) | set(e2))
    rows = []
    ok = True
    for key in keys:
        a = h.get(key, 0)
        b = e2.get(key, 0)
        eq = a == b
        ok = ok and eq
        rows.append((key[0], key[1], key[2], a, b, eq))
    return ok, rows

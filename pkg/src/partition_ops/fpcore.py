"""Exact arithmetic over the prime fields F_p.

Everything downstream (Adem relations, restricted-Lie identities, homology
ranks) reduces to integer arithmetic mod p plus one generalized binomial
coefficient.  The binomial here is the *falling factorial* binomial

    binom(n, k) = n (n-1) ... (n-k+1) / k!     for k >= 0, any integer n,

which agrees with the usual one for 0 <= k <= n, vanishes for k > n >= 0,
and is generally nonzero for negative n (e.g. binom(-1, k) = (-1)^k).  The
quadratic relations of the dual ringoids sum over ranges where the upper
argument may become any integer, and their vanishing patterns hold in this
convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Largest prime the package accepts.  The combinatorics is exponential in p,
# so anything beyond a small prime is out of computational reach anyway.
MAX_PRIME = 97

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


class MixedPrimesError(ValueError):
    """Raised when scalars over different primes are combined."""


def is_prime(n: int) -> bool:
    return n in _SMALL_PRIMES


@dataclass(frozen=True)
class Prime:
    """A validated prime p with 2 <= p <= MAX_PRIME."""

    p: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not a supported prime (2..{MAX_PRIME})")

    def __int__(self) -> int:
        return self.p

    def __str__(self) -> str:
        return str(self.p)


def _as_int_prime(p: "Prime | int") -> int:
    q = int(p)
    if not is_prime(q):
        raise ValueError(f"{q} is not a supported prime (2..{MAX_PRIME})")
    return q


def binom(n: int, k: int) -> int:
    """Falling-factorial binomial coefficient as an exact integer.

    Returns 0 for k < 0.  For n < 0 uses the reflection
    binom(n, k) = (-1)^k binom(k - n - 1, k).
    """
    if k < 0:
        return 0
    if n >= 0:
        if k > n:
            return 0
        return math.comb(n, k)
    value = math.comb(k - n - 1, k)
    return -value if k % 2 else value


def binom_mod_p(n: int, k: int, p: "Prime | int") -> int:
    """binom(n, k) reduced mod p, as a residue in [0, p)."""
    return binom(n, k) % _as_int_prime(p)


@dataclass(frozen=True)
class FpScalar:
    """A residue in F_p.  Arithmetic refuses to mix primes."""

    p: int
    value: int

    def __post_init__(self) -> None:
        q = _as_int_prime(self.p)
        object.__setattr__(self, "p", q)
        object.__setattr__(self, "value", self.value % q)

    def _check(self, other: "FpScalar") -> None:
        if self.p != other.p:
            raise MixedPrimesError(f"cannot combine F_{self.p} with F_{other.p}")

    def __add__(self, other: "FpScalar") -> "FpScalar":
        self._check(other)
        return FpScalar(self.p, self.value + other.value)

    def __sub__(self, other: "FpScalar") -> "FpScalar":
        self._check(other)
        return FpScalar(self.p, self.value - other.value)

    def __mul__(self, other: "FpScalar") -> "FpScalar":
        self._check(other)
        return FpScalar(self.p, self.value * other.value)

    def __neg__(self) -> "FpScalar":
        return FpScalar(self.p, -self.value)

    def inverse(self) -> "FpScalar":
        if self.value == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return FpScalar(self.p, pow(self.value, self.p - 2, self.p))

    def __bool__(self) -> bool:
        return self.value != 0


def inverse_mod_p(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("inverse of 0 in F_p")
    return pow(a, p - 2, p)


def fp_linear_combine(terms):
    """Merge a list of (FpScalar, key) pairs into a key -> FpScalar map.

    Duplicate keys are added; zero coefficients are dropped.  All scalars
    must live over one prime.
    """
    out: dict = {}
    prime: int | None = None
    for scalar, key in terms:
        if prime is None:
            prime = scalar.p
        elif scalar.p != prime:
            raise MixedPrimesError(f"cannot combine F_{prime} with F_{scalar.p}")
        acc = out.get(key)
        out[key] = scalar if acc is None else acc + scalar
    return {k: v for k, v in out.items() if v.value != 0}


def merge_int_terms(target: dict, word, coef: int, p: int) -> None:
    """In-place merge of coef * word into an int-coefficient term dict."""
    new = (target.get(word, 0) + coef) % p
    if new:
        target[word] = new
    else:
        target.pop(word, None)

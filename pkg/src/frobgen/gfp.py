"""Arithmetic in the prime field F_p and binomial coefficients modulo p.

Binomials are always evaluated through Lucas' theorem on base-p digits:
the arguments routinely reach p^n - 1, where any route through factorials
of multiples of p collapses to 0 mod p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ContextMismatch, DivisionByZero, InvalidPrime

# keeps every scalar product inside 64 bits before reduction; the algorithms
# blow up in p^s long before larger fields become interesting
PRIME_LIMIT = 1 << 16


def is_prime(n: int) -> bool:
    """Trial division; the supported moduli are tiny."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise InvalidPrime(f"modulus {p!r} is not prime")
    if p >= PRIME_LIMIT:
        raise InvalidPrime(f"modulus {p} exceeds the supported bound {PRIME_LIMIT}")
    return p


class FpContext:
    """A fixed prime modulus with a cache of binomials mod p."""

    __slots__ = ("p", "_binom_cache")

    def __init__(self, p: int):
        self.p = check_prime(p)
        self._binom_cache: dict[tuple[int, int], int] = {}

    def __eq__(self, other):
        return isinstance(other, FpContext) and other.p == self.p

    def __repr__(self):
        return f"FpContext(p={self.p})"

    def element(self, value: int) -> "Fp":
        return Fp(value % self.p, self.p)

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise DivisionByZero("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    def binom(self, a: int, b: int) -> int:
        """C(a, b) mod p via Lucas' digit product; 0 when b > a."""
        if b < 0 or b > a:
            return 0
        key = (a, b)
        cached = self._binom_cache.get(key)
        if cached is not None:
            return cached
        p = self.p
        out = 1
        x, y = a, b
        while y > 0 and out:
            xd, yd = x % p, y % p
            if yd > xd:
                out = 0
                break
            out = out * (math.comb(xd, yd) % p) % p
            x //= p
            y //= p
        self._binom_cache[key] = out
        return out

    def multiindex_binom(self, alpha, beta) -> int:
        """Product of per-coordinate binomials; 0 unless beta <= alpha."""
        if len(alpha) != len(beta):
            raise ContextMismatch(
                f"multi-index dimensions differ: {len(alpha)} vs {len(beta)}"
            )
        out = 1
        for a, b in zip(alpha, beta):
            out = out * self.binom(a, b) % self.p
            if out == 0:
                return 0
        return out

    def multinomial(self, n: int, parts) -> int:
        """multinomial(n; parts) mod p as a product of Lucas binomials."""
        if any(k < 0 for k in parts) or sum(parts) != n:
            return 0
        out = 1
        rest = n
        for k in parts:
            out = out * self.binom(rest, k) % self.p
            if out == 0:
                return 0
            rest -= k
        return out


@dataclass(frozen=True)
class Fp:
    """An element of F_p; operands must share the modulus."""

    value: int
    p: int

    def __post_init__(self):
        if not 0 <= self.value < self.p:
            raise ValueError(f"value {self.value} outside [0, {self.p})")

    def _match(self, other: "Fp") -> "Fp":
        if not isinstance(other, Fp):
            other = Fp(other % self.p, self.p)
        elif other.p != self.p:
            raise ContextMismatch(f"moduli differ: {self.p} vs {other.p}")
        return other

    def __add__(self, other):
        other = self._match(other)
        return Fp((self.value + other.value) % self.p, self.p)

    def __sub__(self, other):
        other = self._match(other)
        return Fp((self.value - other.value) % self.p, self.p)

    def __mul__(self, other):
        other = self._match(other)
        return Fp(self.value * other.value % self.p, self.p)

    def __neg__(self):
        return Fp(-self.value % self.p, self.p)

    def inv(self) -> "Fp":
        if self.value == 0:
            raise DivisionByZero("inverse of 0 in F_p")
        return Fp(pow(self.value, self.p - 2, self.p), self.p)

    def __repr__(self):
        return f"{self.value} (mod {self.p})"

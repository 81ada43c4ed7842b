"""Sparse multivariate polynomials over F_p.

Exponent vectors are plain int tuples.  A polynomial is a mapping from
exponent tuple to a nonzero coefficient in [1, p); the zero polynomial is
the empty mapping and has degree -1.  Values never mutate after
construction, so everything here is safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    ContextMismatch,
    InvalidInput,
    NotAPnPower,
    ParseError,
    ResourceLimit,
)
from .gfp import FpContext

Mi = tuple  # exponent vector


class MonomialOrder:
    """Total order on exponent tuples; bigger key() means bigger monomial."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        if name not in ("grevlex", "lex"):
            raise InvalidInput(f"unknown monomial order {name!r}")
        self.name = name

    def key(self, alpha: Mi):
        if self.name == "lex":
            return alpha
        # graded reverse lex with x1 > x2 > ... > xd
        return (sum(alpha), tuple(-a for a in reversed(alpha)))

    def heap_key(self, alpha: Mi):
        """Elementwise negation of key(); min-heap pops the largest monomial."""
        if self.name == "lex":
            return tuple(-a for a in alpha)
        return (-sum(alpha), tuple(reversed(alpha)))

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and other.name == self.name

    def __repr__(self):
        return f"MonomialOrder({self.name!r})"

    @staticmethod
    def from_name(name: str) -> "MonomialOrder":
        return GREVLEX if name == "grevlex" else MonomialOrder(name)


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


@dataclass(frozen=True)
class Limits:
    """Caps that turn runaway computations into loud ResourceLimit errors."""

    max_exponent: int = 4096
    max_terms: int = 5_000_000


class PolyRing:
    """Context for F_p[x1..xd]: prime, dimension, monomial order, caps."""

    __slots__ = ("field", "p", "d", "order", "limits")

    def __init__(self, p: int, d: int, order: MonomialOrder = GREVLEX, limits: Limits = Limits()):
        self.field = FpContext(p)
        self.p = self.field.p
        if not isinstance(d, int) or d < 1:
            raise InvalidInput(f"number of variables must be >= 1, got {d!r}")
        self.d = d
        self.order = order
        self.limits = limits

    def __repr__(self):
        return f"PolyRing(p={self.p}, d={self.d}, order={self.order.name})"

    def compatible(self, other: "PolyRing") -> bool:
        return self.p == other.p and self.d == other.d

    def require_same(self, other: "PolyRing"):
        if not self.compatible(other):
            raise ContextMismatch(
                f"contexts differ: (p={self.p}, d={self.d}) vs (p={other.p}, d={other.d})"
            )

    def var_name(self, i: int) -> str:
        return f"x{i + 1}"

    # --- constructors -------------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        c %= self.p
        if c == 0:
            return self.zero()
        return Polynomial(self, {(0,) * self.d: c})

    def gen(self, i: int) -> "Polynomial":
        if not 0 <= i < self.d:
            raise InvalidInput(f"variable index {i} outside [0, {self.d})")
        e = [0] * self.d
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def monomial(self, alpha: Mi, c: int = 1) -> "Polynomial":
        c %= self.p
        alpha = tuple(alpha)
        if len(alpha) != self.d or any(a < 0 for a in alpha):
            raise InvalidInput(f"bad exponent vector {alpha!r} for d={self.d}")
        if c == 0:
            return self.zero()
        return Polynomial(self, {alpha: c})

    def from_terms(self, pairs) -> "Polynomial":
        """Sum of (exponent, coefficient) pairs, merged and reduced mod p."""
        acc: dict[Mi, int] = {}
        for alpha, c in pairs:
            alpha = tuple(alpha)
            if len(alpha) != self.d or any(a < 0 for a in alpha):
                raise InvalidInput(f"bad exponent vector {alpha!r} for d={self.d}")
            v = (acc.get(alpha, 0) + c) % self.p
            if v:
                acc[alpha] = v
            else:
                acc.pop(alpha, None)
        return Polynomial(self, acc)

    def parse(self, text: str) -> "Polynomial":
        return _parse(self, text)

    def from_json(self, obj) -> "Polynomial":
        try:
            p, d, terms = obj["p"], obj["d"], obj["terms"]
        except (TypeError, KeyError) as exc:
            raise ParseError(f"malformed polynomial JSON: missing {exc}") from None
        if p != self.p or d != self.d:
            raise ContextMismatch(f"polynomial JSON is for (p={p}, d={d}), ring is (p={self.p}, d={self.d})")
        return self.from_terms((tuple(t["e"]), t["c"]) for t in terms)


class Polynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        # terms must already be normalized: nonzero coefficients in [1, p)
        self.ring = ring
        self.terms = terms

    # --- basics -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(a) for a in self.terms)

    def coefficient(self, alpha: Mi) -> int:
        return self.terms.get(tuple(alpha), 0)

    def leading_term(self, order: MonomialOrder | None = None):
        """(alpha, coefficient) of the largest monomial; None for zero."""
        if not self.terms:
            return None
        key = (order or self.ring.order).key
        alpha = max(self.terms, key=key)
        return alpha, self.terms[alpha]

    def sorted_terms(self, order: MonomialOrder | None = None):
        key = (order or self.ring.order).key
        return [(a, self.terms[a]) for a in sorted(self.terms, key=key, reverse=True)]

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring.compatible(other.ring) and self.terms == other.terms

    __hash__ = None

    # --- ring operations ----------------------------------------------

    def _binop(self, other: "Polynomial", sign: int) -> "Polynomial":
        self.ring.require_same(other.ring)
        p = self.ring.p
        acc = dict(self.terms)
        for a, c in other.terms.items():
            v = (acc.get(a, 0) + sign * c) % p
            if v:
                acc[a] = v
            else:
                acc.pop(a, None)
        return Polynomial(self.ring, acc)

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        return self._binop(other, 1)

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        return self._binop(other, -1)

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {a: p - c for a, c in self.terms.items()})

    def scale(self, c: int) -> "Polynomial":
        c %= self.ring.p
        if c == 0:
            return self.ring.zero()
        if c == 1:
            return self
        p = self.ring.p
        return Polynomial(self.ring, {a: c * v % p for a, v in self.terms.items()})

    def mul_monomial(self, alpha: Mi, c: int = 1) -> "Polynomial":
        c %= self.ring.p
        if c == 0 or not self.terms:
            return self.ring.zero()
        lim = self.ring.limits.max_exponent
        p = self.ring.p
        out = {}
        for a, v in self.terms.items():
            b = tuple(x + y for x, y in zip(a, alpha))
            if any(x > lim for x in b):
                raise ResourceLimit(f"exponent exceeds cap {lim}")
            out[b] = c * v % p
        return Polynomial(self.ring, out)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self.ring.require_same(other.ring)
        if not self.terms or not other.terms:
            return self.ring.zero()
        lim = self.ring.limits
        # the extreme term pair is always formed before any cancellation,
        # so the per-coordinate maxima give an exact overflow preflight
        for i in range(self.ring.d):
            hi = max(a[i] for a in self.terms) + max(b[i] for b in other.terms)
            if hi > lim.max_exponent:
                raise ResourceLimit(f"exponent exceeds cap {lim.max_exponent}")
        if len(self.terms) * len(other.terms) > 10 * lim.max_terms:
            raise ResourceLimit(f"product would exceed term cap {lim.max_terms}")
        p = self.ring.p
        f, g = self.terms, other.terms
        if len(f) > len(g):
            f, g = g, f
        acc: dict[Mi, int] = {}
        for a, c in f.items():
            for b, v in g.items():
                k = tuple(x + y for x, y in zip(a, b))
                w = (acc.get(k, 0) + c * v) % p
                if w:
                    acc[k] = w
                else:
                    acc.pop(k, None)
        if len(acc) > lim.max_terms:
            raise ResourceLimit(f"term count {len(acc)} exceeds cap {lim.max_terms}")
        return Polynomial(self.ring, acc)

    __rmul__ = __mul__

    def __pow__(self, m: int) -> "Polynomial":
        if not isinstance(m, int) or m < 0:
            raise InvalidInput(f"polynomial power must be a natural number, got {m!r}")
        result = self.ring.one()
        base = self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    # --- Frobenius ----------------------------------------------------

    def frobenius(self, n: int) -> "Polynomial":
        """f^(p^n): every exponent scales by p^n, coefficients are fixed."""
        if n < 0:
            raise InvalidInput("Frobenius level must be >= 0")
        if n == 0 or not self.terms:
            return self
        q = self.ring.p ** n
        lim = self.ring.limits.max_exponent
        out = {}
        for a, c in self.terms.items():
            b = tuple(x * q for x in a)
            if any(x > lim for x in b):
                raise ResourceLimit(f"exponent exceeds cap {lim}")
            out[b] = c
        return Polynomial(self.ring, out)

    def pn_root(self, n: int) -> "Polynomial":
        """Inverse of frobenius(n); every exponent must be divisible by p^n."""
        if n < 0:
            raise InvalidInput("root level must be >= 0")
        if n == 0 or not self.terms:
            return self
        q = self.ring.p ** n
        out = {}
        for a, c in self.terms.items():
            if any(x % q for x in a):
                raise NotAPnPower(f"exponent {a} not divisible by {q}")
            out[tuple(x // q for x in a)] = c
        return Polynomial(self.ring, out)

    # --- presentation ---------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for alpha, c in self.sorted_terms():
            factors = []
            if c != 1 or not any(alpha):
                factors.append(str(c))
            for i, e in enumerate(alpha):
                if e == 1:
                    factors.append(self.ring.var_name(i))
                elif e > 1:
                    factors.append(f"{self.ring.var_name(i)}^{e}")
            bits.append("*".join(factors))
        return " + ".join(bits)

    def __repr__(self):
        return f"<{self} over F_{self.ring.p}[{self.ring.d} vars]>"

    def to_json(self) -> dict:
        return {
            "p": self.ring.p,
            "d": self.ring.d,
            "terms": [{"e": list(a), "c": c} for a, c in self.sorted_terms()],
        }


# --- text parsing -------------------------------------------------------
#
# grammar: poly  := [sign] term (sign term)*
#          term  := coeff | [coeff '*'] factor ('*' factor)*
#          factor:= var ['^' natural]
#          var   := 'x' index      (1-based, index <= d)
# whitespace is ignored; signs are term separators, not coefficient parts.


def _parse(ring: PolyRing, text: str):
    if not isinstance(text, str):
        raise ParseError("polynomial source must be a string")
    pos = 0
    n = len(text)

    def skip_ws(i):
        while i < n and text[i].isspace():
            i += 1
        return i

    def read_nat(i):
        j = i
        while j < n and text[j].isdigit():
            j += 1
        if j == i:
            raise ParseError("expected a number", i)
        return int(text[i:j]), j

    terms = []
    pos = skip_ws(pos)
    if pos == n:
        raise ParseError("empty polynomial", 0)
    sign = 1
    if text[pos] in "+-":
        sign = -1 if text[pos] == "-" else 1
        pos = skip_ws(pos + 1)
    def read_factors(i, exps):
        while True:
            if i >= n or text[i] != "x":
                raise ParseError("expected a variable like x1", i)
            idx, i = read_nat(i + 1)
            if not 1 <= idx <= ring.d:
                raise ParseError(f"unknown variable x{idx} (d={ring.d})", i)
            e = 1
            i = skip_ws(i)
            if i < n and text[i] == "^":
                e, i = read_nat(skip_ws(i + 1))
                i = skip_ws(i)
            exps[idx - 1] += e
            if i < n and text[i] == "*":
                i = skip_ws(i + 1)
                continue
            return i

    while True:
        coeff = 1
        exps = [0] * ring.d
        if pos < n and text[pos].isdigit():
            coeff, pos = read_nat(pos)
            pos = skip_ws(pos)
            if pos < n and text[pos] == "*":
                pos = read_factors(skip_ws(pos + 1), exps)
        elif pos < n and text[pos] == "x":
            pos = read_factors(pos, exps)
        else:
            raise ParseError("expected a term", pos)
        terms.append((tuple(exps), sign * coeff))
        pos = skip_ws(pos)
        if pos == n:
            break
        if text[pos] not in "+-":
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        sign = -1 if text[pos] == "-" else 1
        pos = skip_ws(pos + 1)
        if pos == n:
            raise ParseError("dangling sign", pos)
    return ring.from_terms(terms)

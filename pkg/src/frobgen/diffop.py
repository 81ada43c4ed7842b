"""Divided-power differential operators in right normal form.

An operator is a finite sum of terms c * x^alpha * D_beta, where D_beta is
the product over i of the divided powers (1/beta_i!) d^beta_i/dx_i^beta_i.
Divided powers act on monomials through binomials mod p,
D_beta(x^gamma) = C(gamma, beta) * x^(gamma - beta), which keeps them
well defined in characteristic p.  The representation stores the
(alpha, beta) -> coefficient map, so right normal form (multiplications
left of derivations) holds structurally; composition rewrites through the
divided-power Leibniz rule and lands back in the same shape.
"""

from __future__ import annotations

import random

from .errors import ContextMismatch, InternalError, InvalidInput, ZeroInput
from .frobdecomp import decompose
from .poly import Mi, Polynomial, PolyRing


class DiffOp:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        # terms: (alpha, beta) -> coefficient in [1, p), already normalized
        self.ring = ring
        self.terms = terms

    # --- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, ring: PolyRing) -> "DiffOp":
        return cls(ring, {})

    @classmethod
    def identity(cls, ring: PolyRing) -> "DiffOp":
        z = (0,) * ring.d
        return cls(ring, {(z, z): 1})

    @classmethod
    def divided_power(cls, ring: PolyRing, beta: Mi, c: int = 1) -> "DiffOp":
        beta = tuple(beta)
        if len(beta) != ring.d or any(b < 0 for b in beta):
            raise InvalidInput(f"bad derivation index {beta!r} for d={ring.d}")
        c %= ring.p
        if c == 0:
            return cls.zero(ring)
        return cls(ring, {((0,) * ring.d, beta): c})

    @classmethod
    def multiplication(cls, ring: PolyRing, h: Polynomial) -> "DiffOp":
        ring.require_same(h.ring)
        z = (0,) * ring.d
        return cls(ring, {(a, z): c for a, c in h.terms.items()})

    @classmethod
    def from_json(cls, ring: PolyRing, obj) -> "DiffOp":
        if obj.get("p") != ring.p or obj.get("d") != ring.d:
            raise ContextMismatch(
                f"operator JSON is for (p={obj.get('p')}, d={obj.get('d')}), "
                f"ring is (p={ring.p}, d={ring.d})"
            )
        terms = {}
        for t in obj["terms"]:
            key = (tuple(t["x"]), tuple(t["d"]))
            if any(len(v) != ring.d for v in key) or any(
                x < 0 for v in key for x in v
            ):
                raise InvalidInput(f"bad operator term indices {t!r} for d={ring.d}")
            c = t["c"] % ring.p
            if c:
                terms[key] = (terms.get(key, 0) + c) % ring.p
                if not terms[key]:
                    del terms[key]
        return cls(ring, terms)

    # --- basics -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.ring.compatible(other.ring) and self.terms == other.terms

    __hash__ = None

    def __add__(self, other: "DiffOp") -> "DiffOp":
        self.ring.require_same(other.ring)
        p = self.ring.p
        acc = dict(self.terms)
        for k, c in other.terms.items():
            v = (acc.get(k, 0) + c) % p
            if v:
                acc[k] = v
            else:
                acc.pop(k, None)
        return DiffOp(self.ring, acc)

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + other.scale(-1)

    def scale(self, c: int) -> "DiffOp":
        c %= self.ring.p
        if c == 0:
            return DiffOp.zero(self.ring)
        if c == 1:
            return self
        p = self.ring.p
        return DiffOp(self.ring, {k: c * v % p for k, v in self.terms.items()})

    def shift(self, gamma: Mi) -> "DiffOp":
        """Left-multiply by x^gamma; normal form is preserved as is."""
        if not any(gamma):
            return self
        return DiffOp(
            self.ring,
            {
                (tuple(a + g for a, g in zip(alpha, gamma)), beta): c
                for (alpha, beta), c in self.terms.items()
            },
        )

    def level(self) -> int:
        """Smallest n with every derivation index componentwise < p^n."""
        top = 0
        for (_, beta) in self.terms:
            m = max(beta) if beta else 0
            if m > top:
                top = m
        n = 0
        q = 1
        while q <= top:
            q *= self.ring.p
            n += 1
        return n

    # --- action and composition -------------------------------------------

    def apply(self, g: Polynomial) -> Polynomial:
        """Act on a polynomial; linear in both the operator and g."""
        self.ring.require_same(g.ring)
        p = self.ring.p
        by_beta: dict[Mi, list] = {}
        for (alpha, beta), c in self.terms.items():
            by_beta.setdefault(beta, []).append((alpha, c))
        acc: dict[Mi, int] = {}
        for beta, entries in by_beta.items():
            dg = derivative_terms(g, beta)
            if not dg:
                continue
            for alpha, c in entries:
                for gamma, v in dg.items():
                    k = tuple(x + y for x, y in zip(gamma, alpha))
                    w = (acc.get(k, 0) + c * v) % p
                    if w:
                        acc[k] = w
                    else:
                        acc.pop(k, None)
        return Polynomial(self.ring, acc)

    def compose(self, inner: "DiffOp") -> "DiffOp":
        """Operator product self o inner, rewritten into right normal form.

        Uses D_b o (x^a *) = sum_j C(a, j) x^(a-j) D_(b-j) per coordinate and
        D_a o D_b = C(a+b, a) D_(a+b) for the divided powers.
        """
        self.ring.require_same(inner.ring)
        p = self.ring.p
        binom = self.ring.field.multiindex_binom
        acc: dict = {}
        for (a2, b2), c2 in self.terms.items():
            for (a1, b1), c1 in inner.terms.items():
                base = c2 * c1 % p
                for j in _box(tuple(min(x, y) for x, y in zip(b2, a1))):
                    cj = binom(a1, j)
                    if not cj:
                        continue
                    beta = tuple(x - y + z for x, y, z in zip(b2, j, b1))
                    ck = binom(beta, b1)
                    if not ck:
                        continue
                    alpha = tuple(x + y - z for x, y, z in zip(a1, a2, j))
                    k = (alpha, beta)
                    w = (acc.get(k, 0) + base * cj * ck) % p
                    if w:
                        acc[k] = w
                    else:
                        acc.pop(k, None)
        return DiffOp(self.ring, acc)

    # --- presentation -------------------------------------------------------

    def sorted_terms(self):
        key = self.ring.order.key
        return sorted(
            self.terms.items(),
            key=lambda kv: (key(kv[0][1]), key(kv[0][0])),
            reverse=True,
        )

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for (alpha, beta), c in self.sorted_terms():
            factors = []
            if c != 1 or (not any(alpha) and not any(beta)):
                factors.append(str(c))
            for i, e in enumerate(alpha):
                if e == 1:
                    factors.append(self.ring.var_name(i))
                elif e > 1:
                    factors.append(f"{self.ring.var_name(i)}^{e}")
            if any(beta):
                factors.append("D" + str(tuple(beta)).replace(" ", ""))
            bits.append("*".join(factors))
        return " + ".join(bits)

    def __repr__(self):
        return f"<DiffOp {self} over F_{self.ring.p}>"

    def to_json(self) -> dict:
        return {
            "p": self.ring.p,
            "d": self.ring.d,
            "terms": [
                {"x": list(alpha), "d": list(beta), "c": c}
                for (alpha, beta), c in self.sorted_terms()
            ],
        }


def _box(top: Mi):
    """All tuples 0 <= j <= top componentwise."""
    if not top:
        yield ()
        return
    for head in range(top[0] + 1):
        for rest in _box(top[1:]):
            yield (head,) + rest


def derivative_terms(g: Polynomial, beta: Mi) -> dict:
    """Terms of D_beta(g) as a dict; shared by apply() and the verifier."""
    p = g.ring.p
    binom = g.ring.field.multiindex_binom
    out: dict[Mi, int] = {}
    for gamma, c in g.terms.items():
        if any(x < y for x, y in zip(gamma, beta)):
            continue
        b = binom(gamma, beta)
        if not b:
            continue
        k = tuple(x - y for x, y in zip(gamma, beta))
        w = (out.get(k, 0) + c * b) % p
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def witness_generators(f: Polynomial, n: int) -> dict:
    """Level-n operators hitting every digit of f: Q_alpha(f) = part_alpha^(p^n) * 1.

    Construction runs downward on the total degree of the digit index.
    The correction sum for beta ranges over every other digit gamma with
    beta <= gamma componentwise (equality in some coordinates included:
    D_beta(x^gamma) is nonzero exactly there), and rewrites D_beta(f) into
    the single wanted piece.  Every operator is verified by direct
    application before it is returned.
    """
    if f.is_zero():
        raise ZeroInput("witness operators require a nonzero polynomial")
    if n < 1:
        raise InvalidInput(f"witness level must be >= 1, got {n}")
    ring = f.ring
    p = ring.p
    binom = ring.field.multiindex_binom
    dec = decompose(f, n)
    parts = dec.parts
    keys = sorted(parts, key=lambda a: (-sum(a), ring.order.key(a)))
    above: dict[Mi, list] = {
        beta: [g for g in parts if g != beta and all(x <= y for x, y in zip(beta, g))]
        for beta in keys
    }
    targets = {a: parts[a].frobenius(n).terms for a in keys}
    dcache: dict[Mi, dict] = {}

    def df(beta: Mi) -> dict:
        hit = dcache.get(beta)
        if hit is None:
            hit = derivative_terms(f, beta)
            dcache[beta] = hit
        return hit

    zeros = (0,) * ring.d
    ops: dict[Mi, DiffOp] = {}
    for beta in keys:
        acc = {(zeros, beta): 1}
        for gamma in above[beta]:
            b = binom(gamma, beta)
            if not b:
                continue
            shift = tuple(x - y for x, y in zip(gamma, beta))
            for (a2, delta), c2 in ops[gamma].terms.items():
                k = (tuple(x + y for x, y in zip(a2, shift)), delta)
                w = (acc.get(k, 0) - b * c2) % p
                if w:
                    acc[k] = w
                else:
                    acc.pop(k, None)
        op = DiffOp(ring, acc)
        # verify by direct application, sharing the derivative cache
        got: dict[Mi, int] = {}
        for (alpha, delta), c in acc.items():
            for gamma, v in df(delta).items():
                k = tuple(x + y for x, y in zip(gamma, alpha))
                w = (got.get(k, 0) + c * v) % p
                if w:
                    got[k] = w
                else:
                    got.pop(k, None)
        if got != targets[beta]:
            raise InternalError(f"witness operator for digit {beta} failed verification")
        ops[beta] = op
    return ops


def commutes_with_pn(
    Q: DiffOp,
    h: Polynomial,
    n: int,
    probe_degree: int = 2,
    samples: int = 5,
    seed: int = 0,
) -> bool:
    """Check Q(h*g) == h*Q(g) on a battery of probe polynomials g.

    Sound for rejection only; h must be a p^n-th power and Q of level <= n
    for the identity to be guaranteed.
    """
    ring = Q.ring
    ring.require_same(h.ring)
    q = ring.p ** n
    if any(x % q for a in h.terms for x in a):
        raise InvalidInput(f"multiplier exponents must be divisible by p^{n}")
    if Q.level() > n:
        raise InvalidInput(f"operator level {Q.level()} exceeds {n}")
    probes = [
        ring.monomial(m)
        for m in _monomials_upto(ring.d, probe_degree)
    ]
    rng = random.Random(seed)
    for _ in range(samples):
        terms = []
        for m in _monomials_upto(ring.d, probe_degree + 1):
            c = rng.randrange(ring.p)
            if c:
                terms.append((m, c))
        probes.append(ring.from_terms(terms))
    for g in probes:
        if Q.apply(h * g) != h * Q.apply(g):
            return False
    return True


def _monomials_upto(d: int, bound: int):
    if d == 1:
        return [(k,) for k in range(bound + 1)]
    out = []
    for k in range(bound + 1):
        for rest in _monomials_upto(d - 1, bound - k):
            out.append((k,) + rest)
    return out

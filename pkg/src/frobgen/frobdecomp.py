"""Base-x^(p^n) digit decomposition of polynomials and the derived ideals.

Writing every exponent as p^n * quotient + remainder splits f uniquely into
f = sum over alpha of (root_alpha)^(p^n) * x^alpha with alpha < p^n
componentwise.  The stored parts are the roots (coefficients are fixed by
Frobenius over F_p, so taking the root only divides exponents); the two
ideals derived from a power of f drive the whole descent construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidInput, ZeroInput
from .poly import Mi, Polynomial, PolyRing


@dataclass
class PnDecomposition:
    ring: PolyRing
    n: int
    parts: dict  # Mi -> Polynomial (the root polynomials, never zero)

    def sorted_keys(self):
        return sorted(self.parts, key=self.ring.order.key)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "parts": [
                {"alpha": list(a), "root": self.parts[a].to_json()}
                for a in self.sorted_keys()
            ],
        }


@dataclass
class Ideal:
    """A finite generator list; order is part of the value (certificates)."""

    ring: PolyRing
    generators: tuple
    _gb_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.generators = tuple(self.generators)
        if not self.generators:
            raise ZeroInput("ideal needs at least one generator")
        for g in self.generators:
            if not isinstance(g, Polynomial) or g.is_zero():
                raise ZeroInput("ideal generators must be nonzero polynomials")
            self.ring.require_same(g.ring)

    def __eq__(self, other):
        # literal generator-list identity; use groebner.ideal_equal for the
        # mathematical question
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring.compatible(other.ring) and self.generators == other.generators

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


def decompose(f: Polynomial, n: int) -> PnDecomposition:
    """Split f by componentwise Euclidean division of exponents by p^n."""
    if n < 1:
        raise InvalidInput(f"decomposition level must be >= 1, got {n}")
    q = f.ring.p ** n
    buckets: dict[Mi, dict] = {}
    for gamma, c in f.terms.items():
        rem = tuple(x % q for x in gamma)
        quo = tuple(x // q for x in gamma)
        buckets.setdefault(rem, {})[quo] = c  # gamma <-> (quo, rem) is bijective
    parts = {a: Polynomial(f.ring, t) for a, t in buckets.items()}
    return PnDecomposition(f.ring, n, parts)


def reconstruct(dec: PnDecomposition) -> Polynomial:
    """Inverse of decompose: sum of root^(p^n) * x^alpha over all parts."""
    out = dec.ring.zero()
    for alpha, root in dec.parts.items():
        out = out + root.frobenius(dec.n).mul_monomial(alpha)
    return out


def _nonzero(f: Polynomial) -> Polynomial:
    if f.is_zero():
        raise ZeroInput("the zero polynomial has no decomposition ideals")
    return f


def ideal_I(f: Polynomial, n: int) -> Ideal:
    """Ideal generated by the root polynomials of the level-n decomposition."""
    dec = decompose(_nonzero(f), n)
    return Ideal(f.ring, tuple(dec.parts[a] for a in dec.sorted_keys()))


def ideal_J(f: Polynomial, n: int) -> Ideal:
    """Ideal generated by the p^n-th powers of the same roots."""
    dec = decompose(_nonzero(f), n)
    return Ideal(f.ring, tuple(dec.parts[a].frobenius(n) for a in dec.sorted_keys()))


def frobenius_power(ideal: Ideal, m: int) -> Ideal:
    """The ideal generated by the p^m-th powers of the given generators."""
    return Ideal(ideal.ring, tuple(g.frobenius(m) for g in ideal.generators))

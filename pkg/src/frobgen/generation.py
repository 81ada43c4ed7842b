"""End-to-end construction of operators that map 1/f to prescribed powers.

The pipeline: find the first repeat of the descending root-ideal chain,
express f^(p^s - p) inside the span of the level-s digits of f^(p^s - 1)
with explicit cofactors, pair each cofactor with a digit-extraction
operator, and assemble Q = sum (h_alpha *) o Q_alpha.  The single exact
identity Q(f^(p^s - 1)) = f^(p^s - p) then transports to the localization:
Q(1/f) = 1/f^p, because level-s operators commute with p^s-th powers.

Verification is mandatory: every certificate returned here has had all of
its transcript checks executed; a failure raises InternalError instead of
returning quietly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chain import stabilization
from .diffop import DiffOp, witness_generators
from .errors import (
    InternalError,
    InvalidInput,
    UnsupportedPrime,
    ZeroInput,
)
from .frobdecomp import Ideal, decompose, ideal_J
from .groebner import membership
from .poly import Limits, Polynomial, PolyRing


@dataclass
class LocalizationElement:
    """g / f^(p^t): denominators are always p-power exponents of f."""

    f: Polynomial
    numerator: Polynomial
    level: int

    def __post_init__(self):
        if self.f.is_zero():
            raise ZeroInput("cannot localize at zero")
        self.f.ring.require_same(self.numerator.ring)
        if self.level < 0:
            raise InvalidInput("denominator level must be >= 0")

    def lift(self, t: int) -> "LocalizationElement":
        """Rewrite with denominator f^(p^t) for t >= the current level."""
        if t < self.level:
            raise InvalidInput(f"cannot lower level {self.level} to {t}")
        if t == self.level:
            return self
        p = self.f.ring.p
        bump = self.f ** (p**t - p**self.level)
        return LocalizationElement(self.f, self.numerator * bump, t)

    def __eq__(self, other):
        if not isinstance(other, LocalizationElement):
            return NotImplemented
        if self.f != other.f:
            return False
        # cross-multiplication; faithful because the ring is a domain
        return self.numerator * other.f.frobenius(other.level) == (
            other.numerator * self.f.frobenius(self.level)
        )

    __hash__ = None

    def __str__(self):
        return f"({self.numerator}) / ({self.f})^{self.f.ring.p}^{self.level}"

    def to_json(self) -> dict:
        return {
            "f": self.f.to_json(),
            "numerator": self.numerator.to_json(),
            "level": self.level,
        }


def one_over(f: Polynomial) -> LocalizationElement:
    """The element 1/f."""
    return LocalizationElement(f, f.ring.one(), 0)


def inverse_p_power(f: Polynomial, e: int) -> LocalizationElement:
    """The element 1/f^(p^e)."""
    return LocalizationElement(f, f.ring.one(), e)


def inverse_power(f: Polynomial, k: int) -> LocalizationElement:
    """The element 1/f^k, lifted to the least level with p^e >= k."""
    e = _least_level(f.ring.p, k)
    return LocalizationElement(f, f ** (f.ring.p**e - k), e)


def _least_level(p: int, k: int) -> int:
    if k < 1:
        raise InvalidInput(f"power must be >= 1, got {k}")
    e = 0
    q = 1
    while q < k:
        q *= p
        e += 1
    return e


class FactoredOperator:
    """Sum of (h_alpha *) o Q_alpha kept unexpanded; applies like a DiffOp."""

    __slots__ = ("ring", "parts")

    def __init__(self, ring: PolyRing, parts):
        # parts: list of (alpha, cofactor polynomial, DiffOp)
        self.ring = ring
        self.parts = list(parts)

    def apply(self, g: Polynomial) -> Polynomial:
        out = self.ring.zero()
        for _, h, op in self.parts:
            out = out + h * op.apply(g)
        return out

    def level(self) -> int:
        return max((op.level() for _, _, op in self.parts), default=0)

    def expand(self) -> DiffOp:
        out = DiffOp.zero(self.ring)
        for _, h, op in self.parts:
            for gamma, c in h.terms.items():
                out = out + op.shift(gamma).scale(c)
        return out

    def to_json(self) -> dict:
        return {
            "factored": [
                {"alpha": list(alpha), "h": h.to_json(), "op": op.to_json()}
                for alpha, h, op in self.parts
            ]
        }

    @classmethod
    def from_json(cls, ring: PolyRing, obj) -> "FactoredOperator":
        parts = []
        for entry in obj["factored"]:
            alpha = tuple(entry["alpha"])
            if len(alpha) != ring.d or any(a < 0 for a in alpha):
                raise InvalidInput(f"bad digit index {alpha!r} for d={ring.d}")
            parts.append(
                (alpha, ring.from_json(entry["h"]), DiffOp.from_json(ring, entry["op"]))
            )
        return cls(ring, parts)


def apply_to_localization(Q, u: LocalizationElement) -> LocalizationElement:
    """The module action: lift u until Q commutes with the denominator."""
    t = max(u.level, Q.level())
    lifted = u.lift(t)
    return LocalizationElement(u.f, Q.apply(lifted.numerator), t)


@dataclass
class GenerationCertificate:
    f: Polynomial
    p: int
    s: int
    stable_ideal: Ideal
    cofactors: list  # [(alpha, h_alpha)], only nonzero cofactors
    operator: object  # FactoredOperator or DiffOp
    verified: bool
    transcript: list  # [{"check": name, "ok": bool}, ...]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "f": self.f.to_json(),
            "s": self.s,
            "stable_ideal": [g.to_json() for g in self.stable_ideal.generators],
            "cofactors": [
                {"alpha": list(a), "h": h.to_json()} for a, h in self.cofactors
            ],
            "operator": self.operator.to_json(),
            "verified": self.verified,
            "transcript": list(self.transcript),
        }


# names of the re-runnable certificate checks; `verify` refuses
# certificates whose transcript omits any of these
CORE_CHECKS = (
    "cofactor_identity",
    "operator_level",
    "Q_on_f_power",
    "localization_action",
)


def _certificate_checks(f, s, cofactors, operator, with_witness_actions):
    """Build name -> thunk for every re-runnable transcript check."""
    ring = f.ring
    p = ring.p
    q = p**s
    fbig = f ** (q - 1)
    target = f ** (q - p)
    dec = decompose(fbig, s)

    def cofactor_identity():
        acc = ring.zero()
        for alpha, h in cofactors:
            part = dec.parts.get(alpha)
            if part is None:
                return False
            acc = acc + h * part.frobenius(s)
        return acc == target

    def witness_actions():
        for alpha, _, op in operator.parts:
            part = dec.parts.get(alpha)
            if part is None or op.apply(fbig) != part.frobenius(s):
                return False
        return True

    def operator_level():
        return operator.level() <= s

    def q_on_f_power():
        return operator.apply(fbig) == target

    def localization_action():
        return apply_to_localization(operator, one_over(f)) == inverse_power(f, p)

    checks = {
        "cofactor_identity": cofactor_identity,
        "operator_level": operator_level,
        "Q_on_f_power": q_on_f_power,
        "localization_action": localization_action,
    }
    if with_witness_actions:
        checks["witness_actions"] = witness_actions
    return checks


def frobenius_descent(
    f: Polynomial, max_level: int = 5, expand: bool = False
) -> GenerationCertificate:
    """Certificate for Q with Q(f^(p^s - 1)) = f^(p^s - p), hence Q(1/f) = 1/f^p."""
    if f.is_zero():
        raise ZeroInput("cannot invert the zero polynomial")
    ring = f.ring
    p = ring.p
    if f.degree() == 0:
        # nonzero constants are already invertible: c^(p-1) = 1
        s = 1
        stable = Ideal(ring, (ring.one(),))
    else:
        chain = stabilization(f, max_level)
        s = chain.s
        stable = chain.stable_ideal

    q = p**s
    fbig = f ** (q - 1)
    target = f ** (q - p)
    dec = decompose(fbig, s)
    keys = dec.sorted_keys()
    J = ideal_J(fbig, s)
    cof = membership(target, J)
    if cof is None:
        raise InternalError(
            "f^(p^s - p) escaped the digit ideal of f^(p^s - 1); "
            "this contradicts the construction"
        )
    wits = witness_generators(fbig, s)
    pairs = [
        (alpha, h, wits[alpha])
        for alpha, h in zip(keys, cof)
        if not h.is_zero()
    ]
    operator = FactoredOperator(ring, pairs)
    final_op = operator.expand() if expand else operator

    checks = _certificate_checks(
        f, s, [(a, h) for a, h, _ in pairs], final_op, with_witness_actions=not expand
    )
    transcript = [{"check": name, "ok": bool(fn())} for name, fn in checks.items()]
    verified = all(entry["ok"] for entry in transcript)
    if not verified:
        failed = [e["check"] for e in transcript if not e["ok"]]
        raise InternalError(f"certificate checks failed: {', '.join(failed)}")
    return GenerationCertificate(
        f=f,
        p=p,
        s=s,
        stable_ideal=stable,
        cofactors=[(a, h) for a, h, _ in pairs],
        operator=final_op,
        verified=verified,
        transcript=transcript,
    )


def power_witness(f: Polynomial, e: int, max_level: int = 5) -> DiffOp:
    """Operator mapping 1/f to 1/f^(p^e), by stacking single descents."""
    if f.is_zero():
        raise ZeroInput("cannot invert the zero polynomial")
    if e < 1:
        raise InvalidInput(f"power level must be >= 1, got {e}")
    op = None
    for j in range(1, e + 1):
        step = frobenius_descent(f.frobenius(j - 1), max_level).operator.expand()
        op = step if op is None else step.compose(op)
    got = apply_to_localization(op, one_over(f))
    if got != inverse_p_power(f, e):
        raise InternalError("stacked descent operator failed verification")
    return op


def generator_witness(f: Polynomial, k: int, max_level: int = 5) -> DiffOp:
    """Operator mapping 1/f to 1/f^k for any k >= 1."""
    if f.is_zero():
        raise ZeroInput("cannot invert the zero polynomial")
    if k < 1:
        raise InvalidInput(f"target power must be >= 1, got {k}")
    ring = f.ring
    e = _least_level(ring.p, k)
    if e == 0:
        op = DiffOp.identity(ring)
    else:
        base = power_witness(f, e, max_level)
        head = DiffOp.multiplication(ring, f ** (ring.p**e - k))
        op = head.compose(base)
    got = apply_to_localization(op, one_over(f))
    if got != inverse_power(f, k):
        raise InternalError("generator operator failed verification")
    return op


def example_quadric_witness(ring: PolyRing):
    """Single-term operator for the sum of four squares, odd p.

    Returns (alpha, a, Q) where a*x^alpha is the matching term of f^(p-1)
    and Q = a^(-1) * D_alpha maps 1/f to 1/f^p.
    """
    if ring.d != 4:
        raise InvalidInput("the quadric shortcut needs exactly 4 variables")
    p = ring.p
    if p == 2:
        raise UnsupportedPrime(
            "the closed-form term needs an odd prime; use the general pipeline for p=2"
        )
    if (p - 1) % 4 == 0:
        half = (p - 1) // 2
        alpha = (half, half, half, half)
        ks = ((p - 1) // 4,) * 4
    else:
        up, down = (p + 1) // 2, (p - 3) // 2
        alpha = (up, up, down, down)
        ks = ((p + 1) // 4, (p + 1) // 4, (p - 3) // 4, (p - 3) // 4)
    a = ring.field.multinomial(p - 1, ks)
    if a == 0:
        raise InternalError("the closed-form coefficient vanished mod p")
    f = ring.from_terms(
        [((2, 0, 0, 0), 1), ((0, 2, 0, 0), 1), ((0, 0, 2, 0), 1), ((0, 0, 0, 2), 1)]
    )
    Q = DiffOp.divided_power(ring, alpha, ring.field.inv(a))
    if Q.apply(f ** (p - 1)) != ring.one():
        raise InternalError("quadric operator failed the direct check")
    if apply_to_localization(Q, one_over(f)) != inverse_p_power(f, 1):
        raise InternalError("quadric operator failed on the localization")
    return alpha, a, Q


# --- certificate re-verification (CLI `verify`) ---------------------------


def load_certificate(data, limits=None) -> GenerationCertificate:
    """Rebuild an in-memory certificate from its JSON form (no checks)."""
    fj = data["f"]
    ring = PolyRing(data["p"], fj["d"], limits=limits or Limits())
    f = ring.from_json(fj)
    cofactors = [
        (tuple(e["alpha"]), ring.from_json(e["h"])) for e in data["cofactors"]
    ]
    opj = data["operator"]
    if "factored" in opj:
        operator = FactoredOperator.from_json(ring, opj)
    else:
        operator = DiffOp.from_json(ring, opj)
    stable = Ideal(ring, tuple(ring.from_json(g) for g in data["stable_ideal"]))
    return GenerationCertificate(
        f=f,
        p=ring.p,
        s=data["s"],
        stable_ideal=stable,
        cofactors=cofactors,
        operator=operator,
        verified=bool(data.get("verified", False)),
        transcript=list(data.get("transcript", [])),
    )


def verify_certificate(data, limits=None):
    """Re-run every transcript check from the serialized data alone.

    Stored booleans are ignored; the stabilization level s is taken from
    the certificate and not recomputed.  Returns (verified, transcript).
    """
    cert = load_certificate(data, limits=limits)
    with_witness = isinstance(cert.operator, FactoredOperator)
    checks = _certificate_checks(
        cert.f, cert.s, cert.cofactors, cert.operator, with_witness_actions=with_witness
    )
    names = [entry.get("check") for entry in cert.transcript]
    transcript = []
    ok_all = True
    missing = [name for name in CORE_CHECKS if name not in names]
    if missing:
        transcript.append(
            {"check": "transcript_complete", "ok": False, "missing": missing}
        )
        ok_all = False
    for name in names:
        fn = checks.get(name)
        ok = bool(fn()) if fn is not None else False
        transcript.append({"check": name, "ok": ok})
        ok_all = ok_all and ok
    return ok_all, transcript

"""The descending chain of root ideals of f^(p^n - 1) and its first repeat.

Level n of the chain is the root ideal of the level-n decomposition of
f^(p^n - 1).  Every generator has degree strictly below deg f, so the
degree-bounded slices live in one finite-dimensional space and the chain
must repeat; the first n >= 2 with level n-1 equal to level n is the
stabilization level consumed by the descent construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    ConstantInput,
    DegreeBoundViolation,
    InternalError,
    LevelExceeded,
    ResourceLimit,
    ZeroInput,
)
from .frobdecomp import Ideal, ideal_I
from .groebner import groebner_basis, membership
from .poly import Polynomial


@dataclass
class ChainLevel:
    n: int
    ideal: Ideal
    basis: tuple  # reduced Groebner basis of the level ideal
    we_dim: int


@dataclass
class ChainResult:
    f: Polynomial
    s: int  # first n >= 2 with level n-1 == level n
    levels: list
    stable_ideal: Ideal

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "levels": [
                {
                    "n": lv.n,
                    "generators": [g.to_json() for g in lv.ideal.generators],
                    "we_dim": lv.we_dim,
                }
                for lv in self.levels
            ],
        }


def _check_input(f: Polynomial):
    if f.is_zero():
        raise ZeroInput("the chain is defined for nonzero polynomials")
    if f.degree() == 0:
        raise ConstantInput("the chain is degenerate for nonzero constants")


def chain_ideal(f: Polynomial, n: int) -> Ideal:
    """Level-n member: root ideal of the decomposition of f^(p^n - 1)."""
    _check_input(f)
    q = f.ring.p ** n
    if q * f.degree() > f.ring.limits.max_exponent:
        raise ResourceLimit(
            f"p^{n} * deg f = {q * f.degree()} exceeds the exponent cap "
            f"{f.ring.limits.max_exponent}"
        )
    return ideal_I(f ** (q - 1), n)


def _monomials_below(d: int, bound: int):
    """All exponent tuples of total degree < bound, d variables."""
    if d == 1:
        return [(k,) for k in range(bound)]
    out = []
    for k in range(bound):
        for rest in _monomials_below(d - 1, bound - k):
            out.append((k,) + rest)
    return out


def we_dimension(ideal: Ideal, e: int) -> int:
    """Dimension of the degree-< e slice of the ideal, by row reduction."""
    ring = ideal.ring
    p = ring.p
    cols = sorted(_monomials_below(ring.d, e), key=ring.order.key, reverse=True)
    index = {m: i for i, m in enumerate(cols)}
    rows = []
    for g in ideal.generators:
        dg = g.degree()
        if dg >= e:
            raise DegreeBoundViolation(
                f"generator of degree {dg} is outside the degree-< {e} space"
            )
        for m in _monomials_below(ring.d, e - dg):
            prod = g.mul_monomial(m)
            row = [0] * len(cols)
            for a, c in prod.terms.items():
                row[index[a]] = c
            rows.append(row)
    # Gaussian elimination over F_p
    rank = 0
    ncols = len(cols)
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                c = rows[r][col]
                rows[r] = [(a - c * b) % p for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def stabilization(f: Polynomial, max_level: int = 5) -> ChainResult:
    """Walk the chain until two consecutive levels coincide as ideals."""
    _check_input(f)
    if max_level < 2:
        raise LevelExceeded(max_level, "max_level must allow at least levels 1 and 2")
    e = f.degree()
    levels: list[ChainLevel] = []
    for n in range(1, max_level + 1):
        ideal = chain_ideal(f, n)
        for g in ideal.generators:
            if g.degree() >= e:
                raise InternalError(
                    f"chain generator of degree {g.degree()} >= deg f = {e}"
                )
        gb = groebner_basis(ideal)
        level = ChainLevel(n, ideal, gb.basis, we_dimension(ideal, e))
        if levels:
            prev = levels[-1]
            if level.we_dim > prev.we_dim:
                raise InternalError("chain diagnostics increased between levels")
            for g in ideal.generators:
                if membership(g, prev.ideal) is None:
                    raise InternalError(
                        f"level {n} generator escapes level {n - 1}: {g}"
                    )
            levels.append(level)
            if list(gb.basis) == list(prev.basis):
                return ChainResult(f, n, levels, prev.ideal)
        else:
            levels.append(level)
    counts = ", ".join(f"n={lv.n}: {len(lv.ideal.generators)} gens" for lv in levels)
    raise LevelExceeded(
        max_level,
        f"no consecutive equal ideals up to level {max_level} ({counts})",
        levels=levels,
    )

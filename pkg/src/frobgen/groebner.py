"""Buchberger's algorithm over F_p with cofactor tracking.

Everything here is exact and deterministic: multivariate division always
reduces the order-largest reducible term against the first applicable
divisor, pair selection follows the normal strategy (smallest lcm first),
and the returned basis is the reduced Groebner basis, which is unique for
a fixed monomial order.  Each basis element carries its expression in the
original generators, so ideal membership comes back with cofactors that
re-expand to the query polynomial; the re-expansion is checked on every
call before anything is returned.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import InternalError, ZeroInput
from .frobdecomp import Ideal
from .poly import Mi, MonomialOrder, Polynomial, PolyRing


def _divides(a: Mi, b: Mi) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Mi, b: Mi) -> Mi:
    return tuple(max(x, y) for x, y in zip(a, b))


def divide(f: Polynomial, divisors, order: MonomialOrder | None = None):
    """Multivariate division: f = sum(q_i * d_i) + r.

    No term of the remainder is divisible by any divisor's leading term.
    Returns (remainder, quotients).
    """
    ring = f.ring
    order = order or ring.order
    p = ring.p
    divisors = list(divisors)
    lts = []
    for g in divisors:
        if g.is_zero():
            raise ZeroInput("division by the zero polynomial")
        lts.append(g.leading_term(order))
    quots = [dict() for _ in divisors]
    rem: dict[Mi, int] = {}
    work = dict(f.terms)
    heap = [(order.heap_key(a), a) for a in work]
    heapq.heapify(heap)

    def push(alpha):
        heapq.heappush(heap, (order.heap_key(alpha), alpha))

    while heap:
        _, alpha = heapq.heappop(heap)
        c = work.get(alpha)
        if not c:
            continue  # stale heap entry
        for i, (lt, lc) in enumerate(lts):
            if _divides(lt, alpha):
                shift = tuple(x - y for x, y in zip(alpha, lt))
                coef = c * pow(lc, p - 2, p) % p
                q = quots[i]
                q[shift] = (q.get(shift, 0) + coef) % p
                if not q[shift]:
                    del q[shift]
                for b, v in divisors[i].terms.items():
                    k = tuple(x + y for x, y in zip(shift, b))
                    w = (work.get(k, 0) - coef * v) % p
                    if w:
                        if k not in work:
                            push(k)
                        work[k] = w
                    else:
                        work.pop(k, None)
                break
        else:
            rem[alpha] = c
            del work[alpha]
    return Polynomial(ring, rem), [Polynomial(ring, q) for q in quots]


@dataclass
class GroebnerBasis:
    ring: PolyRing
    order: MonomialOrder
    basis: tuple  # reduced, monic, sorted descending by leading monomial
    transform: tuple  # transform[i][j]: basis[i] = sum_j transform[i][j]*gen[j]
    generators: tuple  # the original generators

    def contains_one(self) -> bool:
        return len(self.basis) == 1 and self.basis[0] == self.ring.one()


def _spair_key(order, lts, i, j):
    return (order.key(_lcm(lts[i], lts[j])), j, i)


def buchberger(ideal: Ideal, order: MonomialOrder | None = None) -> GroebnerBasis:
    """Reduced Groebner basis with a transform matrix over the generators."""
    ring = ideal.ring
    order = order or ring.order
    p = ring.p
    gens = list(ideal.generators)
    if not gens:
        raise ZeroInput("cannot compute a basis of the zero ideal")

    basis: list[Polynomial] = []
    rows: list[list[Polynomial]] = []  # rows[i][j] over the original generators
    lts: list[Mi] = []
    pairs: set[tuple[int, int]] = set()

    def add_element(g: Polynomial, row: list[Polynomial]):
        # make monic, install, and refresh the pair set (Gebauer-Moller)
        lt, lc = g.leading_term(order)
        if lc != 1:
            s = pow(lc, p - 2, p)
            g = g.scale(s)
            row = [h.scale(s) for h in row]
        t = len(basis)
        basis.append(g)
        rows.append(row)
        lts.append(lt)

        new = []
        for i in range(t):
            new.append((i, t))
        # drop new pairs whose lcm is a proper multiple of another new lcm;
        # among equal lcms keep the first
        lcms = {pair: _lcm(lts[pair[0]], lt) for pair in new}
        kept = []
        for pair in new:
            m = lcms[pair]
            redundant = False
            for other in kept:
                if _divides(lcms[other], m):
                    redundant = True
                    break
            if not redundant:
                for other in new:
                    if other is pair or other in kept:
                        continue
                    mo = lcms[other]
                    if _divides(mo, m) and mo != m:
                        redundant = True
                        break
            if not redundant:
                kept.append(pair)
        # product criterion: coprime leading terms reduce to zero
        kept = [
            pair
            for pair in kept
            if any(min(a, b) for a, b in zip(lts[pair[0]], lt))
        ]
        # chain criterion on the old pairs
        for (i, j) in list(pairs):
            m = _lcm(lts[i], lts[j])
            if (
                _divides(lt, m)
                and _lcm(lts[i], lt) != m
                and _lcm(lts[j], lt) != m
            ):
                pairs.discard((i, j))
        pairs.update(kept)

    unit = ring.one()
    for j, g in enumerate(gens):
        row = [unit if k == j else ring.zero() for k in range(len(gens))]
        rem, quots = divide(g, basis, order) if basis else (g, [])
        if rem.is_zero():
            continue
        for q, qrow in zip(quots, rows):
            if q.is_zero():
                continue
            row = [r - q * h for r, h in zip(row, qrow)]
        add_element(rem, row)
    if not basis:
        raise ZeroInput("all generators reduced to zero")

    while pairs:
        i, j = min(pairs, key=lambda pr: _spair_key(order, lts, pr[0], pr[1]))
        pairs.discard((i, j))
        m = _lcm(lts[i], lts[j])
        si = tuple(a - b for a, b in zip(m, lts[i]))
        sj = tuple(a - b for a, b in zip(m, lts[j]))
        s = basis[i].mul_monomial(si) - basis[j].mul_monomial(sj)
        if s.is_zero():
            continue
        rem, quots = divide(s, basis, order)
        if rem.is_zero():
            continue
        row = [
            a.mul_monomial(si) - b.mul_monomial(sj)
            for a, b in zip(rows[i], rows[j])
        ]
        for q, qrow in zip(quots, rows):
            if q.is_zero():
                continue
            row = [r - q * h for r, h in zip(row, qrow)]
        add_element(rem, row)

    # minimalize: keep elements whose leading term no earlier-kept one divides
    idx = sorted(range(len(basis)), key=lambda i: order.key(lts[i]))
    kept: list[int] = []
    for i in idx:
        if not any(_divides(lts[k], lts[i]) for k in kept):
            kept.append(i)
    basis = [basis[i] for i in kept]
    rows = [rows[i] for i in kept]

    # inter-reduce tails until stable
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            others = basis[:i] + basis[i + 1 :]
            rem, quots = divide(basis[i], others, order)
            if rem == basis[i]:
                continue
            if rem.is_zero():
                raise InternalError("minimal basis element reduced to zero")
            row = rows[i]
            other_rows = rows[:i] + rows[i + 1 :]
            for q, qrow in zip(quots, other_rows):
                if q.is_zero():
                    continue
                row = [r - q * h for r, h in zip(row, qrow)]
            lt, lc = rem.leading_term(order)
            if lc != 1:
                s = pow(lc, p - 2, p)
                rem = rem.scale(s)
                row = [h.scale(s) for h in row]
            basis[i] = rem
            rows[i] = row
            changed = True

    pairs_sorted = sorted(
        zip(basis, rows),
        key=lambda br: order.key(br[0].leading_term(order)[0]),
        reverse=True,
    )
    basis = [b for b, _ in pairs_sorted]
    rows = [r for _, r in pairs_sorted]

    for g, row in zip(basis, rows):
        acc = ring.zero()
        for h, gen in zip(row, gens):
            acc = acc + h * gen
        if acc != g:
            raise InternalError("transform row does not re-expand to its basis element")

    return GroebnerBasis(ring, order, tuple(basis), tuple(tuple(r) for r in rows), tuple(gens))


def groebner_basis(ideal: Ideal, order: MonomialOrder | None = None) -> GroebnerBasis:
    """buchberger() with a per-ideal cache keyed by the order name."""
    order = order or ideal.ring.order
    gb = ideal._gb_cache.get(order.name)
    if gb is None:
        gb = buchberger(ideal, order)
        ideal._gb_cache[order.name] = gb
    return gb


def membership(f: Polynomial, ideal: Ideal, order: MonomialOrder | None = None):
    """Cofactors h with f = sum(h_j * g_j) over the generators, or None."""
    ring = ideal.ring
    ring.require_same(f.ring)
    order = order or ring.order
    if f.is_zero():
        return [ring.zero() for _ in ideal.generators]
    gb = groebner_basis(ideal, order)
    rem, quots = divide(f, gb.basis, order)
    if not rem.is_zero():
        return None
    cof = [ring.zero() for _ in ideal.generators]
    for q, row in zip(quots, gb.transform):
        if q.is_zero():
            continue
        cof = [c + q * h for c, h in zip(cof, row)]
    acc = ring.zero()
    for h, g in zip(cof, ideal.generators):
        acc = acc + h * g
    if acc != f:
        raise InternalError("membership cofactors do not re-expand to the input")
    return cof


def ideal_equal(a: Ideal, b: Ideal, order: MonomialOrder | None = None) -> bool:
    """Reduced bases under the same order are identical iff the ideals match."""
    a.ring.require_same(b.ring)
    order = order or a.ring.order
    ga = groebner_basis(a, order)
    gb = groebner_basis(b, order)
    return list(ga.basis) == list(gb.basis)

"""Buchberger's algorithm, normal forms, initial ideals and intersections.

Orders with a ``MIN_FIRST`` directive are total and multiplicative but not
well-founded (``1 > b > b^2 > ...``).  They are accepted only for inputs that
are homogeneous for the ring's torus grading.  Every variable then has a
positive degree (or degree zero and a ``MAX_FIRST`` directive, which covers
the elimination variable), so each reduction stays inside one finite graded
piece and the usual theory goes through.  A step counter enforces this.
"""

from __future__ import annotations

import heapq
import threading
from functools import lru_cache
from typing import Iterable, Sequence

from .polyring import (
    Direction,
    Monomial,
    OrderSpec,
    Polynomial,
    PolyError,
    RingContext,
    initial_form,
    leading_monomial,
    mono_divides,
    mono_lcm,
)


class GroebnerError(PolyError):
    pass


class TerminationError(GroebnerError):
    """Input outside the class where reduction provably terminates."""


_GUARD_CHECK = 2000  # steps before the exact graded-piece bound is computed


def _needs_grading(order: OrderSpec) -> bool:
    return not order.well_founded


def _check_order_and_input(order: OrderSpec, polys: Iterable[Polynomial]) -> None:
    if not order.is_total:
        raise GroebnerError("a total order is required")
    if not _needs_grading(order):
        return
    ring = order.ring
    if ring.grading is None:
        raise TerminationError("order is not well-founded and ring has no grading")
    weights = ring._degree_weights()
    for idx, d in order.directives:
        if weights[idx] < 0 or (weights[idx] == 0 and d is not Direction.MAX_FIRST):
            raise TerminationError(
                f"variable {ring.names[idx]} has non-positive degree under a non-well-founded order"
            )
    for f in polys:
        if not f.is_homogeneous():
            raise TerminationError(f"input {f} is not homogeneous for the torus grading")


def _piece_size(ring: RingContext, degree: int, zero_caps: dict[int, int]) -> int:
    """Number of monomials of a given positive degree (zero-degree variables capped)."""
    weights = ring._degree_weights()
    pos = tuple(w for w in weights if w > 0)
    count = _coin_count(pos, degree)
    for idx, cap in zero_caps.items():
        count *= cap + 1
    return count


@lru_cache(maxsize=None)
def _coin_count(weights: tuple[int, ...], total: int) -> int:
    ways = [1] + [0] * total
    for w in weights:
        for s in range(w, total + 1):
            ways[s] += ways[s - w]
    return ways[total]


class _Basis:
    """Monic basis elements with precomputed leading monomials."""

    __slots__ = ("lms", "terms")

    def __init__(self) -> None:
        self.lms: list[Monomial] = []
        self.terms: list[dict[Monomial, int]] = []

    def add(self, lm: Monomial, terms: dict[Monomial, int]) -> None:
        self.lms.append(lm)
        self.terms.append(terms)

    def divisor(self, m: Monomial) -> int:
        for i, lm in enumerate(self.lms):
            if all(a <= b for a, b in zip(lm, m)):
                return i
        return -1


def _reduce(
    f: dict[Monomial, int],
    basis: _Basis,
    order: OrderSpec,
    p: int,
    guard: bool,
    ring: RingContext,
) -> dict[Monomial, int]:
    """Full reduction of ``f`` (a fresh dict, consumed) modulo a monic basis."""
    key = order.key
    heap = [tuple(-k for k in key(m)) + (m,) for m in f]
    heapq.heapify(heap)
    rem: dict[Monomial, int] = {}
    steps = 0
    cap = None
    while heap:
        entry = heapq.heappop(heap)
        m = entry[-1]
        c = f.pop(m, 0)
        if not c:
            continue
        i = basis.divisor(m)
        if i < 0:
            rem[m] = c
            continue
        steps += 1
        if guard and steps > _GUARD_CHECK:
            if cap is None:
                zero_caps = {}
                weights = ring._degree_weights()
                for idx, w in enumerate(weights):
                    if w == 0:
                        zero_caps[idx] = max(
                            [mm[idx] for mm in f] + [m[idx]] + [mm[idx] for mm in rem]
                        )
                cap = _piece_size(ring, ring.positive_degree(m), zero_caps)
            if steps > cap:
                raise TerminationError("reduction chain exceeded the graded piece dimension")
        lm = basis.lms[i]
        q = tuple(a - b for a, b in zip(m, lm))
        for gm, gc in basis.terms[i].items():
            if gm == lm:
                continue
            nm = tuple(a + b for a, b in zip(q, gm))
            old = f.get(nm)
            if old is None:
                f[nm] = (-c * gc) % p
                heapq.heappush(heap, tuple(-k for k in key(nm)) + (nm,))
            else:
                v = (old - c * gc) % p
                if v:
                    f[nm] = v
                else:
                    del f[nm]
    return rem


def _monic(terms: dict[Monomial, int], order: OrderSpec, p: int) -> tuple[Monomial, dict[Monomial, int]]:
    lm = max(terms, key=order.key)
    inv = pow(terms[lm], p - 2, p)
    return lm, {m: c * inv % p for m, c in terms.items()}


def s_polynomial(f: Polynomial, g: Polynomial, order: OrderSpec) -> Polynomial:
    """S-pair of ``f`` and ``g`` with their leading terms made monic and cancelled."""
    if not f or not g:
        raise GroebnerError("S-polynomial of a zero polynomial")
    f._check(g)
    p = f.ring.p
    lf, tf = _monic(dict(f.terms), order, p)
    lg, tg = _monic(dict(g.terms), order, p)
    lcm = mono_lcm(lf, lg)
    a = Polynomial._raw(f.ring, tf).mul_term(tuple(x - y for x, y in zip(lcm, lf)), 1)
    b = Polynomial._raw(f.ring, tg).mul_term(tuple(x - y for x, y in zip(lcm, lg)), 1)
    return a - b


def normal_form(f: Polynomial, basis: Sequence[Polynomial], order: OrderSpec) -> Polynomial:
    """Remainder of ``f`` on division by ``basis``; no term is divisible by a leading monomial."""
    basis = [g for g in basis]
    if any(not g for g in basis):
        raise GroebnerError("basis contains zero")
    for g in basis:
        f._check(g)
    _check_order_and_input(order, [f, *basis])
    if not f or not basis:
        return f
    p = f.ring.p
    b = _Basis()
    for g in basis:
        b.add(*_monic(dict(g.terms), order, p))
    rem = _reduce(dict(f.terms), b, order, p, _needs_grading(order), f.ring)
    return Polynomial._raw(f.ring, rem)


def _sugar(ring: RingContext, order: OrderSpec, graded: bool):
    if graded:
        return lambda m: (ring.positive_degree(m),) + order.key(m)
    return order.key


def buchberger(gens: Sequence[Polynomial], order: OrderSpec) -> list[Polynomial]:
    """Reduced Groebner basis of ``gens``, monic and sorted by leading monomial."""
    gens = [g for g in gens if g]
    if not gens:
        return []
    ring = gens[0].ring
    for g in gens:
        gens[0]._check(g)
    _check_order_and_input(order, gens)
    p = ring.p
    guard = _needs_grading(order)
    graded = ring.grading is not None and all(g.is_homogeneous() for g in gens)
    sugar = _sugar(ring, order, graded)

    basis = _Basis()
    alive: list[bool] = []
    pairs: set[tuple[int, int]] = set()

    def update(lm_new: Monomial) -> None:
        # Gebauer-Moeller: drop old pairs made redundant by the new element,
        # then keep one new pair per minimal lcm that is not coprime.
        new = len(basis.lms) - 1
        lms = basis.lms
        stale = set()
        for i, j in pairs:
            lij = mono_lcm(lms[i], lms[j])
            if (
                mono_divides(lm_new, lij)
                and mono_lcm(lms[i], lm_new) != lij
                and mono_lcm(lms[j], lm_new) != lij
            ):
                stale.add((i, j))
        pairs.difference_update(stale)
        cands: dict[Monomial, list[int]] = {}
        for i in range(new):
            if alive[i]:
                cands.setdefault(mono_lcm(lms[i], lm_new), []).append(i)
        minimal: list[Monomial] = []
        for lcm in sorted(cands, key=sugar):
            if not any(mono_divides(other, lcm) for other in minimal):
                minimal.append(lcm)
        for lcm in minimal:
            idx = cands[lcm]
            coprime = any(
                all(a == 0 or b == 0 for a, b in zip(lms[i], lm_new)) for i in idx
            )
            if not coprime:
                pairs.add((min(idx), new))
        for i in range(new):
            if alive[i] and mono_divides(lm_new, lms[i]):
                alive[i] = False

    for g in sorted(gens, key=lambda h: sugar(leading_monomial(h, order))):
        rem = _reduce(dict(g.terms), basis, order, p, guard, ring)
        if rem:
            lm, terms = _monic(rem, order, p)
            basis.add(lm, terms)
            alive.append(True)
            update(lm)

    while pairs:
        i, j = min(pairs, key=lambda ij: (sugar(mono_lcm(basis.lms[ij[0]], basis.lms[ij[1]])), ij))
        pairs.discard((i, j))
        li, lj = basis.lms[i], basis.lms[j]
        lcm = mono_lcm(li, lj)
        qi = tuple(a - b for a, b in zip(lcm, li))
        qj = tuple(a - b for a, b in zip(lcm, lj))
        s: dict[Monomial, int] = {}
        for m, c in basis.terms[i].items():
            s[tuple(a + b for a, b in zip(m, qi))] = c
        for m, c in basis.terms[j].items():
            nm = tuple(a + b for a, b in zip(m, qj))
            v = (s.get(nm, 0) - c) % p
            if v:
                s[nm] = v
            else:
                s.pop(nm, None)
        if not s:
            continue
        rem = _reduce(s, basis, order, p, guard, ring)
        if rem:
            lm, terms = _monic(rem, order, p)
            basis.add(lm, terms)
            alive.append(True)
            update(lm)

    return _reduced(basis, order, p, guard, ring)


def _reduced(basis: _Basis, order: OrderSpec, p: int, guard: bool, ring: RingContext) -> list[Polynomial]:
    items = sorted(zip(basis.lms, basis.terms), key=lambda it: order.key(it[0]))
    minimal: list[tuple[Monomial, dict[Monomial, int]]] = []
    for lm, terms in items:
        if not any(mono_divides(other, lm) for other, _ in minimal):
            minimal.append((lm, terms))
    out = []
    for k, (lm, terms) in enumerate(minimal):
        others = _Basis()
        for j, (olm, oterms) in enumerate(minimal):
            if j != k:
                others.add(olm, oterms)
        tail = {m: c for m, c in terms.items() if m != lm}
        rem = _reduce(tail, others, order, p, guard, ring)
        rem[lm] = 1
        out.append(Polynomial._raw(ring, rem))
    return out


def is_groebner_basis(gens: Sequence[Polynomial], order: OrderSpec) -> bool:
    """Buchberger's criterion: every S-pair reduces to zero modulo ``gens``."""
    gens = [g for g in gens if g]
    if not gens:
        return True
    _check_order_and_input(order, gens)
    ring = gens[0].ring
    p = ring.p
    basis = _Basis()
    for g in gens:
        basis.add(*_monic(dict(g.terms), order, p))
    guard = _needs_grading(order)
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            s = s_polynomial(gens[i], gens[j], order)
            if s and _reduce(dict(s.terms), basis, order, p, guard, ring):
                return False
    return True


class Ideal:
    """Generators plus a write-once cache of reduced Groebner bases per order."""

    def __init__(self, ring: RingContext, gens: Iterable[Polynomial] = ()):
        self.ring = ring
        kept = []
        for g in gens:
            if isinstance(g, int):
                g = ring.const(g)
            if g.ring.names != ring.names or g.ring.p != ring.p:
                raise GroebnerError("generator from a different ring")
            if g:
                kept.append(g if g.ring is ring else Polynomial._raw(ring, g.terms))
        self.gens: tuple[Polynomial, ...] = tuple(kept)
        self._cache: dict[tuple, tuple[Polynomial, ...]] = {}
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return "Ideal<" + ", ".join(str(g) for g in self.gens) + ">"

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.ring.names != self.ring.names:
            raise GroebnerError("ideals in different rings")
        return Ideal(self.ring, self.gens + other.gens)

    def _order(self, order: OrderSpec | None) -> OrderSpec:
        order = order or self.ring.default_order
        if order.ring.names != self.ring.names:
            raise GroebnerError("order belongs to a different ring")
        return order

    def groebner_basis(self, order: OrderSpec | None = None) -> tuple[Polynomial, ...]:
        order = self._order(order)
        key = order.directives
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        gb = tuple(buchberger(self.gens, order))
        with self._lock:
            return self._cache.setdefault(key, gb)

    def is_zero(self) -> bool:
        return not self.gens

    def is_monomial(self) -> bool:
        return all(g.is_monomial() for g in self.gens)

    def is_squarefree_monomial(self) -> bool:
        return all(g.is_monomial() and max(next(iter(g.terms))) <= 1 for g in self.gens)

    def contains(self, f: Polynomial, order: OrderSpec | None = None) -> bool:
        return contains(self, f, order)

    def minimal_monomial_gens(self) -> list[Monomial]:
        """Minimal monomial generators of a monomial ideal."""
        if not self.is_monomial():
            raise GroebnerError("not a monomial ideal")
        ms = sorted({next(iter(g.terms)) for g in self.gens}, key=lambda m: (sum(m), m))
        out: list[Monomial] = []
        for m in ms:
            if not any(mono_divides(o, m) for o in out):
                out.append(m)
        return out


def contains(I: Ideal, f: Polynomial, order: OrderSpec | None = None) -> bool:
    order = I._order(order)
    if not f:
        return True
    gb = I.groebner_basis(order)
    if not gb:
        return False
    return not normal_form(f, gb, order)


def ideal_equals(I: Ideal, J: Ideal, order: OrderSpec | None = None) -> bool:
    """``I == J``: check ``I`` inside ``J`` and equal initial ideals.

    By the initial-ideal lemma (``I`` contained in ``J`` with the same initial
    ideal forces equality) this avoids testing the reverse containment.
    """
    order = I._order(order)
    if not all(contains(J, g, order) for g in I.gens):
        return False
    lm_i = {leading_monomial(g, order) for g in I.groebner_basis(order)}
    lm_j = {leading_monomial(g, order) for g in J.groebner_basis(order)}
    return lm_i == lm_j


def ideal_contains(I: Ideal, J: Ideal, order: OrderSpec | None = None) -> bool:
    """``J`` is a subset of ``I``."""
    return all(contains(I, g, order) for g in J.gens)


def initial_ideal(I: Ideal, full_order: OrderSpec, prefix_length: int | None = None) -> Ideal:
    """Initial forms, under the first ``prefix_length`` directives, of the GB under ``full_order``."""
    if prefix_length is None:
        prefix_length = len(full_order.directives)
    partial = full_order.prefix(prefix_length)
    gb = I.groebner_basis(full_order)
    return Ideal(I.ring, [initial_form(g, partial) for g in gb])


_T = "t"


def _extended(ring: RingContext) -> RingContext:
    if _T in ring.index:
        raise GroebnerError("ring already uses the elimination variable t")
    grading = None if ring.grading is None else ring.grading + ((0, 0),)
    return RingContext(ring.names + (_T,), ring.p, grading)


def intersect(I: Ideal, J: Ideal, order: OrderSpec | None = None) -> Ideal:
    """``I ∩ J`` by eliminating ``t`` from ``t*I + (1-t)*J``."""
    if I.ring.names != J.ring.names or I.ring.p != J.ring.p:
        raise GroebnerError("ideals in different rings")
    ring = I.ring
    order = I._order(order)
    if I.is_zero() or J.is_zero():
        return Ideal(ring, [])
    big = _extended(ring)
    t_idx = big.index[_T]
    elim = OrderSpec(big, ((t_idx, Direction.MAX_FIRST),) + order.directives)
    t = big.var(_T)
    gens = [t * g.to_ring(big) for g in I.gens]
    gens += [(1 - t) * g.to_ring(big) for g in J.gens]
    gb = buchberger(gens, elim)
    kept = []
    for g in gb:
        if all(m[t_idx] == 0 for m in g.terms):
            kept.append(Polynomial._raw(ring, {m[:t_idx] + m[t_idx + 1:]: c for m, c in g.terms.items()}))
    return Ideal(ring, kept)


def product_ideal(I: Ideal, J: Ideal) -> Ideal:
    return Ideal(I.ring, [f * g for f in I.gens for g in J.gens])

"""Trace map, splitting checks and compatibility tests over ``F_p``.

For ``phi = Tr(f^(p-1) * .)`` and an ideal ``I``, ``phi(I)`` is generated by
``phi(x^s * g)`` over generators ``g`` and exponents ``s`` in ``[0, p-1]^d``.
Writing ``f^(p-1) * g = sum_r h_r^p x^r`` gives ``phi(x^s g) = h_(p-1-s)``, so
``I`` is compatibly split exactly when every ``h_r`` lies in ``I``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .groebner import Ideal, _Basis, _check_order_and_input, _monic, _needs_grading, _reduce
from .polyring import (
    Monomial,
    OrderSpec,
    Polynomial,
    PolyError,
    RingContext,
    _Codec,
    _packed_mul,
    format_monomial,
    parse_poly,
    power,
)


class FrobeniusError(PolyError):
    pass


def _require_odd(ring: RingContext) -> None:
    if ring.p <= 2:
        raise FrobeniusError("Frobenius operations need p > 2")


def trace(g: Polynomial) -> Polynomial:
    ring = g.ring
    _require_odd(ring)
    p = ring.p
    out: dict[Monomial, int] = {}
    for m, c in g.terms.items():
        if all((e + 1) % p == 0 for e in m):
            out[tuple((e + 1) // p - 1 for e in m)] = c
    return Polynomial._raw(ring, out)


def pth_root_decompose(h: Polynomial) -> dict[Monomial, Polynomial]:
    """Map each residue ``r`` to ``h_r`` with ``h = sum_r h_r^p * x^r``."""
    p = h.ring.p
    parts: dict[Monomial, dict[Monomial, int]] = {}
    for m, c in h.terms.items():
        r = tuple(e % p for e in m)
        parts.setdefault(r, {})[tuple(e // p for e in m)] = c
    return {r: Polynomial._raw(h.ring, terms) for r, terms in sorted(parts.items())}


def recompose(parts: dict[Monomial, Polynomial]) -> Polynomial:
    ring = next(iter(parts.values())).ring if parts else None
    if ring is None:
        raise FrobeniusError("nothing to recompose")
    p = ring.p
    out = ring.zero()
    for r, hr in parts.items():
        out = out + power(hr, p).mul_term(r, 1)
    return out


def is_splitting(f: Polynomial) -> bool:
    _require_odd(f.ring)
    return trace(power(f, f.ring.p - 1)) == f.ring.one()


@dataclass
class SplittingDatum:
    f: Polynomial
    _fp1: Polynomial | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        _require_odd(self.f.ring)

    @property
    def ring(self) -> RingContext:
        return self.f.ring

    @property
    def f_power(self) -> Polynomial:
        if self._fp1 is None:
            self._fp1 = power(self.f, self.ring.p - 1)
        return self._fp1

    def is_splitting(self) -> bool:
        return trace(self.f_power) == self.ring.one()


@dataclass
class CompatibilityResult:
    compatible: bool
    generator: Polynomial | None = None
    residue: Monomial | None = None
    remainder: Polynomial | None = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.compatible

    def witness(self) -> dict | None:
        if self.compatible:
            return None
        return {
            "generator": str(self.generator),
            "residue": format_monomial(self.generator.ring, self.residue) or "1",
            "normal_form": str(self.remainder),
        }


def is_compatibly_split(
    ideal: Ideal, datum: SplittingDatum, order: OrderSpec | None = None
) -> CompatibilityResult:
    """Test ``Tr(f^(p-1) * I)`` inside ``I``; report a witness on failure."""
    ring = ideal.ring
    if ring.names != datum.ring.names or ring.p != datum.ring.p:
        raise FrobeniusError("ideal and splitting live in different rings")
    if not datum.is_splitting():
        raise FrobeniusError("the datum is not a splitting")
    order = ideal._order(order)
    if ideal.is_zero():
        return CompatibilityResult(True)
    gb = ideal.groebner_basis(order)
    p = ring.p
    basis = _Basis()
    for g in gb:
        basis.add(*_monic(dict(g.terms), order, p))
    guard = _needs_grading(order)
    fp = datum.f_power
    checked = 0
    for g in ideal.gens:
        for r, hr in pth_root_decompose(fp * g).items():
            checked += 1
            if guard:
                _check_order_and_input(order, [hr])
            rem = _reduce(dict(hr.terms), basis, order, p, guard, ring)
            if rem:
                return CompatibilityResult(False, g, r, Polynomial._raw(ring, rem), checked)
    return CompatibilityResult(True, checked=checked)


def coefficient_in_power(
    g: Polynomial | Sequence[Polynomial], e: int, target: Monomial
) -> int:
    """Coefficient of ``target`` in ``g**e`` using powers pruned at ``target``.

    ``g`` may be passed as a list of factors; then each factor is raised to
    the ``e``-th power separately, which keeps every intermediate small.  The
    last product is never formed: only the single requested coefficient is
    summed from matching pairs of terms.
    """
    if e < 0:
        raise FrobeniusError("negative exponent")
    factors = [g] if isinstance(g, Polynomial) else list(g)
    if not factors:
        raise FrobeniusError("no factors given")
    ring = factors[0].ring
    target = tuple(target)
    p = ring.p
    if len(factors) == 1:
        e1 = e // 2
        pieces = [power(factors[0], e1, prune=target), power(factors[0], e - e1, prune=target)]
    else:
        pieces = [power(f, e, prune=target) for f in factors]
    pieces.sort(key=len)
    codec = _Codec(ring.nvars, 2 * max(max(target, default=0), 1), target)
    acc = {codec.pack((0,) * ring.nvars): 1}
    for piece in pieces[:-1]:
        packed = {codec.pack(m): c for m, c in piece.terms.items()}
        acc = _packed_mul(acc, packed, p, codec)
    last = {codec.pack(m): c for m, c in pieces[-1].terms.items()}
    want = codec.pack(target)
    # every key in acc is below the target field by field, so want - k never
    # borrows and is the packed complementary monomial
    total = sum(c * last.get(want - k, 0) for k, c in acc.items())
    return total % p


def standard_splitting(ring: RingContext) -> Polynomial:
    """Product of all variables; ``Tr(f^(p-1) *)`` is the standard splitting."""
    f = ring.one()
    for v in ring.names:
        f = f * ring.var(v)
    return f


# the punctual family over <x^2, x*y^2, y^3> with five points
_B0_NAMES = tuple(f"a{i}" for i in range(1, 6)) + tuple(f"b{i}" for i in range(1, 6))
_B0_FACTORS = (
    "-a4*b3*b4^2 + a4*b2*b4*b5 + a3*b4*b5 + b1*b5^2 - b3*b5^2",
    "a1^2*a3 + a1*a2*b1 + a2^2*b2 - 2*a1*a2*b3",
    "a4",
    "a3*b2 + b1*b3 - b3^2",
)


def b0_factors(p: int) -> list[Polynomial]:
    """Factors of the weighted initial form of the splitting on the five-point chart."""
    ring = RingContext(_B0_NAMES, p)
    return [parse_poly(ring, text) for text in _B0_FACTORS]


def b0_target(p: int) -> Monomial:
    """``(a1 a2 a3 b1..b5)^(p-1) * a4^(3(p-1)/2)``."""
    e = p - 1
    return tuple(3 * e // 2 if name == "a4" else (0 if name == "a5" else e) for name in _B0_NAMES)


def b0_coefficient(p: int) -> int:
    ring = RingContext(_B0_NAMES, p)
    _require_odd(ring)
    return coefficient_in_power(b0_factors(p), p - 1, b0_target(p))

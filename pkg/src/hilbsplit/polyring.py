"""Sparse multivariate polynomials over a prime field.

A polynomial is a map from exponent tuples to residues in ``[0, p)``.  Monomial
orders are given as a sequence of per-variable directives compared
lexicographically, so composite weightings such as "lowest ``b2`` degree
first, then highest ``a2`` degree, ..." are exact and never need large numeric
weights.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

Monomial = tuple[int, ...]


class PolyError(ValueError):
    """Raised on ring mismatches, bad variables and malformed input."""


class ParseError(PolyError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Direction(enum.Enum):
    MAX_FIRST = "max"  # higher degree in the variable is larger
    MIN_FIRST = "min"  # lower degree in the variable is larger


@dataclass(frozen=True)
class RingContext:
    """Variable names, characteristic and optional torus grading.

    ``grading`` maps each variable to an integer pair.  When present, the
    positive degree of a variable with weight ``(w1, w2)`` is ``-(N*w1 + w2)``
    where ``N = n + 1`` and ``n`` is one more than the largest second weight
    among variables with negative first weight.  On the patch ring this gives
    ``N - i + 1`` for ``a_i`` and ``i`` for ``b_i``.
    """

    names: tuple[str, ...]
    p: int
    grading: tuple[tuple[int, int], ...] | None = None
    index: Mapping[str, int] = field(init=False, repr=False, compare=False)
    default_order: "OrderSpec" = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise PolyError("variable names must be unique")
        if not _is_prime(self.p):
            raise PolyError(f"characteristic {self.p} is not prime")
        if self.grading is not None:
            grading = tuple(tuple(w) for w in self.grading)
            if len(grading) != len(names):
                raise PolyError("grading must assign a weight to every variable")
            object.__setattr__(self, "grading", grading)
        object.__setattr__(self, "index", {v: i for i, v in enumerate(names)})
        object.__setattr__(
            self, "default_order", OrderSpec.lex(self, names)
        )

    @property
    def nvars(self) -> int:
        return len(self.names)

    def var(self, name: str) -> "Polynomial":
        if name not in self.index:
            raise PolyError(f"unknown variable {name!r}")
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return Polynomial(self, {tuple(e): 1})

    def monomial(self, powers: Mapping[str, int] | None = None) -> Monomial:
        e = [0] * self.nvars
        for name, k in (powers or {}).items():
            if name not in self.index:
                raise PolyError(f"unknown variable {name!r}")
            if k < 0:
                raise PolyError("negative exponent")
            e[self.index[name]] += k
        return tuple(e)

    def const(self, c: int) -> "Polynomial":
        c %= self.p
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def with_order(self, order: "OrderSpec") -> "RingContext":
        """Same ring whose canonical formatting follows ``order``."""
        ring = RingContext(self.names, self.p, self.grading)
        object.__setattr__(ring, "default_order", OrderSpec(ring, order.directives))
        return ring

    # grading -------------------------------------------------------------

    def _degree_weights(self) -> tuple[int, ...]:
        if self.grading is None:
            raise PolyError("ring has no torus grading")
        seconds = [w2 for w1, w2 in self.grading if w1 < 0]
        big_n = (max(seconds) + 2) if seconds else 1
        return tuple(-(big_n * w1 + w2) for w1, w2 in self.grading)

    def t2_weight(self, m: Monomial) -> tuple[int, int]:
        if self.grading is None:
            raise PolyError("ring has no torus grading")
        w1 = sum(e * g[0] for e, g in zip(m, self.grading))
        w2 = sum(e * g[1] for e, g in zip(m, self.grading))
        return (w1, w2)

    def positive_degree(self, m: Monomial) -> int:
        weights = self._degree_weights()
        return sum(e * w for e, w in zip(m, weights))


def positive_degree(ring: RingContext, m: Monomial) -> int:
    return ring.positive_degree(m)


@dataclass(frozen=True)
class OrderSpec:
    """Sequence of ``(variable index, Direction)`` directives."""

    ring: RingContext
    directives: tuple[tuple[int, Direction], ...]

    def __post_init__(self) -> None:
        seen = set()
        for idx, d in self.directives:
            if not 0 <= idx < self.ring.nvars:
                raise PolyError(f"directive variable {idx} not in ring")
            if idx in seen:
                raise PolyError("variable repeated in order")
            if not isinstance(d, Direction):
                raise PolyError("bad direction")
            seen.add(idx)
        object.__setattr__(self, "directives", tuple(self.directives))

    @classmethod
    def of(cls, ring: RingContext, spec: Iterable[tuple[str, Direction | str]]) -> "OrderSpec":
        out = []
        for name, d in spec:
            if name not in ring.index:
                raise PolyError(f"unknown variable {name!r}")
            if isinstance(d, str):
                d = Direction.MAX_FIRST if d.lower().startswith("max") else Direction.MIN_FIRST
            out.append((ring.index[name], d))
        return cls(ring, tuple(out))

    @classmethod
    def lex(cls, ring: RingContext, names: Sequence[str]) -> "OrderSpec":
        return cls.of(ring, [(v, Direction.MAX_FIRST) for v in names])

    @property
    def is_total(self) -> bool:
        return len(self.directives) == self.ring.nvars

    @property
    def well_founded(self) -> bool:
        return all(d is Direction.MAX_FIRST for _, d in self.directives)

    def prefix(self, k: int) -> "OrderSpec":
        if not 0 <= k <= len(self.directives):
            raise PolyError("prefix length out of range")
        return OrderSpec(self.ring, self.directives[:k])

    def key(self, m: Monomial) -> tuple[int, ...]:
        return tuple(m[i] if d is Direction.MAX_FIRST else -m[i] for i, d in self.directives)

    def describe(self) -> list[tuple[str, str]]:
        return [(self.ring.names[i], d.value) for i, d in self.directives]


def compare(m1: Monomial, m2: Monomial, order: OrderSpec) -> int:
    """Return -1, 0 or 1 as ``m1`` is smaller than, tied with or larger than ``m2``."""
    n = order.ring.nvars
    if len(m1) != n or len(m2) != n:
        raise PolyError("monomial length does not match ring")
    k1, k2 = order.key(m1), order.key(m2)
    return (k1 > k2) - (k1 < k2)


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    return tuple(a + b for a, b in zip(m1, m2))


def mono_divides(m1: Monomial, m2: Monomial) -> bool:
    return all(a <= b for a, b in zip(m1, m2))


def mono_div(m1: Monomial, m2: Monomial) -> Monomial:
    return tuple(a - b for a, b in zip(m1, m2))


def mono_lcm(m1: Monomial, m2: Monomial) -> Monomial:
    return tuple(a if a > b else b for a, b in zip(m1, m2))


class Polynomial:
    """Immutable sparse polynomial over ``F_p``."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingContext, terms: Mapping[Monomial, int] | None = None):
        p = ring.p
        clean: dict[Monomial, int] = {}
        for m, c in (terms or {}).items():
            c %= p
            if c:
                if len(m) != ring.nvars:
                    raise PolyError("monomial length does not match ring")
                clean[tuple(m)] = c
        self.ring = ring
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring: RingContext, terms: dict[Monomial, int]) -> "Polynomial":
        # trusted constructor: terms already canonical
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    # basic protocol -------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self.terms.items())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self == self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring.names == other.ring.names and self.ring.p == other.ring.p and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring.names, self.ring.p, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)

    def _check(self, other: "Polynomial") -> None:
        if self.ring is not other.ring and (
            self.ring.names != other.ring.names or self.ring.p != other.ring.p
        ):
            raise PolyError("polynomials live in different rings")

    def _coerce(self, other: "Polynomial | int") -> "Polynomial":
        if isinstance(other, int):
            return self.ring.const(other)
        self._check(other)
        return other

    # arithmetic -----------------------------------------------------------

    def __add__(self, other: "Polynomial | int") -> "Polynomial":
        other = self._coerce(other)
        p = self.ring.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        p = self.ring.p
        return Polynomial._raw(self.ring, {m: p - c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial | int") -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> "Polynomial":
        return self.ring.const(other) - self

    def __mul__(self, other: "Polynomial | int") -> "Polynomial":
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        return Polynomial._raw(self.ring, _mul_terms(self.terms, other.terms, self.ring.p, None))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        return power(self, e)

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial._raw(self.ring, {m: v * c % p for m, v in self.terms.items()})

    def mul_term(self, m: Monomial, c: int) -> "Polynomial":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial._raw(
            self.ring, {mono_mul(m, k): v * c % p for k, v in self.terms.items()}
        )

    # inspection -----------------------------------------------------------

    def coefficient(self, m: Monomial) -> int:
        return self.terms.get(tuple(m), 0)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def variables(self) -> set[str]:
        used = set()
        for m in self.terms:
            used.update(self.ring.names[i] for i, e in enumerate(m) if e)
        return used

    def is_homogeneous(self) -> bool:
        """True when all terms share one torus weight."""
        weights = {self.ring.t2_weight(m) for m in self.terms}
        return len(weights) <= 1

    def substitute(self, values: Mapping[str, "int | Polynomial"]) -> "Polynomial":
        """Replace variables by constants (or polynomials of the same ring)."""
        ring = self.ring
        subs = {}
        for name, val in values.items():
            if name not in ring.index:
                raise PolyError(f"unknown variable {name!r}")
            subs[ring.index[name]] = val
        out = ring.zero()
        for m, c in self.terms.items():
            rest = list(m)
            term = ring.const(c)
            for idx, val in subs.items():
                if rest[idx]:
                    k = rest[idx]
                    rest[idx] = 0
                    term = term * (val**k if isinstance(val, Polynomial) else pow(val, k, ring.p))
            out = out + term.mul_term(tuple(rest), 1)
        return out

    def to_ring(self, ring: RingContext) -> "Polynomial":
        """Re-embed into a ring that contains all variables actually used."""
        if ring.p != self.ring.p:
            raise PolyError("characteristic mismatch")
        mapping = []
        for i, name in enumerate(self.ring.names):
            mapping.append(ring.index.get(name))
        out: dict[Monomial, int] = {}
        for m, c in self.terms.items():
            e = [0] * ring.nvars
            for i, k in enumerate(m):
                if k:
                    j = mapping[i]
                    if j is None:
                        raise PolyError(f"variable {self.ring.names[i]} missing from target ring")
                    e[j] = k
            out[tuple(e)] = c
        return Polynomial._raw(ring, out)

    def evaluate(self, point: Mapping[str, int]) -> int:
        p = self.ring.p
        vals = [point.get(v, 0) for v in self.ring.names]
        total = 0
        for m, c in self.terms.items():
            t = c
            for v, k in zip(vals, m):
                if k:
                    t = t * pow(v, k, p) % p
            total += t
        return total % p


class _Codec:
    """Packs exponent tuples into integers so multiplication is one addition.

    Each variable gets a ``bits``-wide field; ``limit`` bounds every field
    value that can occur, which keeps additions carry-free.  A per-field cap
    is tested with the usual bias trick: adding ``2**(bits-1) - 1 - cap`` sets
    the field's top bit exactly when the field exceeds ``cap``.
    """

    def __init__(self, nvars: int, limit: int, cap: Monomial | None = None):
        bits = max(limit, 1).bit_length() + 2
        self.nvars = nvars
        self.bits = bits
        self.mask = (1 << bits) - 1
        self.shifts = [bits * i for i in range(nvars)]
        self.high = sum(1 << (s + bits - 1) for s in self.shifts)
        self.bias = None
        if cap is not None:
            top = (1 << (bits - 1)) - 1
            self.bias = sum((top - c) << s for c, s in zip(cap, self.shifts))

    def pack(self, m: Monomial) -> int:
        return sum(e << s for e, s in zip(m, self.shifts))

    def unpack(self, k: int) -> Monomial:
        mask, bits = self.mask, self.bits
        out = []
        for _ in range(self.nvars):
            out.append(k & mask)
            k >>= bits
        return tuple(out)

    def exceeds(self, k: int) -> bool:
        return bool((k + self.bias) & self.high)


def _packed_mul(a: dict[int, int], b: dict[int, int], p: int, codec: _Codec | None) -> dict[int, int]:
    if len(a) < len(b):
        a, b = b, a
    out: dict[int, int] = {}
    get = out.get
    if codec is None or codec.bias is None:
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
    else:
        bias, high = codec.bias, codec.high
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                if (k + bias) & high:
                    continue
                out[k] = get(k, 0) + ca * cb
    return {k: c % p for k, c in out.items() if c % p}


def _mul_terms(
    a: Mapping[Monomial, int], b: Mapping[Monomial, int], p: int, cap: Monomial | None
) -> dict[Monomial, int]:
    if not a or not b:
        return {}
    nv = len(next(iter(a)))
    if cap is None:
        limit = max(max(m, default=0) for m in a) + max(max(m, default=0) for m in b)
    else:
        limit = 2 * max(max(cap, default=0), 1)
    codec = _Codec(nv, limit, cap)
    pa = {codec.pack(m): c for m, c in a.items()}
    pb = {codec.pack(m): c for m, c in b.items()}
    return {codec.unpack(k): c for k, c in _packed_mul(pa, pb, p, codec).items()}


def add(f: Polynomial, g: Polynomial) -> Polynomial:
    return f + g


def multiply(f: Polynomial, g: Polynomial) -> Polynomial:
    return f * g


def negate(f: Polynomial) -> Polynomial:
    return -f


def power(f: Polynomial, e: int, prune: Monomial | None = None) -> Polynomial:
    """``f**e`` by repeated squaring, discarding terms above ``prune`` if given.

    Pruning is sound for reading off coefficients of monomials below the cap:
    multiplying never lowers an exponent, so a discarded term can never feed
    a kept one.
    """
    if e < 0:
        raise PolyError("negative exponent")
    ring = f.ring
    one = (0,) * ring.nvars
    if e == 0:
        return ring.one()
    if not f.terms:
        return ring.zero()
    if prune is not None:
        prune = tuple(prune)
        if len(prune) != ring.nvars:
            raise PolyError("prune cap length does not match ring")
        terms = {m: c for m, c in f.terms.items() if all(x <= y for x, y in zip(m, prune))}
        limit = 2 * max(max(prune, default=0), 1)
    else:
        terms = dict(f.terms)
        limit = 2 * e * max(max(m, default=0) for m in terms)
    codec = _Codec(ring.nvars, limit, prune)
    base = {codec.pack(m): c for m, c in terms.items()}
    result = {codec.pack(one): 1}
    p = ring.p
    while e:
        if e & 1:
            result = _packed_mul(result, base, p, codec)
        e >>= 1
        if e:
            base = _packed_mul(base, base, p, codec)
    return Polynomial._raw(ring, {codec.unpack(k): c for k, c in result.items()})


def leading_monomial(f: Polynomial, order: OrderSpec) -> Monomial:
    if not f.terms:
        raise PolyError("zero polynomial has no leading monomial")
    return max(f.terms, key=order.key)


def initial_form(f: Polynomial, order: OrderSpec) -> Polynomial:
    """Sum of the terms of ``f`` that are maximal under a possibly partial order."""
    if not f.terms:
        raise PolyError("initial form of the zero polynomial")
    keys = {m: order.key(m) for m in f.terms}
    top = max(keys.values())
    return Polynomial._raw(f.ring, {m: c for m, c in f.terms.items() if keys[m] == top})


# text format ----------------------------------------------------------------

_VARNAME = re.compile(r"[abt]\d+|[xyt]")


def _signed(c: int, p: int) -> int:
    return c if c <= p // 2 else c - p


def format_monomial(ring: RingContext, m: Monomial) -> str:
    parts = []
    for name, k in zip(ring.names, m):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_poly(f: Polynomial, order: OrderSpec | None = None) -> str:
    """Canonical text: terms in descending order, unit coefficients omitted."""
    if not f.terms:
        return "0"
    ring = f.ring
    order = order or ring.default_order
    pieces = []
    for m in sorted(f.terms, key=order.key, reverse=True):
        c = _signed(f.terms[m], ring.p)
        body = format_monomial(ring, m)
        mag = abs(c)
        if body:
            text = body if mag == 1 else f"{mag}*{body}"
        else:
            text = str(mag)
        if not pieces:
            pieces.append(("-" if c < 0 else "") + text)
        else:
            pieces.append(("- " if c < 0 else "+ ") + text)
    return " ".join(pieces)


class _Parser:
    def __init__(self, ring: RingContext, text: str):
        self.ring = ring
        self.text = text
        self.pos = 0

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _int(self) -> int:
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected integer", start)
        return int(self.text[start:self.pos])

    def _varpow(self, e: list[int]) -> None:
        self._skip()
        match = _VARNAME.match(self.text, self.pos)
        if not match:
            raise ParseError("expected variable", self.pos)
        name = match.group(0)
        if name not in self.ring.index:
            raise ParseError(f"unknown variable {name!r}", self.pos)
        self.pos = match.end()
        k = 1
        if self._peek() == "^":
            self.pos += 1
            at = self.pos
            k = self._int()
            if k <= 0:
                raise ParseError("exponent must be positive", at)
        e[self.ring.index[name]] += k

    def _term(self) -> tuple[Monomial, int]:
        e = [0] * self.ring.nvars
        coeff = 1
        if self._peek().isdigit():
            coeff = self._int()
            if self._peek() != "*":
                return tuple(e), coeff
            self.pos += 1
        self._varpow(e)
        while self._peek() == "*":
            self.pos += 1
            if self._peek().isdigit():
                coeff *= self._int()
            else:
                self._varpow(e)
        return tuple(e), coeff

    def parse(self) -> Polynomial:
        p = self.ring.p
        acc: dict[Monomial, int] = {}
        sign = 1
        if self._peek() in "+-" and self._peek():
            sign = -1 if self._peek() == "-" else 1
            self.pos += 1
        while True:
            m, c = self._term()
            acc[m] = (acc.get(m, 0) + sign * c) % p
            nxt = self._peek()
            if not nxt:
                break
            if nxt not in "+-":
                raise ParseError(f"unexpected {nxt!r}", self.pos)
            sign = -1 if nxt == "-" else 1
            self.pos += 1
        return Polynomial(self.ring, acc)


def parse_poly(ring: RingContext, text: str) -> Polynomial:
    """Parse ``text`` (e.g. ``"a1*b1 - 2*a2^2"``) into a polynomial of ``ring``."""
    if not text.strip():
        raise ParseError("empty input", 0)
    return _Parser(ring, text).parse()

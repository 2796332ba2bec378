"""The affine chart of the Hilbert scheme around the ideal ``<x, y^n>``.

Coordinates are ``a1..an, b1..bn``: the ideal at a point is generated by
``y^n - b1*y^(n-1) - ... - bn`` and ``x*y^(n-i) - a_i*y^(n-1) - c_i2*y^(n-2) - ...``
for ``i = 1..n``.  This module builds the coefficient matrix, the splitting
polynomial, the stratum labels with their ideals, and the predicted
degenerations of each stratum.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from typing import Sequence

from .groebner import Ideal, ideal_contains, ideal_equals, initial_ideal, intersect, is_groebner_basis
from .polyring import Direction, OrderSpec, Polynomial, PolyError, RingContext, mono_divides


class PatchError(PolyError):
    pass


def patch_names(n: int) -> tuple[str, ...]:
    # interleaved so monomials print as a1*b1*a2*b2
    return tuple(v for i in range(1, n + 1) for v in (f"a{i}", f"b{i}"))


class PatchRing:
    """Polynomial ring on ``a1..an, b1..bn`` with the torus grading and patch order."""

    def __init__(self, n: int, p: int = 5):
        if n < 1:
            raise PatchError("n must be at least 1")
        self.n = n
        names = patch_names(n)
        grading = []
        for name in names:
            i = int(name[1:])
            grading.append((-1, i - 1) if name[0] == "a" else (0, -i))
        base = RingContext(names, p, tuple(grading))
        spec = []
        for i in range(n, 0, -1):
            spec += [(f"b{i}", Direction.MIN_FIRST), (f"a{i}", Direction.MAX_FIRST)]
        self.ring = base.with_order(OrderSpec.of(base, spec))
        self.order = self.ring.default_order

    @property
    def p(self) -> int:
        return self.ring.p

    def a(self, i: int) -> Polynomial:
        return self.ring.var(f"a{i}")

    def b(self, i: int) -> Polynomial:
        return self.ring.var(f"b{i}")

    def ideal(self, gens: Sequence[Polynomial]) -> Ideal:
        return Ideal(self.ring, gens)

    def __repr__(self) -> str:
        return f"PatchRing(n={self.n}, p={self.p})"


def c_coefficient(patch: PatchRing, i: int, j: int, size: int | None = None) -> Polynomial:
    """Closed form of ``c_ij`` for the size-``size`` patch, inside ``patch``'s ring."""
    m = patch.n if size is None else size
    if not (1 <= m <= patch.n and 1 <= i <= m and 1 <= j <= m):
        raise PatchError(f"index ({i},{j}) out of range for size {m}")
    a, b = patch.a, patch.b
    if j == 1:
        return a(i)
    if i < j:
        out = patch.ring.zero()
        for k in range(1, m - j + 2):
            out = out + a(k + i) * b(k + j - 1)
        return out
    out = a(i - j + 1)
    for k in range(1, j):
        out = out - a(k + i - j + 1) * b(k)
    return out


Matrix = tuple[tuple[Polynomial, ...], ...]


def build_matrix(patch: PatchRing, level: int | None = None) -> Matrix:
    """``M_level``: entry ``(i, j)`` is ``-c_ij`` built at size ``level``."""
    level = patch.n if level is None else level
    if level not in (patch.n, patch.n - 1) or level < 0:
        raise PatchError("matrix level must be n or n-1")
    return tuple(
        tuple(-c_coefficient(patch, i, j, level) for j in range(1, level + 1))
        for i in range(1, level + 1)
    )


def determinant(ring: RingContext, matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Laplace expansion along rows, memoized on the set of unused columns."""
    size = len(matrix)
    if size == 0:
        return ring.one()
    memo: dict[tuple[int, ...], Polynomial] = {}

    def sub(cols: tuple[int, ...]) -> Polynomial:
        row = size - len(cols)
        if not cols:
            return ring.one()
        if cols in memo:
            return memo[cols]
        total = ring.zero()
        for pos, col in enumerate(cols):
            entry = matrix[row][col]
            if not entry:
                continue
            rest = sub(cols[:pos] + cols[pos + 1:])
            term = entry * rest
            total = total - term if pos % 2 else total + term
        memo[cols] = total
        return total

    return sub(tuple(range(size)))


def splitting_polynomial(patch: PatchRing) -> Polynomial:
    """``f_n = -b_n * det(M_n)``."""
    return -(patch.b(patch.n) * determinant(patch.ring, build_matrix(patch)))


def minors(ring: RingContext, matrix: Matrix, k: int) -> list[Polynomial]:
    if k <= 0:
        raise PatchError("minor size must be positive")
    size = len(matrix)
    if k > size:
        return []
    out = []
    for rows in itertools.combinations(range(size), k):
        for cols in itertools.combinations(range(size), k):
            sub = [[matrix[r][c] for c in cols] for r in rows]
            d = determinant(ring, sub)
            if d:
                out.append(d)
    return out


def minors_ideal(patch: PatchRing, matrix: Matrix, k: int) -> Ideal:
    return Ideal(patch.ring, minors(patch.ring, matrix, k))


# stratum labels -------------------------------------------------------------

_LABEL = re.compile(r"^\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*\+?([01])\s*$")


@dataclass(frozen=True, order=True)
class StratumLabel:
    s: int
    u: int
    t: int
    flag: int  # 0 or 1

    def __post_init__(self) -> None:
        if min(self.s, self.u, self.t) < 0 or self.flag not in (0, 1):
            raise PatchError(f"malformed label {self.s},{self.u},{self.t},{self.flag}")
        if self.flag == 1 and self.u == 1:
            raise PatchError("labels (s,1,t,+1) do not name a stratum")

    @classmethod
    def parse(cls, text: str) -> "StratumLabel":
        m = _LABEL.match(text)
        if not m:
            raise PatchError(f"cannot parse stratum label {text!r}")
        return cls(*(int(g) for g in m.groups()))

    @property
    def n(self) -> int:
        if self.flag == 1 and self.u == 0:
            return self.s + self.t + 1
        return self.s + self.u + self.t

    @property
    def dimension(self) -> int:
        return self.s + 2 * self.t + self.flag

    @property
    def in_bn_zero(self) -> bool:
        """Whether the stratum lies in the hyperplane ``b_n = 0``."""
        return not (self.flag == 0 and self.u == 0)

    def __str__(self) -> str:
        return f"{self.s},{self.u},{self.t},+{self.flag}"


def dimension(label: StratumLabel) -> int:
    return label.dimension


def enumerate_strata(n: int) -> list[StratumLabel]:
    """All labels for ``n`` points, sorted by dimension then lexicographically."""
    if n < 1:
        raise PatchError("n must be at least 1")
    out = []
    for s in range(n + 1):
        for u in range(n + 1 - s):
            out.append(StratumLabel(s, u, n - s - u, 0))
            if u >= 2:
                out.append(StratumLabel(s, u, n - s - u, 1))
        if s <= n - 1:
            out.append(StratumLabel(s, 0, n - 1 - s, 1))
    return sorted(out, key=lambda lab: (lab.dimension, lab.s, lab.u, lab.t, lab.flag))


def census(n: int) -> dict[int, int]:
    """Number of strata in each dimension."""
    out: dict[int, int] = {}
    for label in enumerate_strata(n):
        out[label.dimension] = out.get(label.dimension, 0) + 1
    return dict(sorted(out.items()))


def square_census(n: int) -> dict[int, int]:
    """Counts rising by one up to dimension ``n`` and falling back down."""
    return {d: min(d, 2 * n - d) + 1 for d in range(2 * n + 1)}


def stratum_ideal(patch: PatchRing, label: StratumLabel, size: int | None = None) -> Ideal:
    """Generators of the stratum ideal, built at ``size`` (default ``n``) inside ``patch``."""
    m = patch.n if size is None else size
    if label.n != m:
        raise PatchError(f"label {label} does not belong to size {m}")
    if m > patch.n:
        raise PatchError("size exceeds the patch")
    if m == 0:
        return Ideal(patch.ring, [])
    ring = patch.ring
    s, u, t, flag = label.s, label.u, label.t, label.flag

    def mat(level: int) -> Matrix:
        return tuple(
            tuple(-c_coefficient(patch, i, j, level) for j in range(1, level + 1))
            for i in range(1, level + 1)
        )

    if flag == 1 and u == 0 and s == 0:
        gens = [patch.b(m)]
    elif flag == 0 and u == 0:
        gens = minors(ring, mat(m), m - s + 1)
    elif flag == 1 and u == 0:
        gens = [patch.b(m)] + minors(ring, mat(m - 1), m - s)
    elif flag == 0:
        big = mat(m)
        gens = [patch.b(k) for k in range(m, m - u, -1)]
        gens += [big[m - 1][j - 1] for j in range(m, m - u, -1)]
        gens += minors(ring, big, m - s - u + 1)
    else:
        big = mat(m)
        gens = [patch.b(k) for k in range(m, m - u, -1)]
        gens += [big[m - 1][j - 1] for j in range(m, m - u + 1, -1)]
        gens += minors(ring, mat(m - 1), m - s - u + 1)
    return Ideal(ring, gens)


# predicted degenerations ----------------------------------------------------

REVLEX = "revlex"
LEX = "lex"
_PREFIX = {REVLEX: 1, LEX: 2}


@dataclass(frozen=True)
class Component:
    """One piece of a predicted degeneration.

    ``label`` lives at size ``size`` (``n`` or ``n - 1``).  ``bn`` and ``an``
    say whether the last coordinates are set to zero (``"zero"``), left free
    (``"line"``) or, for ``an`` in size-``n`` pieces, not touched (``None``).
    """

    label: StratumLabel
    size: int
    bn: str
    an: str | None = None

    def __str__(self) -> str:
        parts = [f"({self.label})@{self.size}", f"b:{self.bn}"]
        if self.an:
            parts.append(f"a:{self.an}")
        return " x ".join(parts)


def predicted_degeneration(n: int, label: StratumLabel, direction: str) -> tuple[int, list[Component]]:
    """Return ``(rule number, components)`` for the degeneration of ``label``."""
    if label.n != n:
        raise PatchError(f"label {label} is not a stratum for n={n}")
    s, u, t, flag = label.s, label.u, label.t, label.flag
    lab = StratumLabel
    if direction == REVLEX:
        if label.in_bn_zero:
            return 1, [Component(label, n, "zero")]
        if s == 0:
            return 2, [Component(lab(0, 0, n - 1, 1), n, "line")]
        if s < n:
            return 3, [
                Component(lab(s, 0, n - s - 1, 1), n, "line"),
                Component(lab(s - 1, 1, n - s, 0), n, "line"),
            ]
        return 4, [Component(lab(n - 1, 1, 0, 0), n, "line")]
    if direction != LEX:
        raise PatchError(f"unknown direction {direction!r}")
    if not label.in_bn_zero:
        raise PatchError(f"the second weighting only applies inside b{n} = 0")
    if flag == 1 and u == 0:
        return 5, [Component(lab(s, 0, n - s - 1, 0), n - 1, "zero", "line")]
    if flag == 1:
        return 9, [Component(lab(s, u - 1, t, 0), n - 1, "zero", "line")]
    if t == 0:
        return 8, [Component(lab(s, u - 1, 0, 0), n - 1, "zero", "zero")]
    if u == 1:
        return 6, [
            Component(lab(s, 0, n - s - 1, 0), n - 1, "zero", "zero"),
            Component(lab(s, 0, n - s - 2, 1), n - 1, "zero", "line"),
        ]
    return 7, [
        Component(lab(s, u - 1, t, 0), n - 1, "zero", "zero"),
        Component(lab(s, u, t - 1, 1), n - 1, "zero", "line"),
    ]


def component_ideal(patch: PatchRing, comp: Component) -> Ideal:
    n = patch.n
    bn = patch.b(n)
    if comp.size == n:
        base = stratum_ideal(patch, comp.label)
        if comp.bn == "zero":
            return base + Ideal(patch.ring, [bn])
        gens = [g.substitute({f"b{n}": 0}) for g in base.gens]
        return Ideal(patch.ring, [g for g in gens if g])
    base = stratum_ideal(patch, comp.label, size=n - 1)
    extra = [bn] if comp.bn == "zero" else []
    if comp.an == "zero":
        extra.append(patch.a(n))
    return base + Ideal(patch.ring, extra)


@dataclass
class DegenerationCheck:
    label: StratumLabel
    direction: str
    rule: int
    components: list[Component]
    initial: Ideal
    predicted: Ideal
    holds: bool


def check_degeneration(patch: PatchRing, label: StratumLabel, direction: str) -> DegenerationCheck:
    """Compare the partial initial ideal of the stratum with the predicted union."""
    rule, comps = predicted_degeneration(patch.n, label, direction)
    lhs = initial_ideal(stratum_ideal(patch, label), patch.order, _PREFIX[direction])
    pieces = [component_ideal(patch, c) for c in comps]
    rhs = pieces[0]
    for piece in pieces[1:]:
        rhs = intersect(rhs, piece, patch.order)
    holds = ideal_equals(lhs, rhs, patch.order)
    return DegenerationCheck(label, direction, rule, comps, lhs, rhs, holds)


def applicable_directions(label: StratumLabel) -> list[str]:
    return [REVLEX, LEX] if label.in_bn_zero else [REVLEX]


# specialization to k[x, y] --------------------------------------------------


def xy_ring(p: int) -> RingContext:
    return RingContext(("x", "y"), p)


def specialize(n: int, point: Sequence[int], p: int) -> list[Polynomial]:
    """Generators of the colength-``n`` ideal at ``point = (a1..an, b1..bn)``."""
    if len(point) != 2 * n:
        raise PatchError("point must have 2n coordinates")
    patch = PatchRing(n, p)
    values = {f"a{i}": point[i - 1] for i in range(1, n + 1)}
    values.update({f"b{i}": point[n + i - 1] for i in range(1, n + 1)})
    plane = xy_ring(p)
    x, y = plane.var("x"), plane.var("y")
    f1 = y**n
    for i in range(1, n + 1):
        f1 = f1 - values[f"b{i}"] * y ** (n - i)
    gens = [f1]
    for i in range(1, n + 1):
        g = x * y ** (n - i) - values[f"a{i}"] * y ** (n - 1)
        for j in range(2, n + 1):
            c = c_coefficient(patch, i, j).evaluate(values)
            g = g - c * y ** (n - j)
        gens.append(g)
    return gens


def xy_lex(p: int) -> OrderSpec:
    return OrderSpec.lex(xy_ring(p), ["x", "y"])


def check_specialization(n: int, point: Sequence[int], p: int) -> bool:
    """The specialized generators are a Lex GB whose leading terms give ``<x, y^n>``."""
    gens = specialize(n, point, p)
    order = xy_lex(p)
    if not is_groebner_basis(gens, order):
        return False
    lms = [max(g.terms, key=order.key) for g in gens]
    minimal = {m for m in lms if not any(o != m and mono_divides(o, m) for o in lms)}
    return minimal == {(1, 0), (0, n)}


def random_points(n: int, p: int, count: int, seed: int) -> list[tuple[int, ...]]:
    rng = random.Random(seed)
    return [tuple(rng.randrange(p) for _ in range(2 * n)) for _ in range(count)]


def origin_in_stratum(patch: PatchRing, label: StratumLabel) -> bool:
    """Every generator vanishes at ``a = b = 0``, i.e. at the ideal ``<x, y^n>``."""
    return all(g.evaluate({}) == 0 for g in stratum_ideal(patch, label).gens)


def stratum_contained(patch: PatchRing, small: StratumLabel, big: StratumLabel) -> bool:
    """``small`` lies inside ``big``, decided by ideal membership."""
    return ideal_contains(stratum_ideal(patch, small), stratum_ideal(patch, big), patch.order)


def non_split_ideal(patch: PatchRing, i: int) -> Ideal:
    """All coordinates except ``a_(i+1)``: the line fixed by the weight ``(i, 1)`` subtorus."""
    if not 1 <= i <= patch.n - 2:
        raise PatchError(f"i must lie in 1..{patch.n - 2}")
    keep = f"a{i + 1}"
    return Ideal(patch.ring, [patch.ring.var(v) for v in patch.ring.names if v != keep])

"""Torus fixed points of the Hilbert scheme of points in the plane.

A fixed point is a monomial ideal of colength ``n``, stored as the weakly
decreasing heights of the columns of its staircase: ``(3, 2)`` is
``<x^2, x*y^2, y^3>``.  Box ``(i, j)`` carries x-exponent ``i`` and
y-exponent ``j``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator

from .polyring import PolyError

Box = tuple[int, int]


class MomentError(PolyError):
    pass


def partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Partitions of ``n`` as weakly decreasing tuples, largest first part first."""
    if n < 0:
        raise MomentError("n must be non-negative")

    def rec(rest: int, cap: int) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        for part in range(min(rest, cap), 0, -1):
            for tail in rec(rest - part, part):
                yield (part,) + tail

    return rec(n, n)


def _check(heights: tuple[int, ...]) -> tuple[int, ...]:
    heights = tuple(heights)
    if not heights or any(h <= 0 for h in heights):
        raise MomentError(f"not a partition: {heights}")
    if any(a < b for a, b in zip(heights, heights[1:])):
        raise MomentError(f"column heights must weakly decrease: {heights}")
    return heights


def transpose(heights: tuple[int, ...]) -> tuple[int, ...]:
    heights = _check(heights)
    return tuple(sum(1 for h in heights if h > j) for j in range(heights[0]))


def standard_set(heights: tuple[int, ...]) -> list[Box]:
    heights = _check(heights)
    return [(i, j) for i, h in enumerate(heights) for j in range(h)]


def border(heights: tuple[int, ...]) -> list[Box]:
    """Boxes outside the staircase with a left or lower neighbour inside it."""
    inside = set(standard_set(heights))
    out = set()
    for i, j in inside:
        for b in ((i + 1, j), (i, j + 1)):
            if b not in inside:
                out.add(b)
    return sorted(out)


def standard_set_and_border(heights: tuple[int, ...]) -> tuple[list[Box], list[Box]]:
    return standard_set(heights), border(heights)


def ideal_generators(heights: tuple[int, ...]) -> list[Box]:
    """Minimal monomial generators ``x^i y^j`` as exponent pairs."""
    heights = _check(heights)
    gens = [(0, heights[0])]
    for i in range(1, len(heights)):
        if heights[i] < heights[i - 1]:
            gens.append((i, heights[i]))
    gens.append((len(heights), 0))
    return sorted(gens, reverse=True)


def format_ideal(heights: tuple[int, ...]) -> str:
    def mono(i: int, j: int) -> str:
        parts = [v if e == 1 else f"{v}^{e}" for v, e in (("x", i), ("y", j)) if e]
        return "*".join(parts) or "1"

    return "<" + ", ".join(mono(i, j) for i, j in ideal_generators(heights)) + ">"


def arm_leg(heights: tuple[int, ...], box: Box) -> tuple[int, int]:
    heights = _check(heights)
    i, j = box
    if not (0 <= i < len(heights) and 0 <= j < heights[i]):
        raise MomentError(f"box {box} is not in the standard set")
    arm = heights[i] - j - 1
    leg = sum(1 for h in heights[i + 1 :] if h > j)
    return arm, leg


def tangent_weights(heights: tuple[int, ...]) -> list[tuple[int, int]]:
    """Torus weights of the tangent space, two per box."""
    out = []
    for box in standard_set(heights):
        arm, leg = arm_leg(heights, box)
        out.append((-leg, arm + 1))
        out.append((leg + 1, -arm))
    return sorted(out)


def moment_point(heights: tuple[int, ...]) -> tuple[int, int]:
    boxes = standard_set(heights)
    return sum(i for i, _ in boxes), sum(j for _, j in boxes)


def punctual_directions(n: int) -> list[tuple[int, int]]:
    """Edge directions out of the vertex ``<x, y^n>`` along the punctual locus."""
    if n < 1:
        raise MomentError("n must be positive")
    return [(1, -k) for k in range(1, n)]


@dataclass(frozen=True)
class FixedPoint:
    heights: tuple[int, ...]

    def __post_init__(self) -> None:
        _check(self.heights)

    @property
    def n(self) -> int:
        return sum(self.heights)

    @property
    def ideal(self) -> str:
        return format_ideal(self.heights)

    def to_json(self) -> dict:
        return {
            "partition": list(self.heights),
            "ideal": self.ideal,
            "standard_set": [list(b) for b in standard_set(self.heights)],
            "border": [list(b) for b in border(self.heights)],
            "moment_point": list(moment_point(self.heights)),
            "tangent_weights": [list(w) for w in tangent_weights(self.heights)],
        }


def enumerate_fixed_points(n: int) -> list[FixedPoint]:
    if n < 1:
        raise MomentError("n must be positive")
    return [FixedPoint(h) for h in partitions(n)]


def weights_multiset(heights: tuple[int, ...]) -> Counter:
    return Counter(tangent_weights(heights))

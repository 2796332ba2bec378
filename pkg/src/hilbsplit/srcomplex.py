"""Simplicial complexes, Stanley-Reisner ideals and vertex decomposability."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .groebner import Ideal
from .polyring import Polynomial, PolyError, RingContext


class ComplexError(PolyError):
    pass


Face = frozenset


def _maximal(faces: Iterable[frozenset]) -> list[frozenset]:
    faces = sorted(set(faces), key=len, reverse=True)
    out: list[frozenset] = []
    for f in faces:
        if not any(f <= g for g in out):
            out.append(f)
    return out


@dataclass(frozen=True)
class SimplicialComplex:
    """Facet description of a complex on an ordered vertex universe.

    An empty facet list is the void complex (no faces at all); a single empty
    facet is the complex whose only face is the empty set.
    """

    universe: tuple[str, ...]
    facets: tuple[tuple[str, ...], ...]

    def __init__(self, universe: Sequence[str], facets: Iterable[Iterable[str]]):
        universe = tuple(universe)
        pos = {v: i for i, v in enumerate(universe)}
        sets = [frozenset(f) for f in facets]
        for f in sets:
            unknown = f - pos.keys()
            if unknown:
                raise ComplexError(f"vertices {sorted(unknown)} not in universe")
        tops = _maximal(sets)
        canon = sorted(
            (tuple(sorted(f, key=pos.__getitem__)) for f in tops),
            key=lambda f: [pos[v] for v in f],
        )
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "facets", tuple(canon))

    @property
    def facet_sets(self) -> set[frozenset]:
        return {frozenset(f) for f in self.facets}

    @property
    def is_void(self) -> bool:
        return not self.facets

    @property
    def vertices(self) -> list[str]:
        used = set().union(*self.facet_sets) if self.facets else set()
        return [v for v in self.universe if v in used]

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) <= 1

    def is_simplex(self) -> bool:
        return len(self.facets) == 1

    def has_face(self, face: Iterable[str]) -> bool:
        face = frozenset(face)
        return any(face <= f for f in self.facet_sets)

    def faces(self) -> set[frozenset]:
        out: set[frozenset] = set()
        for f in self.facets:
            stack = [frozenset(f)]
            while stack:
                g = stack.pop()
                if g in out:
                    continue
                out.add(g)
                stack.extend(g - {v} for v in g)
        return out

    def relabel(self, mapping: dict[str, str], universe: Sequence[str] | None = None) -> "SimplicialComplex":
        return SimplicialComplex(
            universe or [mapping.get(v, v) for v in self.universe],
            [[mapping.get(v, v) for v in f] for f in self.facets],
        )

    def to_json(self) -> list[list[str]]:
        return [list(f) for f in self.facets]


def _check_vertex(cx: SimplicialComplex, v: str) -> None:
    if v not in cx.universe:
        raise ComplexError(f"unknown vertex {v!r}")


def delete(cx: SimplicialComplex, v: str) -> SimplicialComplex:
    """Faces not containing ``v``."""
    _check_vertex(cx, v)
    rest = [u for u in cx.universe if u != v]
    return SimplicialComplex(rest, [set(f) - {v} for f in cx.facets])


def link(cx: SimplicialComplex, v: str) -> SimplicialComplex:
    """Faces ``F`` without ``v`` such that ``F + v`` is a face."""
    _check_vertex(cx, v)
    rest = [u for u in cx.universe if u != v]
    return SimplicialComplex(rest, [set(f) - {v} for f in cx.facets if v in f])


def star(cx: SimplicialComplex, v: str) -> SimplicialComplex:
    """Faces ``F`` such that ``F + v`` is a face."""
    _check_vertex(cx, v)
    return SimplicialComplex(cx.universe, [f for f in cx.facets if v in f])


def cone(cx: SimplicialComplex, apex: str) -> SimplicialComplex:
    if apex in cx.universe:
        raise ComplexError("apex already in universe")
    return SimplicialComplex(cx.universe + (apex,), [set(f) | {apex} for f in cx.facets])


def boundary(cx: SimplicialComplex) -> SimplicialComplex:
    """Complex generated by the ridges lying in exactly one facet."""
    if not cx.is_pure():
        raise ComplexError("boundary needs a pure complex")
    counts: dict[frozenset, int] = {}
    for f in cx.facet_sets:
        for v in f:
            r = f - {v}
            counts[r] = counts.get(r, 0) + 1
    return SimplicialComplex(cx.universe, [r for r, c in counts.items() if c == 1])


# Stanley-Reisner correspondence ---------------------------------------------


def minimal_transversals(edges: Iterable[frozenset]) -> list[frozenset]:
    """Minimal sets meeting every edge (Berge's incremental method)."""
    current: set[frozenset] = {frozenset()}
    for edge in sorted({frozenset(e) for e in edges}, key=len):
        nxt: set[frozenset] = set()
        for tr in current:
            if tr & edge:
                nxt.add(tr)
            else:
                nxt.update(tr | {v} for v in edge)
        current = set(_minimal(nxt))
    return sorted(current, key=lambda s: (len(s), sorted(s)))


def _minimal(sets: Iterable[frozenset]) -> list[frozenset]:
    sets = sorted(set(sets), key=len)
    out: list[frozenset] = []
    for s in sets:
        if not any(o <= s for o in out):
            out.append(s)
    return out


def _supports(ideal: Ideal) -> list[frozenset]:
    names = ideal.ring.names
    out = []
    for g in ideal.gens:
        if not g.is_monomial():
            raise ComplexError(f"generator {g} is not a monomial")
        (m,) = g.terms
        if any(e > 1 for e in m):
            raise ComplexError(f"generator {g} is not squarefree")
        out.append(frozenset(names[i] for i, e in enumerate(m) if e))
    return out


def facets_from_squarefree_ideal(ideal: Ideal, universe: Sequence[str] | None = None) -> SimplicialComplex:
    """Facets are the complements of the minimal primes of the ideal."""
    universe = tuple(universe or ideal.ring.names)
    primes = minimal_transversals(_supports(ideal))
    return SimplicialComplex(universe, [set(universe) - p for p in primes])


def facets_from_supports(supports: Iterable[Iterable[str]], universe: Sequence[str]) -> SimplicialComplex:
    primes = minimal_transversals(frozenset(s) for s in supports)
    return SimplicialComplex(universe, [set(universe) - p for p in primes])


def minimal_nonfaces(cx: SimplicialComplex) -> list[frozenset]:
    everything = frozenset(cx.universe)
    return minimal_transversals(everything - f for f in cx.facet_sets)


def stanley_reisner_ideal(cx: SimplicialComplex, ring: RingContext | None = None, p: int = 2) -> Ideal:
    """Ideal generated by the minimal non-faces."""
    ring = ring or RingContext(cx.universe, p)
    gens = []
    for nf in minimal_nonfaces(cx):
        gens.append(Polynomial(ring, {ring.monomial({v: 1 for v in nf}): 1}))
    return Ideal(ring, gens)


# vertex decomposability -----------------------------------------------------


@dataclass
class VDResult:
    decomposable: bool
    witness: dict | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.decomposable


def _link_in_boundary(lk: SimplicialComplex, dl: SimplicialComplex) -> bool:
    del_facets = dl.facet_sets
    for g in lk.facet_sets:
        if sum(1 for f in del_facets if g <= f) != 1:
            return False
    return True


def is_vertex_decomposable(
    cx: SimplicialComplex, require_link_in_boundary: bool = False
) -> VDResult:
    """Exhaustive shedding-vertex search with memoization on facet sets.

    With ``require_link_in_boundary`` every shedding step must also have each
    facet of the link inside exactly one facet of the deletion, which is the
    gluing condition that makes a decomposition of balls a ball.
    """
    if not cx.is_pure():
        return VDResult(False, None, "complex is not pure")
    memo: dict[tuple, dict | None] = {}

    def search(c: SimplicialComplex) -> dict | None:
        key = c.facets
        if key in memo:
            return memo[key]
        if len(c.facets) <= 1:
            tree = {"simplex": list(c.facets[0]) if c.facets else None}
            memo[key] = tree
            return tree
        d = c.dimension
        found = None
        for v in c.vertices:
            dl = delete(c, v)
            if not dl.is_pure() or dl.dimension != d:
                continue
            lk = link(c, v)
            if require_link_in_boundary and not _link_in_boundary(lk, dl):
                continue
            sub_del = search(dl)
            if sub_del is None:
                continue
            sub_link = search(lk)
            if sub_link is None:
                continue
            found = {"vertex": v, "del": sub_del, "link": sub_link}
            break
        memo[key] = found
        return found

    tree = search(cx)
    if tree is None:
        return VDResult(False, None, "no shedding vertex works")
    return VDResult(True, tree)


def verify_witness(cx: SimplicialComplex, tree: dict, link_in_boundary: bool = True) -> bool:
    """Re-check a witness tree step by step without searching."""
    if "simplex" in tree:
        return len(cx.facets) <= 1 and (
            not cx.facets or list(cx.facets[0]) == tree["simplex"]
        )
    v = tree["vertex"]
    if v not in cx.vertices or not cx.is_pure():
        return False
    dl, lk = delete(cx, v), link(cx, v)
    if not dl.is_pure() or dl.dimension != cx.dimension:
        return False
    if link_in_boundary and not _link_in_boundary(lk, dl):
        return False
    return verify_witness(dl, tree["del"], link_in_boundary) and verify_witness(
        lk, tree["link"], link_in_boundary
    )


def shedding_order(tree: dict) -> list[str]:
    out = []
    while tree and "vertex" in tree:
        out.append(tree["vertex"])
        tree = tree["del"]
    return out

"""Full and partial words indexing the facets of degenerate strata.

Words are ASCII strings: ``a`` for a plain letter, ``A`` for a hatted
letter and ``u`` for an up-arrow.  Zone 1 is built from the segments ``au``,
``Au`` and ``aau``; zone 2 from ``aa`` and ``A``; an optional lone ``a`` may
close the word.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .hilbpatch import PatchError, StratumLabel, enumerate_strata, patch_names
from .srcomplex import SimplicialComplex


class WordError(PatchError):
    pass


ZONE1 = ("au", "Au", "aau")
ZONE2 = ("aa", "A")
_RANK1 = {seg: i for i, seg in enumerate(ZONE1)}
_RANK2 = {seg: i for i, seg in enumerate(ZONE2)}
_RAW = re.compile(r"^(?:[aA]u?)*$")


@dataclass(frozen=True, order=True)
class FullWord:
    zone1: tuple[str, ...]
    zone2: tuple[str, ...]
    trailing: bool = False

    def __post_init__(self) -> None:
        if any(seg not in _RANK1 for seg in self.zone1):
            raise WordError(f"bad zone-1 segment in {self.zone1}")
        if any(seg not in _RANK2 for seg in self.zone2):
            raise WordError(f"bad zone-2 segment in {self.zone2}")

    def __str__(self) -> str:
        return "".join(self.zone1) + "".join(self.zone2) + ("a" if self.trailing else "")

    @property
    def size(self) -> int:
        return letter_count(str(self))

    def sort_key(self) -> tuple:
        return (
            tuple(_RANK1[s] for s in self.zone1),
            tuple(_RANK2[s] for s in self.zone2),
            self.trailing,
        )

    @property
    def label(self) -> StratumLabel:
        alpha = self.zone1.count("au")
        beta = self.zone1.count("Au")
        gamma = self.zone1.count("aau")
        delta = self.zone2.count("aa")
        eps = self.zone2.count("A")
        s, t, extra = beta + gamma, alpha + gamma + delta, delta + eps
        if not self.trailing:
            return StratumLabel(s, extra, t, 0)
        return StratumLabel(s, extra + 1 if extra else 0, t, 1)


def letter_count(word: str) -> int:
    return sum(1 for ch in word if ch in "aA")


def validate_raw(word: str, n: int | None = None) -> str:
    """Check membership in the set of raw words; return the word."""
    if not isinstance(word, str) or not _RAW.match(word):
        raise WordError(f"malformed word {word!r}")
    if n is not None and letter_count(word) != n:
        raise WordError(f"word {word!r} has {letter_count(word)} letters, expected {n}")
    return word


def to_facet(word: FullWord | str, n: int | None = None) -> frozenset[str]:
    """Number the letters, turn each arrow into ``b_i`` of the letter to its left, drop hats."""
    text = validate_raw(str(word), n)
    out = set()
    i = 0
    for ch in text:
        if ch == "u":
            out.add(f"b{i}")
        else:
            i += 1
            if ch == "a":
                out.add(f"a{i}")
    return frozenset(out)


def _word_counts(label: StratumLabel) -> tuple[int, int, int, bool]:
    if label.flag == 0:
        extra = label.u
    else:
        extra = label.u - 1 if label.u else 0
    return label.s, label.t, extra, bool(label.flag)


def _multiset_perms(counts: dict[str, int], rank: dict[str, int]) -> list[tuple[str, ...]]:
    """Distinct orderings of a segment multiset, generated without repeats."""
    segs = sorted((s for s, k in counts.items() if k), key=rank.__getitem__)
    left = dict(counts)
    total = sum(counts.values())
    out: list[tuple[str, ...]] = []
    cur: list[str] = []

    def rec() -> None:
        if len(cur) == total:
            out.append(tuple(cur))
            return
        for s in segs:
            if left[s]:
                left[s] -= 1
                cur.append(s)
                rec()
                cur.pop()
                left[s] += 1

    rec()
    return out


@lru_cache(maxsize=None)
def _full_words(label: StratumLabel) -> tuple[FullWord, ...]:
    s, t, extra, trailing = _word_counts(label)
    words = []
    for gamma in range(min(s, t) + 1):
        beta = s - gamma
        for delta in range(min(extra, t - gamma) + 1):
            alpha, eps = t - gamma - delta, extra - delta
            z1 = _multiset_perms({"au": alpha, "Au": beta, "aau": gamma}, _RANK1)
            z2 = _multiset_perms({"aa": delta, "A": eps}, _RANK2)
            words.extend(FullWord(a, b, trailing) for a in z1 for b in z2)
    words.sort(key=FullWord.sort_key)
    return tuple(words)


def enumerate_full_words(label: StratumLabel | str) -> list[FullWord]:
    if isinstance(label, str):
        label = StratumLabel.parse(label)
    if not isinstance(label, StratumLabel):
        raise WordError(f"not a stratum label: {label!r}")
    return list(_full_words(label))


def stratum_complex(label: StratumLabel | str, n: int | None = None) -> SimplicialComplex:
    """Complex whose facets are the images of the full words of ``label``."""
    if isinstance(label, str):
        label = StratumLabel.parse(label)
    n = label.n if n is None else n
    if label.n > n:
        raise WordError(f"label {label} needs at least {label.n} points")
    return SimplicialComplex(patch_names(n), [to_facet(w) for w in enumerate_full_words(label)])


def raw_words(n: int) -> Iterator[str]:
    """Every raw word with ``n`` letters (there are ``4**n``)."""
    for pieces in itertools.product(("a", "au", "A", "Au"), repeat=n):
        yield "".join(pieces)


# classification ---------------------------------------------------------------


def _split_zones(word: str) -> tuple[str, str]:
    cut = word.rfind("u")
    return word[: cut + 1], word[cut + 1 :]


_BAD_ZONE1 = ("aaa", "Aa", "aA", "AA")


def _odd_run_before_hat(zone2: str) -> bool:
    return any(len(run) % 2 for run in re.findall(r"a*(?=A)", zone2) if run)


def _parse_zone1(zone1: str) -> tuple[str, ...]:
    return tuple(piece + "u" for piece in zone1.split("u")[:-1]) if zone1 else ()


def _parse_zone2(zone2: str) -> tuple[tuple[str, ...], bool]:
    segs: list[str] = []
    for run, hat in re.findall(r"(a*)(A?)", zone2):
        segs.extend(["aa"] * (len(run) // 2))
        if hat:
            segs.append("A")
        elif len(run) % 2:
            return tuple(segs), True
    return tuple(segs), False


@dataclass(frozen=True)
class WordClass:
    word: str
    full: bool
    label: StratumLabel
    filled: FullWord

    @property
    def kind(self) -> str:
        return "full" if self.full else "partial"


def is_full(word: str) -> bool:
    zone1, zone2 = _split_zones(validate_raw(word))
    letters1 = zone1.replace("u", "|")
    if any(bad in letters1 for bad in _BAD_ZONE1):
        return False
    return not _odd_run_before_hat(zone2)


def as_full_word(word: str) -> FullWord:
    if not is_full(word):
        raise WordError(f"{word!r} is a partial word")
    zone1, zone2 = _split_zones(word)
    segs2, trailing = _parse_zone2(zone2)
    return FullWord(_parse_zone1(zone1), segs2, trailing)


def fill_up(word: str) -> FullWord:
    """Smallest repair of a raw word into a full word with a larger facet.

    Zone 1 gains an arrow wherever a run stops being one of ``a``, ``A``,
    ``aa``; zone 2 turns a hat into a plain letter whenever the run of plain
    letters in front of it is odd.
    """
    zone1, zone2 = _split_zones(validate_raw(word))
    out1: list[str] = []
    for run in zone1.split("u")[:-1] if zone1 else []:
        piece = ""
        for ch in run:
            if piece and piece + ch not in ("a", "A", "aa"):
                out1.append(piece + "u")
                piece = ""
            piece += ch
        out1.append(piece + "u")
    out2: list[str] = []
    run = 0
    for ch in zone2:
        if ch == "A" and run % 2:
            ch = "a"
        out2.append(ch)
        run = run + 1 if ch == "a" else 0
    return as_full_word("".join(out1) + "".join(out2))


def classify_word(word: str) -> WordClass:
    filled = fill_up(word)
    return WordClass(word, is_full(word), filled.label, filled)


# recursion identities and containment ----------------------------------------


def recursion_identities(n: int) -> list[tuple[str, bool]]:
    """Check the word recursions that peel off the last letter.

    Returns ``(description, holds)`` pairs for every label of size ``n``
    where an identity applies.
    """

    def fw(s: int, u: int, t: int, flag: int) -> set[str]:
        if min(s, u, t) < 0:
            return set()
        if flag == 1 and u == 1:
            # a lone trailing a with no hats or aa pairs before it
            u = 0
        return {str(w) for w in enumerate_full_words(StratumLabel(s, u, t, flag))}

    out = []
    for L in enumerate_strata(n):
        s, u, t, flag = L.s, L.u, L.t, L.flag
        lhs = fw(s, u, t, flag)
        if flag == 1 and u >= 2:
            rhs = {w + "a" for w in fw(s, u - 1, t, 0)}
        elif flag == 1:
            if s + t == 0:
                continue
            rhs = {w + "a" for w in fw(s, 0, t, 0)}
        elif u >= 1:
            rhs = {w + "A" for w in fw(s, u - 1, t, 0)} | {w + "a" for w in fw(s, u, t - 1, 1)}
        else:
            rhs = {w + "u" for w in fw(s, 0, t - 1, 1)} | {w + "u" for w in fw(s - 1, 1, t, 0)}
        out.append((f"FW{L}", lhs == rhs))
    return out


def complex_contains(small: StratumLabel, big: StratumLabel, n: int) -> bool:
    """Face containment of the word complexes of two strata."""
    inner = stratum_complex(small, n).facet_sets
    outer = stratum_complex(big, n).facet_sets
    return all(any(f <= g for g in outer) for f in inner)


def containment_poset(n: int) -> dict[StratumLabel, set[StratumLabel]]:
    """Map each stratum to the strata strictly containing it."""
    labels = enumerate_strata(n)
    cx = {L: stratum_complex(L, n).facet_sets for L in labels}
    up: dict[StratumLabel, set[StratumLabel]] = {L: set() for L in labels}
    for small in labels:
        for big in labels:
            if small != big and all(any(f <= g for g in cx[big]) for f in cx[small]):
                up[small].add(big)
    return up


def cover_relations(up: dict[StratumLabel, set[StratumLabel]]) -> list[tuple[StratumLabel, StratumLabel]]:
    covers = []
    for small, bigs in up.items():
        for big in bigs:
            if not any(big in up[mid] for mid in bigs if mid != big):
                covers.append((small, big))
    return sorted(covers)


def is_graded(up: dict[StratumLabel, set[StratumLabel]]) -> bool:
    return all(b.dimension == a.dimension + 1 for a, b in cover_relations(up))

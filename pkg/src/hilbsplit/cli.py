"""Command-line entry point: ``hilbsplit <command> [flags]``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
invalid input.  ``--json`` prints a run report instead of plain text.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from . import __version__
from .frobenius import SplittingDatum, b0_coefficient, is_compatibly_split
from .groebner import initial_ideal
from .hilbpatch import (
    LEX,
    REVLEX,
    PatchError,
    PatchRing,
    StratumLabel,
    applicable_directions,
    build_matrix,
    census,
    check_degeneration,
    check_specialization,
    enumerate_strata,
    non_split_ideal,
    origin_in_stratum,
    random_points,
    splitting_polynomial,
    square_census,
    stratum_contained,
    stratum_ideal,
)
from .moment import enumerate_fixed_points, punctual_directions
from .polyring import PolyError, format_poly, initial_form, leading_monomial
from .srcomplex import facets_from_squarefree_ideal, is_vertex_decomposable, verify_witness
from .words import (
    containment_poset,
    cover_relations,
    enumerate_full_words,
    is_graded,
    recursion_identities,
    stratum_complex,
    to_facet,
)

DEFAULT_SEED = 20240601
DEFAULT_P = 5
SPECIALIZE_P = 101
SPECIALIZE_POINTS = 100
MAX_PATCH_N = 8
EXACT_N = 3
FALLBACK_N = 5


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: dict
    checks: list[dict] = field(default_factory=list)
    result: Any = None
    wall_time: float | None = None

    def check(self, name: str, ok: bool, witness: Any = None) -> bool:
        entry: dict = {"name": name, "pass": bool(ok)}
        if not ok and witness is not None:
            entry["witness"] = witness
        self.checks.append(entry)
        return ok

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "pass": self.passed,
            "checks": self.checks,
            "result": self.result,
            "wall_time": self.wall_time,
        }


def thread_count() -> int:
    raw = os.environ.get("HILBSPLIT_THREADS")
    if raw is None or raw == "":
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"HILBSPLIT_THREADS must be a positive integer, got {raw!r}")
    if value < 1:
        raise UsageError(f"HILBSPLIT_THREADS must be a positive integer, got {raw!r}")
    return value


def pmap(fn: Callable, items: Iterable) -> list:
    """Ordered map, run on up to ``HILBSPLIT_THREADS`` workers."""
    items = list(items)
    workers = min(thread_count(), len(items) or 1)
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _label(text: str, n: int) -> StratumLabel:
    try:
        label = StratumLabel.parse(text)
    except PatchError as exc:
        raise UsageError(str(exc))
    if label.n != n:
        raise UsageError(f"label {label} has {label.n} points, not {n}")
    if label not in enumerate_strata(n):
        raise UsageError(f"{label} is not a stratum label")
    return label


def _need(n: int, low: int, high: int, what: str = "--n") -> None:
    if not low <= n <= high:
        raise UsageError(f"{what} must lie in {low}..{high}")


def _prime(p: int) -> int:
    if p < 3 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise UsageError("--p must be an odd prime")
    return p


def _facets(cx) -> list[list[str]]:
    return [list(f) for f in cx.facets]


# commands ----------------------------------------------------------------------


def cmd_patch(args, report: RunReport) -> list[str]:
    _need(args.n, 1, MAX_PATCH_N)
    patch = PatchRing(args.n, args.p)
    n = args.n
    if args.emit == "fn":
        f = splitting_polynomial(patch)
        text = format_poly(f)
        lead = leading_monomial(f, patch.order)
        expected = patch.ring.monomial({v: 1 for v in patch.ring.names})
        report.check("init(f_n) = a1*b1*...*an*bn", lead == expected, str(initial_form(f, patch.order)))
        report.check("deg f_n = 2n", f.total_degree() == 2 * n, f.total_degree())
        report.result = {"polynomial": text, "terms": len(f)}
        return [text]
    if args.emit == "matrix":
        matrix = build_matrix(patch)
        rows = [[format_poly(e) for e in row] for row in matrix]
        bad = [pt for pt in random_points(n, SPECIALIZE_P, SPECIALIZE_POINTS, args.seed)
               if not check_specialization(n, pt, SPECIALIZE_P)]
        report.check(
            f"specialization at {SPECIALIZE_POINTS} points over F_{SPECIALIZE_P}",
            not bad,
            [list(pt) for pt in bad[:3]],
        )
        report.result = {"matrix": rows}
        return [" | ".join(row) for row in rows]
    weights = {v: list(w) for v, w in zip(patch.ring.names, patch.ring.grading)}
    positive = {v: patch.ring.positive_degree(patch.ring.monomial({v: 1})) for v in patch.ring.names}
    f = splitting_polynomial(patch)
    report.check("f_n is torus homogeneous", f.is_homogeneous())
    report.result = {"weights": weights, "positive_degree": positive}
    return [f"{v}: weight {tuple(weights[v])}, positive degree {positive[v]}" for v in patch.ring.names]


def cmd_strata(args, report: RunReport) -> list[str]:
    _need(args.n, 1, MAX_PATCH_N)
    n = args.n
    labels = enumerate_strata(n)
    counts = census(n)
    report.check("strata per dimension form a square", counts == square_census(n), counts)
    lines = [f"{L}  dim {L.dimension}" for L in labels]
    result: dict = {
        "strata": [{"label": str(L), "dimension": L.dimension} for L in labels],
        "census": {str(d): c for d, c in counts.items()},
    }
    if args.poset:
        up = containment_poset(n)
        covers = cover_relations(up)
        report.check("containment poset is graded", is_graded(up),
                     [[str(a), str(b)] for a, b in covers if b.dimension != a.dimension + 1])
        if n <= EXACT_N:
            patch = PatchRing(n, args.p)
            pairs = [(a, b) for a in labels for b in labels if a != b]
            exact = pmap(lambda ab: stratum_contained(patch, *ab), pairs)
            wrong = [[str(a), str(b)] for (a, b), ok in zip(pairs, exact) if ok != (b in up[a])]
            report.check("word containment agrees with ideal containment", not wrong, wrong)
        result["covers"] = [[str(a), str(b)] for a, b in covers]
        lines += [f"{a} < {b}" for a, b in covers]
    report.result = result
    return lines


def cmd_degenerate(args, report: RunReport) -> list[str]:
    _need(args.n, 2, FALLBACK_N)
    n = args.n
    label = _label(args.stratum, n)
    if args.direction not in applicable_directions(label):
        raise UsageError(f"direction {args.direction} does not apply to {label}")
    if n <= EXACT_N:
        patch = PatchRing(n, args.p)
        res = check_degeneration(patch, label, args.direction)
        report.check(
            f"rule {res.rule}: init equals the predicted intersection",
            res.holds,
            {"initial": [str(g) for g in res.initial.gens], "predicted": [str(g) for g in res.predicted.gens]},
        )
        report.result = {
            "method": "groebner",
            "rule": res.rule,
            "components": [str(c) for c in res.components],
        }
        return [f"rule {res.rule}"] + [f"  {c}" for c in res.components]
    # beyond the exact range only the facet-level shadow of the rules is checked
    ident = [(d, ok) for d, ok in recursion_identities(n) if d == f"FW{label}"]
    ok = all(h for _, h in ident)
    report.check("word recursion for the stratum", ok)
    report.result = {"method": "word-recursion", "identities": len(ident)}
    return [f"fallback to word recursion for n={n}: {'holds' if ok else 'fails'}"]


def cmd_words(args, report: RunReport) -> list[str]:
    _need(args.n, 1, MAX_PATCH_N)
    n = args.n
    label = _label(args.stratum, n)
    words = enumerate_full_words(label)
    facets = [sorted(to_facet(w), key=stratum_complex(label).universe.index) for w in words]
    report.check("facets are distinct", len({tuple(f) for f in facets}) == len(facets))
    if n <= EXACT_N:
        patch = PatchRing(n, args.p)
        init = initial_ideal(stratum_ideal(patch, label), patch.order)
        cx = facets_from_squarefree_ideal(init)
        report.check(
            "words match the facets of the initial ideal",
            cx.facet_sets == stratum_complex(label).facet_sets,
            _facets(cx),
        )
    report.result = {"words": [str(w) for w in words], "facets": facets}
    return [f"{w}  {{{', '.join(f)}}}" for w, f in zip(words, facets)]


def in_ball_family(label: StratumLabel) -> bool:
    return label.t == 0 or label.s <= 1


def cmd_vd(args, report: RunReport) -> list[str]:
    _need(args.n, 1, FALLBACK_N + 1)
    label = _label(args.stratum, args.n)
    cx = stratum_complex(label)
    plain = is_vertex_decomposable(cx)
    ball = is_vertex_decomposable(cx, require_link_in_boundary=True)
    family = in_ball_family(label)
    if family:
        report.check("ball certificate found", bool(ball))
        if ball:
            report.check("certificate re-verifies", verify_witness(cx, ball.witness))
    report.result = {
        "facets": _facets(cx),
        "vertex_decomposable": bool(plain),
        "ball_certificate": bool(ball),
        "in_ball_family": family,
        "witness": ball.witness if ball else plain.witness,
    }
    return [
        f"facets: {len(cx.facets)}",
        f"vertex decomposable: {bool(plain)}",
        f"ball certificate: {bool(ball)}",
    ]


def cmd_split_check(args, report: RunReport) -> list[str]:
    _need(args.n, 1, 4)
    n, p = args.n, _prime(args.p)
    if args.all == bool(args.stratum):
        raise UsageError("give exactly one of --stratum or --all")
    patch = PatchRing(n, p)
    datum = SplittingDatum(splitting_polynomial(patch))
    report.check("f_n defines a splitting", datum.is_splitting())
    labels = enumerate_strata(n) if args.all else [_label(args.stratum, n)]
    results = pmap(lambda L: is_compatibly_split(stratum_ideal(patch, L), datum), labels)
    lines = []
    for L, res in zip(labels, results):
        report.check(f"{L} compatibly split", bool(res), res.witness())
        lines.append(f"{L}  {'split' if res else 'NOT split'}")
    passed = sum(1 for r in results if r)
    report.result = {"passed": passed, "total": len(labels)}
    lines.append(f"{passed}/{len(labels)} strata pass")
    return lines


def cmd_non_split(args, report: RunReport) -> list[str]:
    _need(args.n, 3, 4)
    patch = PatchRing(args.n, _prime(args.p))
    datum = SplittingDatum(splitting_polynomial(patch))
    lines = []
    out = []
    for i in range(1, args.n - 1):
        res = is_compatibly_split(non_split_ideal(patch, i), datum)
        report.check(f"J_{i} fails with a witness", not res and res.witness() is not None)
        out.append({"i": i, "witness": res.witness()})
        lines.append(f"J_{i}: {'split' if res else 'not split'}  {res.witness()}")
    report.result = out
    return lines


def cmd_conjecture_b0(args, report: RunReport) -> list[str]:
    p = _prime(args.p)
    coeff = b0_coefficient(p)
    report.check("coefficient is 1 mod p", coeff == 1, coeff)
    report.result = {"coefficient": coeff, "pass": coeff == 1}
    return [f"coefficient {coeff} (mod {p})"]


def cmd_moment(args, report: RunReport) -> list[str]:
    _need(args.n, 1, 12)
    points = enumerate_fixed_points(args.n)
    report.check("2n tangent weights at every fixed point",
                 all(len(fp.to_json()["tangent_weights"]) == 2 * args.n for fp in points))
    patch_ok = [str(L) for L in enumerate_strata(args.n)
                if args.n <= 6 and not origin_in_stratum(PatchRing(args.n, args.p), L)]
    report.check("<x, y^n> lies in every stratum", not patch_ok, patch_ok)
    report.result = {
        "fixed_points": [fp.to_json() for fp in points],
        "punctual_directions": [list(d) for d in punctual_directions(args.n)],
    }
    return [f"{fp.ideal}  moment {tuple(fp.to_json()['moment_point'])}" for fp in points]


COMMANDS: dict[str, Callable] = {
    "patch": cmd_patch,
    "strata": cmd_strata,
    "degenerate": cmd_degenerate,
    "words": cmd_words,
    "vd": cmd_vd,
    "split-check": cmd_split_check,
    "non-split": cmd_non_split,
    "conjecture-b0": cmd_conjecture_b0,
    "moment": cmd_moment,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON run report")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for random specializations")
    common.add_argument("--p", type=int, default=DEFAULT_P, help="characteristic (odd prime)")

    parser = argparse.ArgumentParser(prog="hilbsplit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help)

    sp = add("patch", "splitting polynomial, coefficient matrix or grading")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--emit", choices=["fn", "matrix", "grading"], default="fn")

    sp = add("strata", "stratum labels, census and containment poset")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--poset", action="store_true")

    sp = add("degenerate", "check a degeneration rule")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--stratum", required=True, help='label such as "1,1,1,+0"')
    sp.add_argument("--direction", choices=[REVLEX, LEX], required=True)

    sp = add("words", "full words and facets of a stratum")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--stratum", required=True)

    sp = add("vd", "vertex decomposability of a stratum complex")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--stratum", required=True)

    sp = add("split-check", "compatibility of stratum ideals with the splitting")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--stratum")
    sp.add_argument("--all", action="store_true")

    sp = add("non-split", "ideals expected to fail compatibility")
    sp.add_argument("--n", type=int, required=True)

    add("conjecture-b0", "coefficient evidence on the five-point chart")

    sp = add("moment", "torus fixed points and moment data")
    sp.add_argument("--n", type=int, required=True)
    return parser


def _text(report: RunReport, lines: Sequence[str]) -> str:
    out = list(lines)
    for c in report.checks:
        out.append(f"[{'PASS' if c['pass'] else 'FAIL'}] {c['name']}")
        if "witness" in c:
            out.append(f"       witness: {json.dumps(c['witness'])}")
    return "\n".join(out)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    inputs = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "json")}
    report = RunReport(args.command, inputs)
    start = time.perf_counter()
    try:
        thread_count()
        lines = COMMANDS[args.command](args, report)
    except (UsageError, PolyError) as exc:
        print(f"hilbsplit: error: {exc}", file=sys.stderr)
        return 2
    if os.environ.get("HILBSPLIT_TIMING"):
        report.wall_time = round(time.perf_counter() - start, 3)
    if args.json:
        print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    else:
        print(_text(report, lines))
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())

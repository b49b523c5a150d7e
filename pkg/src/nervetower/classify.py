"""Certification layer: overlap structure checks and theorem-shaped verdicts.

Three checkers inspect a system's depth-1 overlaps:

* check_postunbranched: does each ordered pair of touching cells pull its
  overlap back into a single address cell?  Certified only up to a depth and
  a point budget; refuted by exhibiting a branching witness.
* check_singleton_overlaps: is each pairwise overlap a single point?
* check_h1_infinite_conditions: the four pivot conditions that force the
  first cohomology of the limit to have infinite rank.

verify_puthm then replays every finite-depth identity and bound that a
postunbranched certificate promises against a computed Betti table.  A
failure there means either a computational bug or a wrong certificate, and
the report says so.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Optional

from . import oracles
from .components import components as nerve_components
from .exactgeom import Point2, common_point_exists, intersection_cycle
from .homology import BettiTable
from .nerve import build_nerve
from .oracles import (
    Budget,
    ConsistencyError,
    SpecError,
    SymbolicPUBackend,
    SystemSpec,
    Verdict,
    cell_envelope,
    cells_containing_point,
    certificate_points,
)
from .words import Address, Word

PairStatus = Literal["ok", "empty", "violated", "unknown"]


@dataclass
class PairReport:
    pair: tuple[int, int]
    status: PairStatus
    points: tuple[Point2, ...] = ()
    prefix: Optional[Word] = None        # the unique address prefix, to the checked depth
    address: Optional[Address] = None    # when the pulled-back point has a known periodic tail
    detail: str = ""


@dataclass
class PUReport:
    name: str
    depth: int
    status: Literal["postunbranched", "not-postunbranched", "unknown"]
    mechanism: str
    pairs: dict[tuple[int, int], PairReport]
    witness: str = ""

    def pair_status(self, i: int, j: int) -> PairStatus:
        return self.pairs[(i, j)].status


def check_postunbranched(spec: SystemSpec, depth: int = 4,
                         budget: Budget = Budget()) -> PUReport:
    """Certify or refute the unique-address property of every overlap, to `depth`.

    Geometric systems are checked point by point: every certified overlap
    point is pulled back through the cell map and must sit in exactly one
    depth-d cell for every d <= depth, the same one for all points.  The
    symbolic backend carries the property by construction; only its address
    consistency is re-validated.  Table systems have no geometry to check.
    """
    if depth < 1:
        raise SpecError("check depth must be at least 1")
    if isinstance(spec.backend, SymbolicPUBackend):
        return _symbolic_pu_report(spec, depth)
    if not spec.is_geometric:
        pairs = {}
        return PUReport(spec.name, depth, "unknown", "no-geometry", pairs,
                        witness="table backends carry no geometry to certify")

    pairs: dict[tuple[int, int], PairReport] = {}
    any_unknown = False
    violation = ""
    for i in range(1, spec.m + 1):
        for j in range(1, spec.m + 1):
            if i == j:
                continue
            report = _check_pair(spec, i, j, depth, budget)
            pairs[(i, j)] = report
            if report.status == "violated" and not violation:
                violation = f"pair ({i},{j}): {report.detail}"
            any_unknown = any_unknown or report.status == "unknown"
    if violation:
        return PUReport(spec.name, depth, "not-postunbranched", "branching-witness",
                        pairs, witness=violation)
    if any_unknown:
        return PUReport(spec.name, depth, "unknown", "budget-exhausted", pairs)
    return PUReport(spec.name, depth, "postunbranched", "checked-to-depth", pairs)


def _symbolic_pu_report(spec: SystemSpec, depth: int) -> PUReport:
    oracles.generate_pu_nerve(spec, depth)  # re-validates address consistency
    backend = spec.backend
    pairs = {
        pair: PairReport(pair, "ok", address=addr, prefix=None,
                         detail="address stored by the backend")
        for pair, addr in sorted(backend.addresses.items())
    }
    return PUReport(spec.name, depth, "postunbranched", "by-construction", pairs)


def _check_pair(spec: SystemSpec, i: int, j: int, depth: int, budget: Budget) -> PairReport:
    wi, wj = Word((i,), spec.m), Word((j,), spec.m)
    verdict = oracles.cells_intersect(spec, (wi, wj), budget)
    if verdict.kind == "disjoint":
        return PairReport((i, j), "empty")
    if verdict.kind == "unknown":
        return PairReport((i, j), "unknown", detail=verdict.note)

    points = tuple(certificate_points(spec, (wi, wj), budget))
    pull = oracles.word_map(spec, wi).inverse()
    tails = oracles._tail_table(spec, budget)
    shared_prefix: Optional[Word] = None
    address: Optional[Address] = None
    for p in points:
        q = pull(p)
        prefix = None
        for d in range(1, depth + 1):
            containing, undecided = cells_containing_point(spec, q, d, budget)
            if undecided:
                return PairReport((i, j), "unknown", points,
                                  detail=f"membership undecided for cells {[str(u) for u in undecided]}")
            if not containing:
                raise ConsistencyError(
                    f"pulled-back overlap point {q} of pair ({i},{j}) lies in no cell")
            if len(containing) > 1:
                cells = ", ".join(str(u) for u in containing)
                return PairReport((i, j), "violated", points,
                                  detail=f"point ({p.x}, {p.y}) pulls back into depth-{d} "
                                         f"cells {cells}")
            prefix = containing[0]
        if shared_prefix is None:
            shared_prefix = prefix
            address = tails.get(q)
        elif prefix != shared_prefix:
            return PairReport((i, j), "violated", points,
                              detail=f"overlap points pull back into distinct address cells "
                                     f"{shared_prefix} and {prefix}")
    return PairReport((i, j), "ok", points, prefix=shared_prefix, address=address)


SingletonStatus = Literal["empty", "singleton", "unknown"]


@dataclass
class SingletonReport:
    name: str
    pairs: dict[tuple[int, int], SingletonStatus]
    all_small: bool  # every pair empty or a single point
    detail: str = ""


def check_singleton_overlaps(spec: SystemSpec, budget: Budget = Budget()) -> SingletonReport:
    """Certify that each pairwise overlap of depth-1 cells is empty or one point.

    A pair is a certified singleton when, at some refinement depth, every
    surviving envelope intersection is exactly the certificate point.
    """
    if not spec.is_geometric:
        raise SpecError("singleton certification needs the geometric backend")
    pairs: dict[tuple[int, int], SingletonStatus] = {}
    for i in range(1, spec.m + 1):
        for j in range(i + 1, spec.m + 1):
            pairs[(i, j)] = _singleton_status(spec, i, j, budget)
    all_small = all(s in ("empty", "singleton") for s in pairs.values())
    return SingletonReport(spec.name, pairs, all_small)


def _singleton_status(spec: SystemSpec, i: int, j: int, budget: Budget) -> SingletonStatus:
    wi, wj = Word((i,), spec.m), Word((j,), spec.m)
    verdict = oracles.cells_intersect(spec, (wi, wj), budget)
    if verdict.kind == "disjoint":
        return "empty"
    if verdict.kind == "unknown":
        return "unknown"
    point = verdict.point
    alive = [(wi, wj)]
    for _ in range(budget.refine_depth + 1):
        regions = [intersection_cycle((cell_envelope(spec, u), cell_envelope(spec, v)))
                   for (u, v) in alive]
        if all(set(region) == {point} for region in regions):
            return "singleton"
        frontier = []
        for (u, v) in alive:
            for su in range(1, spec.m + 1):
                for sv in range(1, spec.m + 1):
                    cu, cv = u.extended(su), v.extended(sv)
                    if common_point_exists(
                            [cell_envelope(spec, cu), cell_envelope(spec, cv)]):
                        frontier.append((cu, cv))
        if not frontier or len(frontier) > 4096:
            return "unknown"
        alive = frontier
    return "unknown"


@dataclass
class ConditionResult:
    ok: bool
    witness: str = ""


@dataclass
class PivotReport:
    """The four structural conditions that force infinite limit rank at r = 1."""

    name: str
    pivot: int
    conditions: dict[str, ConditionResult]
    conclusion: bool
    conditional: bool  # True when undecided simplices could change an answer
    detail: str = ""


def check_h1_infinite_conditions(spec: SystemSpec, pivot: int,
                                 budget: Budget = Budget()) -> PivotReport:
    if not 1 <= pivot <= spec.m:
        raise SpecError(f"pivot {pivot} outside 1..{spec.m}")
    n1 = build_nerve(spec, 1, dim_cap=2, budget=budget)
    n2 = build_nerve(spec, 2, dim_cap=2, budget=budget)
    conditional = bool(n1.uncertain or n2.uncertain)

    conditions: dict[str, ConditionResult] = {}

    count = nerve_components(n1).count
    conditions["base-connected"] = ConditionResult(
        count == 1, f"depth-1 nerve has {count} component(s)")

    pp = n2.index_of(Word((pivot, pivot), spec.m))
    offender = ""
    for (x, y) in n2.simplices.get(1, ()):
        if pp in (x, y):
            other = n2.words[y if x == pp else x]
            if other.symbols[0] != pivot:
                offender = str(other)
                break
    conditions["pivot-block-isolated"] = ConditionResult(
        offender == "",
        f"cell {pivot}{pivot} touches cell {offender}" if offender
        else f"cell {pivot}{pivot} touches only cells inside block {pivot}")

    edges = n1.edge_sets()
    cycle_witness = ""
    for j2 in range(1, spec.m + 1):
        for j3 in range(1, spec.m + 1):
            if len({pivot, j2, j3}) != 3:
                continue
            if ({frozenset((pivot - 1, j2 - 1)), frozenset((j2 - 1, j3 - 1)),
                 frozenset((j3 - 1, pivot - 1))} <= edges):
                cycle_witness = f"{pivot}-{j2}-{j3}-{pivot}"
                break
        if cycle_witness:
            break
    conditions["pivot-cycle"] = ConditionResult(
        cycle_witness != "",
        f"cycle {cycle_witness}" if cycle_witness else "no 3-cycle through the pivot")

    triangle = ""
    for s in n1.simplices.get(2, ()):
        if pivot - 1 in s:
            triangle = "{" + ",".join(str(v + 1) for v in s) + "}"
            break
    conditions["pivot-triangle-free"] = ConditionResult(
        triangle == "",
        f"2-simplex {triangle} contains the pivot" if triangle
        else "no depth-1 2-simplex contains the pivot")

    conclusion = all(c.ok for c in conditions.values()) and not conditional
    detail = ("all four conditions hold: the limit's first cohomology has infinite rank "
              "and a_1 grows strictly" if conclusion else
              "conditions not established")
    return PivotReport(spec.name, pivot, conditions, conclusion, conditional, detail)


@dataclass
class TheoremCheckItem:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class TheoremCheck:
    name: str
    applicable: bool
    passed: Optional[bool]
    checks: list[TheoremCheckItem] = field(default_factory=list)
    predictions: list[str] = field(default_factory=list)
    note: str = ""


def verify_puthm(table: BettiTable) -> TheoremCheck:
    """Replay the certified-recurrence identities and bounds against a Betti table.

    Only meaningful when the table was computed under a postunbranched
    certificate; otherwise the check is reported as not applicable.
    """
    if table.flags.get("postunbranched") is not True:
        return TheoremCheck("postunbranched-recurrences", False, None,
                            note="no postunbranched certificate; nothing to verify")
    m = table.m
    depth = table.depth
    checks: list[TheoremCheckItem] = []
    predictions: list[str] = []

    def add(name: str, ok: bool, detail: str = "") -> None:
        checks.append(TheoremCheckItem(name, ok, detail))

    a = table.a
    lam = table.lam
    connected1 = table.component_counts[0] == 1

    for r in table.exact_dims:
        if r < 2:
            continue
        seq = table.sequence(r)
        ok = all(seq[k] == m * seq[k - 1] + seq[0] for k in range(1, depth))
        add(f"higher-recurrence-r{r}", ok, f"a_{r} = {seq}")

    if 1 in table.exact_dims and 0 in table.exact_dims:
        a1 = table.sequence(1)
        a0 = table.sequence(0)
        if lam:
            ok = all(a1[k] == m * a1[k - 1] + lam[k + 1] for k in range(1, depth))
            add("a1-lambda-recurrence", ok, f"a_1 = {a1}, lambda = {lam}")
            ok = all(a0[k] == m * a0[k - 1] - m + a0[0] - a1[0] + lam[k + 1]
                     for k in range(1, depth))
            add("a0-lambda-recurrence", ok, f"a_0 = {a0}")
        ok = all(a0[k] == m * a0[k - 1] - m + a0[0] - a1[0] - m * a1[k - 1] + a1[k]
                 for k in range(1, depth))
        add("combined-recurrence", ok)
        ok = all(m * a1[k - 1] <= a1[k] <= m * a1[k - 1] + a1[0] for k in range(1, depth))
        add("a1-sandwich", ok)
        ok = all(m * a0[k - 1] - m + a0[0] - a1[0] <= a0[k] <= m * a0[k - 1] - m + a0[0]
                 for k in range(1, depth))
        add("a0-sandwich", ok)
        if lam:
            ks = sorted(lam)
            ok = all(lam[ks[t + 1]] <= lam[ks[t]] for t in range(len(ks) - 1)) \
                and lam[ks[0]] <= a1[0]
            add("lambda-chain", ok, f"lambda = {[lam[k] for k in ks]} <= a_{{1,1}} = {a1[0]}")
        if connected1 and lam:
            ok = all(lam[k] == a1[0] for k in sorted(lam))
            add("connected-lambda-constant", ok)

        s = m - a0[0] + a1[0]
        predictions.append(f"depth-1 defect m - a_0 + a_1 = {s}")
        bound = Fraction(s, m - 1)
        if depth >= 2 and lam.get(2) == 0:
            predictions.append("depth-2 image of first cohomology vanishes: "
                               "the limit's first cohomology is 0")
        if connected1:
            predictions.append(
                "connected base: limit a_1 is "
                + ("0" if a1[0] == 0 else "infinite"))
        if bound.denominator != 1:
            predictions.append(
                f"stationary bound {bound} is not an integer: "
                "limit a_0 or limit a_1 must be infinite")
        if a0[0] > bound:
            predictions.append(
                f"depth-1 count {a0[0]} exceeds the stationary bound {bound}: "
                "infinitely many components")
        if 2 <= m <= 6 and not connected1:
            predictions.append("at most 6 generators and a disconnected base: "
                               "infinitely many components")
        v0, v1 = table.verdicts.get(0), table.verdicts.get(1)
        if v0 and v0.status == "finite" and table.b1_infinity.status == "finite":
            ok = s == (m - 1) * v0.value + table.b1_infinity.value
            add("finite-limit-identity", ok,
                f"{s} == {m - 1} * {v0.value} + {table.b1_infinity.value}")

    for r in table.exact_dims:
        if r >= 2:
            predictions.append(
                f"limit a_{r} is " + ("0" if a[(r, 1)] == 0 else "infinite"))

    passed = all(c.ok for c in checks)
    note = "" if passed else (
        "an identity failed: either a computation is wrong or the postunbranched "
        "certificate does not actually hold")
    return TheoremCheck("postunbranched-recurrences", True, passed, checks,
                        predictions, note)

"""Cell-intersection oracles for self-similar systems.

A system is m generator maps plus an orientation.  The depth-k cell of a word
w = w_1 ... w_k is the image of the invariant set under the composition
c_{w_1} o ... o c_{w_k}, where c_j is the generator itself for forward systems
and its inverse for backward systems (first symbol outermost).  Nerve
construction reduces to one question: do the cells of a tuple of words share
a point?

Three backends answer it:

* geometric: exact rational affine maps in the plane.  Intersections are
  certified by exhibiting a common eventually periodic limit point;
  disjointness by refining cells until convex envelopes separate.  Queries
  that neither side settles within budget return Unknown rather than a guess.
* table: the complex is given explicitly per depth (for systems whose maps
  are not affine); queries beyond the stored depth are Unknown.
* symbolic: the complex at depth 1 plus one overlap address per ordered pair,
  from which every deeper complex is generated.  This backend assumes the
  single-address property that the generation rule requires, and never
  answers Unknown.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Literal, Mapping, Optional, Sequence, Union

from .exactgeom import (
    ConvexPolygon,
    Point2,
    RationalAffineMap,
    check_envelope,
    common_point_exists,
    compose,
    map_polygon,
)
from .words import Address, Word, concat, enumerate_words, truncate


class SpecError(ValueError):
    """The system description itself is invalid."""


class ConsistencyError(RuntimeError):
    """Computed data contradicts an invariant; indicates a bug, not bad input."""


class AddressConsistencyError(SpecError):
    """Overlap addresses disagree on a simplex lift."""

    def __init__(self, simplex: Iterable[int], vertex: int, depth: int, prefixes: Iterable[Word]):
        self.simplex = tuple(sorted(simplex))
        self.vertex = vertex
        self.depth = depth
        self.prefixes = tuple(prefixes)
        super().__init__(
            f"simplex {self.simplex}: vertex {vertex} lifts ambiguously at depth {depth}: "
            + ", ".join(str(p) for p in self.prefixes)
        )


@dataclass(frozen=True)
class Budget:
    """Search bounds for the geometric backend.

    refine_depth bounds the subdivision rounds used to separate cells;
    cert_preperiod_max / cert_period_max bound the eventually periodic tails
    enumerated when hunting for a common limit point.
    """

    refine_depth: int = 8
    cert_period_max: int = 2
    cert_preperiod_max: int = 1

    def __post_init__(self) -> None:
        if self.refine_depth < 0 or self.cert_period_max < 1 or self.cert_preperiod_max < 0:
            raise SpecError(f"nonsensical budget {self}")


# A refinement frontier larger than this aborts to Unknown; past it the
# subdivision is fighting a genuinely fat overlap and will not separate.
_ALIVE_CAP = 4096

VerdictKind = Literal["disjoint", "intersect", "unknown"]


@dataclass(frozen=True)
class Verdict:
    """Answer to "do these cells share a point?", with its evidence.

    disjoint: certified empty after `depth` subdivision rounds.
    intersect: certified nonempty; geometric verdicts carry the common point
      and one full address per queried word, combinatorial backends carry
      membership only.
    unknown: neither certificate found within `budget`.
    """

    kind: VerdictKind
    source: str
    depth: Optional[int] = None
    point: Optional[Point2] = None
    addresses: Optional[tuple[Address, ...]] = None
    budget: Optional[Budget] = None
    note: str = ""

    @staticmethod
    def disjoint(depth: int, source: str) -> "Verdict":
        return Verdict("disjoint", source, depth=depth)

    @staticmethod
    def intersect(source: str, point: Optional[Point2] = None,
                  addresses: Optional[tuple[Address, ...]] = None) -> "Verdict":
        return Verdict("intersect", source, point=point, addresses=addresses)

    @staticmethod
    def unknown(budget: Optional[Budget], source: str, note: str = "") -> "Verdict":
        return Verdict("unknown", source, budget=budget, note=note)

    def __bool__(self) -> bool:  # pragma: no cover - guard against truthiness misuse
        raise TypeError("Verdict is three-valued; test .kind explicitly")


class GeometricBackend:
    """Affine generator maps plus a convex envelope containing the invariant set."""

    def __init__(self, maps: Sequence[RationalAffineMap], envelope: ConvexPolygon):
        self.maps = tuple(maps)
        self.envelope = envelope
        if not self.maps:
            raise SpecError("geometric backend needs at least one map")


class TableBackend:
    """Explicit nerve data per depth: mapping level -> iterable of simplices.

    Each simplex is an iterable of words (tuples of symbols).  Faces and the
    singletons of every word at a stored level are implied and added here:
    depth-k cells are never empty, so every word is a vertex.
    """

    def __init__(self, m: int, levels: Mapping[int, Iterable[Iterable[Sequence[int]]]]):
        self.m = m
        closed: dict[int, frozenset[frozenset[Word]]] = {}
        for level, simplices in levels.items():
            level = int(level)
            if level < 1:
                raise SpecError(f"table level {level} out of range")
            sims: set[frozenset[Word]] = set()
            for simplex in simplices:
                ws = frozenset(Word(tuple(symbols), m) for symbols in simplex)
                if any(len(w) != level for w in ws):
                    raise SpecError(f"table level {level} lists a word of the wrong length")
                for size in range(1, len(ws) + 1):
                    for sub in combinations(sorted(ws), size):
                        sims.add(frozenset(sub))
            for w in enumerate_words(m, level):
                sims.add(frozenset((w,)))
            closed[level] = frozenset(sims)
        if 1 not in closed:
            raise SpecError("table backend must store at least level 1")
        self.levels = closed


class SymbolicPUBackend:
    """Depth-1 nerve plus one overlap address per ordered pair of touching cells.

    Modeling assumption: each ordered pair (i, j) with intersecting cells has
    exactly one overlap address.  Systems that branch (several addresses for
    one pair) cannot be described by this backend; use geometric or table.
    """

    def __init__(self, m: int, n1: Iterable[Iterable[int]],
                 addresses: Mapping[tuple[int, int], Address]):
        self.m = m
        closed: set[frozenset[int]] = {frozenset((j,)) for j in range(1, m + 1)}
        for simplex in n1:
            s = frozenset(int(i) for i in simplex)
            if not all(1 <= i <= m for i in s):
                raise SpecError(f"depth-1 simplex {sorted(s)} has symbols outside 1..{m}")
            for size in range(1, len(s) + 1):
                for sub in combinations(sorted(s), size):
                    closed.add(frozenset(sub))
        self.n1 = frozenset(closed)
        edges = {s for s in self.n1 if len(s) == 2}
        expected = {(i, j) for s in edges for i in s for j in s if i != j}
        given = {(int(i), int(j)) for (i, j) in addresses}
        if given != expected:
            missing = sorted(expected - given)
            extra = sorted(given - expected)
            raise SpecError(
                f"overlap addresses must cover exactly the touching ordered pairs; "
                f"missing {missing}, extra {extra}"
            )
        for pair, addr in addresses.items():
            if addr.m != m:
                raise SpecError(f"address for pair {pair} uses alphabet size {addr.m}, expected {m}")
        self.addresses = {(int(i), int(j)): addr for (i, j), addr in addresses.items()}


Backend = Union[GeometricBackend, TableBackend, SymbolicPUBackend]


class SystemSpec:
    """A named self-similar system: orientation, alphabet size, and a backend."""

    def __init__(self, name: str, orientation: str, m: int, backend: Backend):
        if orientation not in ("forward", "backward"):
            raise SpecError(f"orientation must be 'forward' or 'backward', got {orientation!r}")
        if m < 2:
            raise SpecError(f"a self-similar system needs m >= 2 generators, got {m}")
        self.name = name
        self.orientation = orientation
        self.m = m
        self.backend = backend
        self._cache: dict = {}
        if isinstance(backend, GeometricBackend):
            if len(backend.maps) != m:
                raise SpecError(f"expected {m} maps, got {len(backend.maps)}")
            if orientation == "forward":
                self._cell_maps = backend.maps
            else:
                try:
                    self._cell_maps = tuple(f.inverse() for f in backend.maps)
                except ValueError as exc:
                    raise SpecError(f"backward system needs invertible generators: {exc}") from exc
            if not check_envelope(self._cell_maps, backend.envelope):
                raise SpecError(
                    "envelope check failed: cell maps must contract and map the envelope into itself"
                )
        elif isinstance(backend, (TableBackend, SymbolicPUBackend)):
            if backend.m != m:
                raise SpecError("backend alphabet size disagrees with the system's")
            self._cell_maps = None
        else:
            raise SpecError(f"unrecognized backend {type(backend).__name__}")

    def __repr__(self) -> str:
        return f"SystemSpec({self.name!r}, {self.orientation}, m={self.m}, {type(self.backend).__name__})"

    @property
    def is_geometric(self) -> bool:
        return isinstance(self.backend, GeometricBackend)

    @property
    def cell_maps(self) -> tuple[RationalAffineMap, ...]:
        if self._cell_maps is None:
            raise SpecError(f"system {self.name!r} has no geometric cell maps")
        return self._cell_maps


def word_map(spec: SystemSpec, w: Word) -> RationalAffineMap:
    """Composite cell map of w: c_{w_1} o ... o c_{w_k} (first symbol outermost)."""
    cache = spec._cache.setdefault("word_map", {})
    got = cache.get(w.symbols)
    if got is None:
        if len(w) == 0:
            got = RationalAffineMap.identity()
        else:
            prefix = word_map(spec, Word(w.symbols[:-1], w.m))
            got = compose(prefix, spec.cell_maps[w.symbols[-1] - 1])
        cache[w.symbols] = got
    return got


def cell_envelope(spec: SystemSpec, w: Word) -> ConvexPolygon:
    """Convex envelope of the depth-k cell of w: the word map's image of the envelope."""
    cache = spec._cache.setdefault("cell_envelope", {})
    got = cache.get(w.symbols)
    if got is None:
        got = map_polygon(word_map(spec, w), spec.backend.envelope)
        cache[w.symbols] = got
    return got


def limit_point(spec: SystemSpec, head: Word, cycle: Word) -> Point2:
    """The point with address head (cycle)^inf: apply head's map to the cycle's fixed point."""
    if len(cycle) == 0:
        raise SpecError("cycle must be nonempty")
    return word_map(spec, head)(word_map(spec, cycle).fixed_point())


def _tail_table(spec: SystemSpec, budget: Budget) -> dict[Point2, Address]:
    """Limit points of all in-budget eventually periodic addresses, deduplicated.

    Enumeration is in canonical order (shorter first, then lexicographic), so
    each point keeps its minimal naming address; the table is shared by every
    query under the same budget.
    """
    key = ("tails", budget.cert_preperiod_max, budget.cert_period_max)
    got = spec._cache.get(key)
    if got is not None:
        return got
    table: dict[Point2, Address] = {}
    seen: set[Address] = set()
    heads = [w for length in range(budget.cert_preperiod_max + 1)
             for w in enumerate_words(spec.m, length)]
    cycles = [w for length in range(1, budget.cert_period_max + 1)
              for w in enumerate_words(spec.m, length)]
    for head in heads:
        for cycle in cycles:
            addr = Address(head, cycle)
            if addr in seen:
                continue
            seen.add(addr)
            point = limit_point(spec, addr.preperiod, addr.period)
            table.setdefault(point, addr)
    spec._cache[key] = table
    return table


def _word_points(spec: SystemSpec, w: Word, budget: Budget) -> dict[Point2, Address]:
    """In-budget certified points of cell(w), each mapped to its tail address."""
    key = ("word_points", w.symbols, budget.cert_preperiod_max, budget.cert_period_max)
    got = spec._cache.get(key)
    if got is not None:
        return got
    f = word_map(spec, w)
    table: dict[Point2, Address] = {}
    for point, addr in _tail_table(spec, budget).items():
        table.setdefault(f(point), addr)
    spec._cache[key] = table
    return table


def certificate_points(spec: SystemSpec, ws: Sequence[Word], budget: Budget) -> list[Point2]:
    """All in-budget points certified to lie in every listed cell, sorted."""
    dicts = [_word_points(spec, w, budget) for w in ws]
    common = set(dicts[0])
    for d in dicts[1:]:
        common &= set(d)
    return sorted(common, key=Point2.as_pair)


def _validate_query(spec: SystemSpec, ws: Sequence[Word]) -> tuple[Word, ...]:
    tup = tuple(ws)
    if not tup:
        raise SpecError("empty word tuple")
    k = len(tup[0])
    for w in tup:
        if w.m != spec.m:
            raise SpecError(f"word {w} uses alphabet size {w.m}, system has {spec.m}")
        if len(w) != k:
            raise SpecError("cells_intersect needs words of equal length")
    if len(set(tup)) != len(tup):
        raise SpecError("cells_intersect needs pairwise distinct words")
    return tup


def cells_intersect(spec: SystemSpec, ws: Sequence[Word], budget: Budget = Budget()) -> Verdict:
    """Do the cells of these equal-length words share a common point?"""
    tup = _validate_query(spec, ws)
    backend = spec.backend
    if isinstance(backend, GeometricBackend):
        return _geometric_intersect(spec, tup, budget)
    level = len(tup[0])
    if isinstance(backend, TableBackend):
        stored = backend.levels.get(level)
        if stored is None:
            return Verdict.unknown(None, "table", note=f"no stored data at depth {level}")
        if frozenset(tup) in stored:
            return Verdict.intersect("table")
        return Verdict.disjoint(0, "table")
    simplices = generate_pu_nerve(spec, level)
    if frozenset(tup) in simplices:
        return Verdict.intersect("symbolic")
    return Verdict.disjoint(0, "symbolic")


def _geometric_intersect(spec: SystemSpec, ws: tuple[Word, ...], budget: Budget) -> Verdict:
    envelopes = [cell_envelope(spec, w) for w in ws]
    if len(ws) == 1:
        point = min(_word_points(spec, ws[0], budget), key=Point2.as_pair)
        addr = _word_points(spec, ws[0], budget)[point]
        return Verdict.intersect("geometric", point, (concat(ws[0], addr),))
    if not common_point_exists(envelopes):
        return Verdict.disjoint(0, "geometric")

    dicts = [_word_points(spec, w, budget) for w in ws]
    common = set(dicts[0])
    for d in dicts[1:]:
        common &= set(d)
    if common:
        point = min(common, key=Point2.as_pair)
        addresses = tuple(concat(w, d[point]) for w, d in zip(ws, dicts))
        return Verdict.intersect("geometric", point, addresses)

    alive: list[tuple[Word, ...]] = [ws]
    symbols = range(1, spec.m + 1)
    for depth in range(1, budget.refine_depth + 1):
        frontier: list[tuple[Word, ...]] = []
        for tup in alive:
            for ext in product(symbols, repeat=len(tup)):
                child = tuple(w.extended(j) for w, j in zip(tup, ext))
                if common_point_exists([cell_envelope(spec, w) for w in child]):
                    frontier.append(child)
                    if len(frontier) > _ALIVE_CAP:
                        return Verdict.unknown(budget, "geometric",
                                               note=f"refinement frontier exceeded {_ALIVE_CAP}")
        if not frontier:
            return Verdict.disjoint(depth, "geometric")
        alive = frontier
    return Verdict.unknown(budget, "geometric", note="budget exhausted")


PointAnswer = Literal["yes", "no", "unknown"]


def point_in_cell(spec: SystemSpec, point: Point2, w: Word, budget: Budget = Budget()) -> PointAnswer:
    """Semi-decision of point-in-cell membership for the geometric backend.

    yes: the pulled-back point has an in-budget eventually periodic address.
    no: refinement separates the pulled-back point from the invariant set.
    unknown: everything else (including non-geometric backends).
    """
    if not spec.is_geometric:
        return "unknown"
    f = word_map(spec, w)
    try:
        q = f.inverse()(point)
    except ValueError:
        return "unknown"
    if not spec.backend.envelope.contains_point(q):
        return "no"
    if q in _tail_table(spec, budget):
        return "yes"
    frontier = [Word((), spec.m)]
    for _ in range(budget.refine_depth):
        frontier = [u.extended(j) for u in frontier for j in range(1, spec.m + 1)
                    if cell_envelope(spec, u.extended(j)).contains_point(q)]
        if not frontier:
            return "no"
    return "unknown"


def cells_containing_point(spec: SystemSpec, point: Point2, depth: int,
                           budget: Budget = Budget()) -> tuple[list[Word], list[Word]]:
    """(certified containing cells, undecided cells) among depth-`depth` words.

    Candidates are pruned by envelope membership, so the undecided list is the
    set of envelope hits where cell membership could not be settled either way.
    """
    if not spec.is_geometric:
        raise SpecError("cells_containing_point needs the geometric backend")
    frontier = [Word((), spec.m)]
    for _ in range(depth):
        frontier = [u.extended(j) for u in frontier for j in range(1, spec.m + 1)
                    if cell_envelope(spec, u.extended(j)).contains_point(point)]
    yes, undecided = [], []
    for u in frontier:
        answer = point_in_cell(spec, point, u, budget)
        if answer == "yes":
            yes.append(u)
        elif answer == "unknown":
            undecided.append(u)
    return yes, undecided


def generate_pu_nerve(spec: SystemSpec, k: int) -> frozenset[frozenset[Word]]:
    """All depth-k simplices of a symbolic system, generated from depth 1.

    Depth k+1 is the union of one prefixed copy of depth k per symbol with the
    face closure of the unique lifts of the depth-1 simplices of dimension
    >= 1.  The lift of a simplex places vertex i at i followed by the first k
    symbols of its overlap address with any other vertex; simplices whose
    vertices disagree on that prefix raise AddressConsistencyError.
    """
    backend = spec.backend
    if not isinstance(backend, SymbolicPUBackend):
        raise SpecError(f"system {spec.name!r} is not symbolic")
    if k < 1:
        raise SpecError("depth must be at least 1")
    levels: list[frozenset[frozenset[Word]]] = spec._cache.setdefault("pu_levels", [])
    if not levels:
        levels.append(frozenset(
            frozenset(Word((i,), spec.m) for i in s) for s in backend.n1
        ))
    while len(levels) < k:
        depth = len(levels)  # building depth + 1
        nxt: set[frozenset[Word]] = set()
        for simplex in levels[-1]:
            for j in range(1, spec.m + 1):
                nxt.add(frozenset(Word((j,) + w.symbols, spec.m) for w in simplex))
        for s in backend.n1:
            if len(s) < 2:
                continue
            lift = _lift_simplex(backend, spec.m, s, depth)
            verts = sorted(lift)
            for size in range(1, len(verts) + 1):
                for sub in combinations(verts, size):
                    nxt.add(frozenset(sub))
        levels.append(frozenset(nxt))
    return levels[k - 1]


def _lift_simplex(backend: SymbolicPUBackend, m: int, simplex: frozenset[int],
                  depth: int) -> frozenset[Word]:
    lift = []
    for i in sorted(simplex):
        prefixes = {truncate(backend.addresses[(i, j)], depth) for j in sorted(simplex) if j != i}
        if len(prefixes) > 1:
            raise AddressConsistencyError(simplex, i, depth, sorted(prefixes))
        (prefix,) = prefixes
        lift.append(Word((i,) + prefix.symbols, m))
    return frozenset(lift)

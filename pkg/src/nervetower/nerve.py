"""Nerve complexes of cell covers, truncation maps between depths, and derived systems.

The depth-k nerve has one vertex per length-k word (cells are never empty) and
a simplex for every tuple of words whose cells share a point.  Dropping the
last symbol of every word induces a simplicial surjection from depth k+1 onto
depth k; those maps are what the tower analysis consumes.

Oracle answers of Unknown do not abort construction: the affected tuples are
excluded from the complex and recorded in its `uncertain` log, so downstream
reports can say exactly which conclusions are conditional.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from . import oracles
from .exactgeom import compose
from .oracles import (
    Budget,
    ConsistencyError,
    GeometricBackend,
    SpecError,
    SymbolicPUBackend,
    SystemSpec,
    TableBackend,
)
from .words import Word, enumerate_words, truncate


@dataclass
class SimplicialComplex:
    """A finite simplicial complex on the depth-`level` words of a system.

    simplices maps dimension -> sorted tuple of simplices, each a sorted tuple
    of vertex indices into `words`.  Dimensions are enumerated up to dim_cap;
    `complete` records whether that enumeration is in fact the whole nerve
    (no larger simplex can exist), which is what makes Euler characteristics
    and top-dimension Betti numbers exact.
    """

    level: int
    m: int
    words: tuple[Word, ...]
    simplices: dict[int, tuple[tuple[int, ...], ...]]
    dim_cap: int
    complete: bool
    uncertain: tuple[tuple[tuple[Word, ...], str], ...] = ()
    _index: dict[Word, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self._index:
            self._index = {w: i for i, w in enumerate(self.words)}

    def index_of(self, w: Word) -> int:
        return self._index[w]

    def simplex_counts(self) -> dict[int, int]:
        return {dim: len(sims) for dim, sims in self.simplices.items() if sims}

    def dimensions(self) -> list[int]:
        return sorted(dim for dim, sims in self.simplices.items() if sims)

    def has_simplex(self, indices: tuple[int, ...]) -> bool:
        dim = len(indices) - 1
        return tuple(sorted(indices)) in set(self.simplices.get(dim, ()))

    def edge_sets(self) -> set[frozenset[int]]:
        return {frozenset(e) for e in self.simplices.get(1, ())}

    def simplex_word_sets(self) -> set[frozenset[Word]]:
        out: set[frozenset[Word]] = set()
        for sims in self.simplices.values():
            for s in sims:
                out.add(frozenset(self.words[i] for i in s))
        return out

    def euler_characteristic(self) -> int:
        if not self.complete:
            raise ConsistencyError("Euler characteristic undefined on a capped complex")
        return sum((-1) ** dim * len(sims) for dim, sims in self.simplices.items())


def _close_downward(buckets: dict[int, set[tuple[int, ...]]]) -> None:
    # Intersection certificates are monotone: every face of a kept simplex is kept.
    for dim in sorted(buckets, reverse=True):
        if dim == 0:
            continue
        lower = buckets.setdefault(dim - 1, set())
        for s in buckets[dim]:
            for face in combinations(s, dim):
                lower.add(face)


def _from_word_sets(spec: SystemSpec, level: int, sets, dim_cap: int,
                    uncertain=()) -> SimplicialComplex:
    words = tuple(enumerate_words(spec.m, level))
    index = {w: i for i, w in enumerate(words)}
    buckets: dict[int, set[tuple[int, ...]]] = {0: {(i,) for i in range(len(words))}}
    truncated = False
    for s in sets:
        dim = len(s) - 1
        if dim > dim_cap:
            truncated = True
            continue
        buckets.setdefault(dim, set()).add(tuple(sorted(index[w] for w in s)))
    _close_downward(buckets)
    simplices = {dim: tuple(sorted(sims)) for dim, sims in sorted(buckets.items())}
    return SimplicialComplex(level, spec.m, words, simplices, dim_cap,
                             complete=not truncated, uncertain=tuple(uncertain))


def build_nerve(spec: SystemSpec, level: int, dim_cap: int = 3,
                budget: Budget = Budget()) -> SimplicialComplex:
    """The depth-`level` nerve, with simplices enumerated up to dimension dim_cap."""
    if level < 1:
        raise SpecError("nerve depth must be at least 1")
    if dim_cap < 1:
        raise SpecError("dim_cap must be at least 1")
    backend = spec.backend
    if isinstance(backend, SymbolicPUBackend):
        return _from_word_sets(spec, level, oracles.generate_pu_nerve(spec, level), dim_cap)
    if isinstance(backend, TableBackend):
        stored = backend.levels.get(level)
        if stored is None:
            raise SpecError(f"system {spec.name!r} stores no depth-{level} data")
        return _from_word_sets(spec, level, stored, dim_cap)
    return _geometric_nerve(spec, level, dim_cap, budget)


def _geometric_nerve(spec: SystemSpec, level: int, dim_cap: int,
                     budget: Budget) -> SimplicialComplex:
    words = tuple(enumerate_words(spec.m, level))
    n = len(words)
    uncertain: list[tuple[tuple[Word, ...], str]] = []
    adjacency: dict[int, set[int]] = {i: set() for i in range(n)}
    buckets: dict[int, set[tuple[int, ...]]] = {0: {(i,) for i in range(n)}}

    edges: set[tuple[int, int]] = set()
    for i in range(n):
        for j in range(i + 1, n):
            verdict = oracles.cells_intersect(spec, (words[i], words[j]), budget)
            if verdict.kind == "intersect":
                edges.add((i, j))
                adjacency[i].add(j)
                adjacency[j].add(i)
            elif verdict.kind == "unknown":
                uncertain.append(((words[i], words[j]), verdict.note))
    buckets[1] = edges

    # Higher simplices are cliques whose tuple of cells passes the oracle;
    # a clique with a missing or disjoint sub-tuple can never certify, so
    # candidates grow from verified simplices only.
    current = edges
    for dim in range(2, dim_cap + 1):
        verified: set[tuple[int, ...]] = set()
        for s in sorted(current):
            shared = set.intersection(*(adjacency[v] for v in s))
            for v in sorted(shared):
                if v <= s[-1]:
                    continue
                candidate = s + (v,)
                verdict = oracles.cells_intersect(
                    spec, tuple(words[i] for i in candidate), budget)
                if verdict.kind == "intersect":
                    verified.add(candidate)
                elif verdict.kind == "unknown":
                    uncertain.append((tuple(words[i] for i in candidate), verdict.note))
        if not verified:
            buckets[dim] = set()
            break
        buckets[dim] = verified
        current = verified

    # Completeness: does any clique one dimension past the cap exist at all?
    complete = True
    if current and max(buckets) == dim_cap and buckets[dim_cap]:
        for s in buckets[dim_cap]:
            shared = set.intersection(*(adjacency[v] for v in s))
            if any(v > s[-1] for v in shared):
                complete = False
                break

    _close_downward(buckets)
    simplices = {dim: tuple(sorted(sims)) for dim, sims in sorted(buckets.items())}
    uncertain.sort(key=lambda entry: (len(entry[0]), entry[0]))
    return SimplicialComplex(level, spec.m, words, simplices, dim_cap,
                             complete=complete, uncertain=tuple(uncertain))


@dataclass
class SimplicialMap:
    """A vertex map that sends simplices to simplices (checked at construction)."""

    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: tuple[int, ...]
    surjective: Optional[bool] = None

    def image_indices(self, simplex: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(sorted({self.vertex_map[v] for v in simplex}))


def truncation_map(long: SimplicialComplex, short: SimplicialComplex) -> SimplicialMap:
    """The drop-last-symbols map between nerve depths, with its contracts checked.

    Simpliciality is a soundness requirement and failures raise; surjectivity
    holds for true nerves and is checked whenever both complexes are free of
    uncertain tuples (left None otherwise).
    """
    if long.m != short.m or long.level <= short.level:
        raise SpecError("truncation needs two depths of one system, deeper first")
    vertex_map = tuple(short.index_of(truncate(w, short.level)) for w in long.words)
    target_sets = {dim: set(sims) for dim, sims in short.simplices.items()}
    for dim, sims in long.simplices.items():
        if dim == 0:
            continue
        for s in sims:
            image = tuple(sorted({vertex_map[v] for v in s}))
            if len(image) - 1 > short.dim_cap:
                raise ConsistencyError("target complex capped below an image simplex")
            if image not in target_sets.get(len(image) - 1, set()):
                raise ConsistencyError(
                    f"truncation is not simplicial: {s} maps outside depth {short.level}"
                )
    surjective: Optional[bool] = None
    if not long.uncertain and not short.uncertain:
        images: dict[int, set[tuple[int, ...]]] = {}
        for dim, sims in long.simplices.items():
            for s in sims:
                image = tuple(sorted({vertex_map[v] for v in s}))
                images.setdefault(len(image) - 1, set()).add(image)
        surjective = all(
            set(sims) <= images.get(dim, set())
            for dim, sims in short.simplices.items()
        )
        if not surjective:
            raise ConsistencyError(
                f"truncation from depth {long.level} misses simplices of depth {short.level}"
            )
    return SimplicialMap(long, short, vertex_map, surjective)


@dataclass
class TowerData:
    """Nerves at depths 1..K plus the truncation map between consecutive depths."""

    spec: SystemSpec
    dim_cap: int
    budget: Budget
    complexes: list[SimplicialComplex]
    maps: list[SimplicialMap]  # maps[i]: depth i+2 -> depth i+1

    @property
    def depth(self) -> int:
        return len(self.complexes)

    def complex_at(self, level: int) -> SimplicialComplex:
        return self.complexes[level - 1]

    def map_to_base(self, level: int) -> SimplicialMap:
        """Truncation from depth `level` all the way down to depth 1."""
        return truncation_map(self.complex_at(level), self.complex_at(1))


def tower_complexes(spec: SystemSpec, depth: int, dim_cap: int = 3,
                    budget: Budget = Budget()) -> TowerData:
    """Build nerves for depths 1..depth and the maps between them.

    Before the maps are formed, certificates are swept downward: a certified
    simplex at depth k+1 certifies its truncated image at depth k (cells only
    grow under truncation), so any image missing merely because the shallower
    query exhausted its budget is added and dropped from the uncertain log.
    """
    complexes = [build_nerve(spec, k, dim_cap, budget) for k in range(1, depth + 1)]
    for k in range(len(complexes) - 1, 0, -1):
        _sweep_certificates(complexes[k], complexes[k - 1])
    maps = [truncation_map(complexes[i + 1], complexes[i]) for i in range(len(complexes) - 1)]
    return TowerData(spec, dim_cap, budget, complexes, maps)


def _sweep_certificates(long: SimplicialComplex, short: SimplicialComplex) -> None:
    vertex_map = [short.index_of(truncate(w, short.level)) for w in long.words]
    buckets = {dim: set(sims) for dim, sims in short.simplices.items()}
    added = False
    for dim, sims in long.simplices.items():
        if dim == 0:
            continue
        for s in sims:
            image = tuple(sorted({vertex_map[v] for v in s}))
            if len(image) == 1:
                continue
            bucket = buckets.setdefault(len(image) - 1, set())
            if image not in bucket:
                bucket.add(image)
                added = True
    if not added:
        return
    _close_downward(buckets)
    short.simplices = {dim: tuple(sorted(sims)) for dim, sims in sorted(buckets.items())}
    certified = short.simplex_word_sets()
    short.uncertain = tuple(
        entry for entry in short.uncertain if frozenset(entry[0]) not in certified
    )


def block_subcomplex(complex_: SimplicialComplex, prefix: Word) -> SimplicialComplex:
    """The full subcomplex on words starting with `prefix`, reindexed by suffix.

    The result lives at depth level - len(prefix) with suffix words as its
    vertices, so it can be compared directly with the nerve at that depth.
    """
    drop = len(prefix)
    if drop < 1 or drop >= complex_.level:
        raise SpecError("prefix length must be between 1 and level - 1")
    if prefix.m != complex_.m:
        raise SpecError("prefix alphabet disagrees with the complex")
    sub_level = complex_.level - drop
    words = tuple(enumerate_words(complex_.m, sub_level))
    index = {w: i for i, w in enumerate(words)}
    in_block = {}
    for i, w in enumerate(complex_.words):
        if w.symbols[:drop] == prefix.symbols:
            in_block[i] = index[Word(w.symbols[drop:], complex_.m)]
    buckets: dict[int, set[tuple[int, ...]]] = {0: {(i,) for i in range(len(words))}}
    for dim, sims in complex_.simplices.items():
        if dim == 0:
            continue
        for s in sims:
            if all(v in in_block for v in s):
                buckets.setdefault(dim, set()).add(tuple(sorted(in_block[v] for v in s)))
    uncertain = tuple(
        (tuple(Word(w.symbols[drop:], complex_.m) for w in entry[0]), entry[1])
        for entry in complex_.uncertain
        if all(w.symbols[:drop] == prefix.symbols for w in entry[0])
    )
    simplices = {dim: tuple(sorted(sims)) for dim, sims in sorted(buckets.items())}
    return SimplicialComplex(sub_level, complex_.m, words, simplices,
                             complex_.dim_cap, complex_.complete, uncertain)


def build_iterate_or_subsystem(spec: SystemSpec, generator_words: Sequence[Word],
                               name: Optional[str] = None) -> SystemSpec:
    """The system generated by the composites named by `generator_words`.

    For forward systems the word w contributes the composite with the first
    symbol outermost; for backward systems the opposite order, so that the
    composite's inverse is again first-symbol-outermost.  The envelope is
    inherited and re-validated.
    """
    if not spec.is_geometric:
        raise SpecError("derived systems need the geometric backend")
    gens = tuple(generator_words)
    if len(gens) < 2:
        raise SpecError("a derived system needs at least 2 generator words")
    if len(set(gens)) != len(gens):
        raise SpecError("generator words must be distinct")
    maps = []
    for w in gens:
        if w.m != spec.m or len(w) == 0:
            raise SpecError(f"bad generator word {w}")
        chain = w.symbols if spec.orientation == "forward" else w.symbols[::-1]
        g = spec.backend.maps[chain[0] - 1]
        for symbol in chain[1:]:
            g = compose(g, spec.backend.maps[symbol - 1])
        maps.append(g)
    label = name or f"{spec.name}-sub-" + "-".join(str(w) for w in gens)
    return SystemSpec(label, spec.orientation, len(gens),
                      GeometricBackend(maps, spec.backend.envelope))


def iterate_system(spec: SystemSpec, n: int, name: Optional[str] = None) -> SystemSpec:
    """The n-th iterate: one generator per length-n word, in lexicographic order."""
    if n < 1:
        raise SpecError("iterate order must be at least 1")
    label = name or f"{spec.name}-iterate-{n}"
    return build_iterate_or_subsystem(spec, enumerate_words(spec.m, n), label)

"""Connected components of nerve skeletons and the component tower of a system.

Counting components of the depth-k nerves and relating consecutive depths via
the truncation maps is how the tool talks about connectedness of the invariant
set itself.  That translation is only licensed when every address's nested
cell intersection is connected; for geometric systems whose cell maps contract
this holds automatically (the intersections are single points), otherwise the
caller must assert it and the tower refuses a verdict if nobody does.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional

from .nerve import SimplicialComplex, TowerData
from .words import Word


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


@dataclass
class ComponentsLevel:
    """Components of one nerve's 1-skeleton.

    labels[i] is the component id of vertex i; ids run 0..count-1 in order of
    each component's lexicographically least word, which is also the
    component's representative.
    """

    count: int
    labels: tuple[int, ...]
    representatives: tuple[Word, ...]


def components(complex_: SimplicialComplex) -> ComponentsLevel:
    n = len(complex_.words)
    uf = UnionFind(n)
    for (a, b) in complex_.simplices.get(1, ()):
        uf.union(a, b)
    roots: dict[int, int] = {}
    reps: list[Word] = []
    labels = [0] * n
    for i in range(n):  # words are in lexicographic order already
        root = uf.find(i)
        if root not in roots:
            roots[root] = len(reps)
            reps.append(complex_.words[i])
        labels[i] = roots[root]
    return ComponentsLevel(len(reps), tuple(labels), tuple(reps))


VerdictKind = Literal[
    "connected",
    "finitely-many",
    "countably-infinite-plus",
    "uncountable",
    "growing-unknown",
]


@dataclass
class ComponentVerdict:
    kind: VerdictKind
    count: Optional[int]  # set for connected / finitely-many
    mechanism: str
    detail: str = ""


@dataclass
class ComponentTower:
    """Component counts per depth, parent links, and the licensed verdict."""

    name: str
    counts: list[int]
    levels: list[ComponentsLevel]
    parents: list[tuple[int, ...]]  # parents[i][c] = component at depth i+1 containing c's image
    hypothesis: str  # 'verified-contraction' | 'user-asserted' | 'unverified'
    verdict: ComponentVerdict


def _parent_links(tower: TowerData, levels: list[ComponentsLevel]) -> list[tuple[int, ...]]:
    links: list[tuple[int, ...]] = []
    for i, smap in enumerate(tower.maps):
        deep, shallow = levels[i + 1], levels[i]
        parent = [-1] * deep.count
        for v, label in enumerate(deep.labels):
            image_label = shallow.labels[smap.vertex_map[v]]
            if parent[label] == -1:
                parent[label] = image_label
            elif parent[label] != image_label:
                # The truncation map is simplicial, so this cannot happen.
                raise RuntimeError("component parent map is not well defined")
        links.append(tuple(parent))
    return links


def component_tower(tower: TowerData, *,
                    assert_lx_connected: bool = False,
                    assert_injective: bool = False,
                    postunbranched: Optional[bool] = None,
                    n1_betti: Optional[tuple[int, int]] = None) -> ComponentTower:
    """Counts, parent links, and a verdict about the invariant set's components.

    n1_betti, when available, is (a_{0,1}, a_{1,1}) over a field and unlocks
    the count lower-bound mechanism for certified systems.  postunbranched
    likewise comes from the classifier; None means not certified.
    """
    spec = tower.spec
    levels = [components(c) for c in tower.complexes]
    counts = [lv.count for lv in levels]
    parents = _parent_links(tower, levels)

    for a, b in zip(counts, counts[1:]):
        if b < a:
            raise RuntimeError("component counts decreased along the tower")

    if spec.is_geometric:
        hypothesis = "verified-contraction"  # cell maps contract, so nested cells shrink to points
    elif assert_lx_connected:
        hypothesis = "user-asserted"
    else:
        hypothesis = "unverified"

    injective = assert_injective
    if spec.is_geometric:
        injective = injective or all(f.determinant() != 0 for f in spec.backend.maps)
    # Backward systems need no injectivity side condition: cells are preimages.
    split_ok = spec.orientation == "backward" or injective

    uncertain = any(c.uncertain for c in tower.complexes)
    verdict = _component_verdict(spec, tower, levels, counts, parents, hypothesis,
                                 split_ok, postunbranched, n1_betti, uncertain)
    return ComponentTower(spec.name, counts, levels, parents, hypothesis, verdict)


def _component_verdict(spec, tower, levels, counts, parents, hypothesis, split_ok,
                       postunbranched, n1_betti, uncertain) -> ComponentVerdict:
    if hypothesis == "unverified":
        return ComponentVerdict(
            "growing-unknown", None, "hypothesis-unverified",
            "address cell connectedness neither verified nor asserted; counts reported only")
    if uncertain:
        return ComponentVerdict(
            "growing-unknown", None, "uncertain-simplices",
            "some cell intersections undecided; counts are lower bounds")

    n1 = tower.complex_at(1)
    m = spec.m
    if counts[0] == 1:
        if any(c != 1 for c in counts):
            raise RuntimeError("connected base nerve but a deeper nerve is disconnected")
        return ComponentVerdict("connected", 1, "connected-base",
                                "depth-1 nerve connected, hence every depth is")

    edges = n1.edge_sets()
    if m == 2 and not edges and split_ok:
        return ComponentVerdict(
            "uncountable", None, "two-block-split",
            "two generators with disjoint cells: components biject with the full shift")

    touched = {v for e in edges for v in e}
    isolated = sorted(set(range(m)) - touched)
    if isolated and split_ok:
        j = isolated[0] + 1
        for a, b in zip(counts, counts[1:]):
            if b <= a:
                raise RuntimeError("isolated depth-1 cell forces strictly growing counts")
        return ComponentVerdict(
            "countably-infinite-plus", None, "isolated-block",
            f"cell {j} meets no other cell: the constant-{j} address is an isolated component "
            "and counts grow strictly")

    if postunbranched and n1_betti is not None:
        a01, a11 = n1_betti
        bound = Fraction(m - a01 + a11, m - 1)
        if a01 > bound:
            return ComponentVerdict(
                "countably-infinite-plus", None, "pu-count-lower-bound",
                f"depth-1 count {a01} exceeds the stationary bound {bound}, forcing strict growth")
        if 2 <= m <= 6:
            return ComponentVerdict(
                "countably-infinite-plus", None, "pu-small-m-disconnected",
                "disconnected depth-1 nerve with at most 6 generators cannot stabilize")

    # Judge stabilization on the deepest computed pair only: an early plateau
    # that later splits again is not evidence.
    if len(counts) >= 2:
        i = len(counts) - 2
        if counts[i] == counts[i + 1] and len(set(parents[i])) == counts[i + 1]:
            return ComponentVerdict(
                "finitely-many", counts[i + 1], "stabilized-components",
                f"counts equal at depths {i + 1} and {i + 2} with a bijective parent map")

    return ComponentVerdict("growing-unknown", None, "no-certificate",
                            "counts still changing at the deepest computed level")

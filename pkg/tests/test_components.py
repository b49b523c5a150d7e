"""Component counting, parent links, and the component verdict mechanisms."""

from fractions import Fraction

import pytest

from nervetower.components import (ComponentTower, component_tower, components)
from nervetower.exactgeom import ConvexPolygon, Point2, RationalAffineMap
from nervetower.nerve import build_nerve, tower_complexes
from nervetower.oracles import (Budget, GeometricBackend, SystemSpec,
                                TableBackend)


def P(x, y):
    return Point2(Fraction(x), Fraction(y))


def interval_with_isolated_cell():
    """Three quarter-scale maps on a segment; cell 1 is isolated, 2 and 3 touch."""
    q = Fraction(1, 4)
    maps = tuple(RationalAffineMap(q, 0, 0, q, e, 0)
                 for e in (Fraction(0), Fraction(1, 2), Fraction(3, 4)))
    envelope = ConvexPolygon.hull([P(0, 0), P(1, 0)])
    return SystemSpec("isolated", "forward", 3, GeometricBackend(maps, envelope))


class TestComponents:
    def test_connected_gasket(self, gasket):
        lv = components(build_nerve(gasket, 2))
        assert lv.count == 1
        assert set(lv.labels) == {0}
        assert str(lv.representatives[0]) == "11"

    def test_trivial_table_three_blocks(self, bundled):
        lv = components(build_nerve(bundled("finite-trivial").spec, 1))
        assert lv.count == 3
        assert lv.labels == (0, 1, 2)
        assert [str(w) for w in lv.representatives] == ["1", "2", "3"]

    def test_representatives_are_lex_least(self, bundled):
        lv = components(build_nerve(bundled("gasket-sub-mixed").spec, 1))
        assert lv.count == 2
        assert lv.labels == (0, 0, 0, 0, 1, 1, 1)
        assert [str(w) for w in lv.representatives] == ["1", "5"]


class TestParentLinks:
    def test_connected_chain(self, gasket):
        ct = component_tower(tower_complexes(gasket, 3))
        assert ct.counts == [1, 1, 1]
        assert ct.parents == [(0,), (0,)]

    def test_three_blocks_map_bijectively(self, bundled):
        tower = tower_complexes(bundled("finite-trivial").spec, 2, dim_cap=2)
        ct = component_tower(tower, assert_lx_connected=True)
        assert ct.counts == [3, 3]
        assert ct.parents == [(0, 1, 2)]


class TestVerdicts:
    def test_connected_base(self, gasket):
        ct = component_tower(tower_complexes(gasket, 2))
        assert ct.hypothesis == "verified-contraction"
        assert ct.verdict.kind == "connected"
        assert ct.verdict.count == 1
        assert ct.verdict.mechanism == "connected-base"

    def test_two_block_split_is_uncountable(self, bundled):
        spec = bundled("two-map-split").spec
        ct = component_tower(tower_complexes(spec, 3))
        assert ct.counts == [2, 4, 8]
        assert ct.verdict.kind == "uncountable"
        assert ct.verdict.mechanism == "two-block-split"

    def test_isolated_block_grows_strictly(self):
        spec = interval_with_isolated_cell()
        ct = component_tower(tower_complexes(spec, 3))
        assert ct.counts == [2, 5, 14]
        assert ct.verdict.kind == "countably-infinite-plus"
        assert ct.verdict.mechanism == "isolated-block"
        assert "cell 1" in ct.verdict.detail

    def test_stabilized_table(self, bundled):
        tower = tower_complexes(bundled("finite-trivial").spec, 2, dim_cap=2)
        ct = component_tower(tower, assert_lx_connected=True)
        assert ct.hypothesis == "user-asserted"
        assert ct.verdict.kind == "finitely-many"
        assert ct.verdict.count == 3
        assert ct.verdict.mechanism == "stabilized-components"

    def test_hypothesis_gate_blocks_table_verdicts(self, bundled):
        # no lx-connectedness assertion: counts are reported, nothing concluded
        tower = tower_complexes(bundled("finite-cycle").spec, 2, dim_cap=4)
        ct = component_tower(tower)
        assert ct.hypothesis == "unverified"
        assert ct.verdict.kind == "growing-unknown"
        assert ct.verdict.mechanism == "hypothesis-unverified"
        assert ct.counts == [1, 1]

    def test_asserted_cycle_is_connected(self, bundled):
        tower = tower_complexes(bundled("finite-cycle").spec, 2, dim_cap=4)
        ct = component_tower(tower, assert_lx_connected=True)
        assert ct.verdict.kind == "connected"

    def test_pu_count_lower_bound(self, bundled):
        spec = bundled("gasket-sub-mixed").spec
        tower = tower_complexes(spec, 2)
        ct = component_tower(tower, postunbranched=True, n1_betti=(2, 1))
        # m=7: stationary bound (7 - 2 + 1)/6 = 1 < 2 components
        assert ct.verdict.kind == "countably-infinite-plus"
        assert ct.verdict.mechanism == "pu-count-lower-bound"

    def test_pu_small_m_disconnected(self):
        # complete graph on five cells plus an isolated sixth: the count bound
        # is tight (2 = 2) so only the small-m mechanism applies
        edges = [[(a,), (b,)] for a in range(1, 6) for b in range(a + 1, 6)]
        spec = SystemSpec("smallm", "forward", 6, TableBackend(6, {1: edges}))
        ct = component_tower(tower_complexes(spec, 1),
                             assert_lx_connected=True,
                             postunbranched=True, n1_betti=(2, 6))
        assert ct.verdict.kind == "countably-infinite-plus"
        assert ct.verdict.mechanism == "pu-small-m-disconnected"

    def test_single_level_gives_no_certificate(self, bundled):
        tower = tower_complexes(bundled("finite-trivial").spec, 1, dim_cap=2)
        ct = component_tower(tower, assert_lx_connected=True)
        assert ct.verdict.kind == "growing-unknown"
        assert ct.verdict.mechanism == "no-certificate"

    def test_uncertain_simplices_block_verdicts(self):
        half, quarter = Fraction(1, 2), Fraction(1, 4)
        maps = (RationalAffineMap(half, 0, 0, quarter, 0, 0),
                RationalAffineMap(half, 0, 0, quarter, quarter, quarter))
        envelope = ConvexPolygon.hull([P(0, 0), P(1, 0), P(1, 1), P(0, 1)])
        spec = SystemSpec("slow", "forward", 2, GeometricBackend(maps, envelope))
        starved = Budget(refine_depth=0, cert_period_max=1, cert_preperiod_max=0)
        ct = component_tower(tower_complexes(spec, 1, budget=starved))
        assert ct.verdict.kind == "growing-unknown"
        assert ct.verdict.mechanism == "uncertain-simplices"

"""Field homology, cohomology, induced ranks, and the tower Betti table.

Expected values are cross-checked against tests/support/linalg_oracle.py,
a dense-elimination implementation that shares no code with the package.
"""

from itertools import combinations

import pytest

from nervetower.homology import (BettiTable, FieldKind, betti, betti_exact,
                                 cobetti, induced_rank, tower_analysis)
from nervetower.nerve import (SimplicialComplex, SimplicialMap, build_nerve,
                              tower_complexes)
from nervetower.oracles import ConsistencyError, SpecError
from nervetower.words import enumerate_words

from support.linalg_oracle import betti_oracle, induced_rank_oracle

Q = FieldKind(0)
GF2 = FieldKind(2)
GF3 = FieldKind(3)
FIELDS = [Q, GF2, GF3]


def synthetic(faces, n):
    """Depth-1 complex on n vertices from a list of triangles like "123"."""
    words = tuple(enumerate_words(n, 1))
    buckets = {0: {(i,) for i in range(n)}, 1: set(), 2: set()}
    for f in faces:
        s = tuple(sorted(int(c) - 1 for c in f))
        buckets[2].add(s)
        for e in combinations(s, 2):
            buckets[1].add(e)
    simplices = {d: tuple(sorted(v)) for d, v in buckets.items()}
    return SimplicialComplex(1, n, words, simplices, dim_cap=3, complete=True)


# a Moebius band (5 triangles around a band) and the 6-vertex projective
# plane: closed checks above the usual graph-only cases, with the projective
# plane separating characteristic 2 from the rest
MOEBIUS = synthetic(["123", "234", "345", "451", "512"], 5)
RP2 = synthetic(["123", "134", "145", "156", "126",
                 "235", "346", "452", "563", "624"], 6)


class TestFieldKind:
    def test_parse(self):
        assert FieldKind.parse("q") == Q
        assert FieldKind.parse("Q") == Q
        assert FieldKind.parse("gf2") == GF2
        assert FieldKind.parse("GF7") == FieldKind(7)

    def test_parse_rejects(self):
        for bad in ("r", "gf4", "gf1", "f2"):
            with pytest.raises(SpecError):
                FieldKind.parse(bad)

    def test_labels(self):
        assert Q.label == "Q"
        assert GF2.label == "GF(2)"


class TestBetti:
    def test_moebius_band(self):
        for fk in FIELDS:
            assert [betti(MOEBIUS, fk, r) for r in range(3)] == [1, 1, 0]

    def test_projective_plane_depends_on_characteristic(self):
        assert [betti(RP2, Q, r) for r in range(3)] == [1, 0, 0]
        assert [betti(RP2, GF2, r) for r in range(3)] == [1, 1, 1]
        assert [betti(RP2, GF3, r) for r in range(3)] == [1, 0, 0]

    def test_cobetti_agrees_everywhere(self, gasket, bundled):
        complexes = [MOEBIUS, RP2, build_nerve(gasket, 2),
                     build_nerve(bundled("banded-annuli").spec, 2, dim_cap=2),
                     build_nerve(bundled("snowflake").spec, 1)]
        for c in complexes:
            for fk in FIELDS:
                for r in range(min(c.dim_cap, 2) + 1):
                    assert betti(c, fk, r) == cobetti(c, fk, r)

    def test_dense_oracle_agrees(self, gasket, bundled):
        complexes = [MOEBIUS, RP2, build_nerve(gasket, 3),
                     build_nerve(bundled("pentagasket").spec, 2),
                     build_nerve(bundled("banded-annuli").spec, 2, dim_cap=2),
                     build_nerve(bundled("finite-cycle").spec, 2, dim_cap=4)]
        for c in complexes:
            for fk in FIELDS:
                for r in range(3):
                    if betti_exact(c, r):
                        assert betti(c, fk, r) == betti_oracle(c, r, fk.char)

    def test_euler_identity(self, gasket, bundled):
        for c in (MOEBIUS, RP2, build_nerve(gasket, 2),
                  build_nerve(bundled("finite-trivial").spec, 2, dim_cap=2)):
            alternating = sum((-1) ** r * betti(c, Q, r)
                              for r in range(c.dim_cap + 1))
            assert alternating == c.euler_characteristic()

    def test_capped_complex_refuses(self, bundled):
        capped = build_nerve(bundled("finite-trivial").spec, 2, dim_cap=1)
        with pytest.raises(ConsistencyError):
            betti(capped, Q, 2)
        # dimension 0 only needs edges, which a cap of 1 still enumerates
        assert betti(capped, Q, 0) == 3


class TestInducedRank:
    def test_identity_map_realizes_betti(self):
        for c in (MOEBIUS, RP2):
            ident = SimplicialMap(c, c, tuple(range(len(c.words))), True)
            for fk in FIELDS:
                for r in range(3):
                    assert induced_rank(ident, r, fk) == betti(c, fk, r)

    def test_oracle_agreement_on_towers(self, bundled):
        for name in ("gasket", "pentagasket", "gasket-sub-mixed",
                     "banded-annuli", "simplex-boundary-2", "finite-cycle"):
            tower = tower_complexes(bundled(name).spec, 2, dim_cap=2)
            smap = tower.map_to_base(2)
            for fk in FIELDS:
                for r in (0, 1):
                    assert induced_rank(smap, r, fk) == \
                        induced_rank_oracle(smap, r, fk.char), (name, r, fk)

    def test_frozen_lambda_values(self, bundled):
        expected = {
            "gasket": 1, "pentagasket": 1, "gasket-sub7": 1,
            "gasket-sub-mixed": 0, "banded-annuli": 2,
            "simplex-boundary-2": 0, "finite-cycle": 1, "finite-trivial": 0,
        }
        for name, lam2 in expected.items():
            tower = tower_complexes(bundled(name).spec, 2, dim_cap=2)
            assert induced_rank(tower.map_to_base(2), 1, Q) == lam2, name

    def test_dim0_rank_counts_surviving_components(self, bundled):
        # depth-2 map to depth 1 on components: three blocks stay three blocks
        tower = tower_complexes(bundled("finite-trivial").spec, 2, dim_cap=2)
        assert induced_rank(tower.map_to_base(2), 0, Q) == 3


class TestTowerAnalysis:
    def test_gasket_table(self, gasket):
        table = tower_analysis(gasket, 4, Q, dim_cap=2)
        assert isinstance(table, BettiTable)
        assert table.m == 3
        assert table.sequence(1) == [1, 4, 13, 40]
        assert table.sequence(0) == [1, 1, 1, 1]
        assert table.lam == {2: 1, 3: 1, 4: 1}
        assert table.component_counts == [1, 1, 1, 1]
        assert table.uncertain == []

    def test_growth_logs(self, gasket):
        import math
        table = tower_analysis(gasket, 3, Q, dim_cap=2)
        assert table.growth[1][0] == 0.0  # log 1
        assert table.growth[1][1] == pytest.approx(math.log(4) / 2)
        assert table.growth[1][2] == pytest.approx(math.log(13) / 3)
        assert table.growth[0] == [0.0, 0.0, 0.0]

    def test_depth_validation(self, gasket):
        with pytest.raises(SpecError):
            tower_analysis(gasket, 0, Q)

    def test_component_counts_match_a0(self, bundled):
        table = tower_analysis(bundled("finite-trivial").spec, 2, Q, dim_cap=2)
        assert table.sequence(0) == [3, 3]
        assert table.component_counts == [3, 3]

    def test_field_changes_nothing_on_graph_towers(self, gasket):
        over_q = tower_analysis(gasket, 3, Q, dim_cap=2)
        over_2 = tower_analysis(gasket, 3, GF2, dim_cap=2)
        assert over_q.sequence(1) == over_2.sequence(1)
        assert over_q.lam == over_2.lam

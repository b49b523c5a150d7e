"""Brute-force reference for self-similar systems on finite point sets.

Deliberately independent of the package: cells are enumerated directly as
point sets and simplices read off as "words whose cells share a point".
Used to cross-check the bundled table-backend systems, whose levels were
worked out by hand.
"""

from itertools import product


class FinitePointSystem:
    """Forward system on a finite set; maps given as point -> point dicts."""

    def __init__(self, points, maps):
        self.points = frozenset(points)
        self.maps = [dict(mp) for mp in maps]
        union = set()
        for mp in self.maps:
            if set(mp) != self.points:
                raise ValueError("every map must be defined on all points")
            union.update(mp.values())
        if union != self.points:
            raise ValueError("images do not cover the point set")

    @property
    def m(self):
        return len(self.maps)

    def cell(self, word):
        # first symbol outermost: cell(w) = h_{w_1}(h_{w_2}(... h_{w_k}(L)))
        current = set(self.points)
        for symbol in reversed(word):
            current = {self.maps[symbol - 1][p] for p in current}
        return frozenset(current)

    def nerve_word_sets(self, k):
        """All simplices at depth k, as frozensets of symbol tuples."""
        words = list(product(range(1, self.m + 1), repeat=k))
        cells = {w: self.cell(w) for w in words}
        simplices = set()
        for p in self.points:
            carrier = tuple(w for w in words if p in cells[w])
            n = len(carrier)
            for mask in range(1, 1 << n):
                simplices.add(frozenset(carrier[i] for i in range(n) if mask >> i & 1))
        return simplices


def finite_cycle_system():
    """Three points cycled pairwise: h_j fixes a_j and funnels the rest."""
    a1, a2, a3 = "a1", "a2", "a3"
    return FinitePointSystem(
        {a1, a2, a3},
        [
            {a1: a1, a2: a2, a3: a2},
            {a2: a2, a3: a3, a1: a3},
            {a3: a3, a1: a1, a2: a1},
        ],
    )


def finite_trivial_system():
    """Three constant maps; every depth splits into three point cells."""
    a1, a2, a3 = "a1", "a2", "a3"
    return FinitePointSystem(
        {a1, a2, a3},
        [
            {a1: a1, a2: a1, a3: a1},
            {a1: a2, a2: a2, a3: a2},
            {a1: a3, a2: a3, a3: a3},
        ],
    )

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mapperci.bottleneck import bottleneck, bottleneck_oracle, matching_cost
from mapperci.errors import InputError
from mapperci.persistence import DiagramPoint, ExtendedDiagram

from _gen import random_diagram


def D(*rows):
    return ExtendedDiagram.from_tuples(rows)


EMPTY = ExtendedDiagram(())


def test_matching_cost_examples():
    a = D(("Ord0", 0, 2))
    assert matching_cost(a, a, [(0, 0)]) == 0
    assert matching_cost(a, EMPTY, []) == 1
    assert matching_cost(a, D(("Ord0", 0.5, 2.5)), [(0, 0)]) == 0.5
    assert matching_cost(EMPTY, EMPTY, []) == 0


def test_matching_cost_errors():
    with pytest.raises(InputError):
        matching_cost(D(("Ord0", 0, 2)), D(("Ext0", 0, 2)), [(0, 0)])
    with pytest.raises(InputError):
        matching_cost(D(("Ord0", 0, 2), ("Ord0", 0, 3)), D(("Ord0", 0, 2)), [(0, 0), (1, 0)])


def test_bottleneck_examples():
    a = D(("Ord0", 0, 2))
    assert bottleneck(a, a) == 0
    assert bottleneck(D(("Ext1", 2, 0)), D(("Ord0", 2, 0.5 + 1.5))) == 1
    assert bottleneck(a, D(("Ord0", 0.5, 2.5))) == 0.5
    assert bottleneck_oracle(EMPTY, EMPTY) == 0
    assert bottleneck_oracle(D(("Ord0", 0, 4)), EMPTY) == 2


def test_type_mismatch_pays_gaps():
    assert bottleneck(D(("Ext1", 2, 0)), D(("Rel1", 2, 0))) == 1
    assert bottleneck_oracle(D(("Ext1", 2, 0)), D(("Rel1", 2, 0))) == 1


def test_diagonal_points_free():
    assert bottleneck(D(("Ext0", 1, 1), ("Ext0", 3, 3)), EMPTY) == 0


def test_oracle_guard():
    big = D(*[("Ord0", 0, k + 1) for k in range(7)])
    with pytest.raises(InputError):
        bottleneck_oracle(big, EMPTY)


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    a, b = random_diagram(rng), random_diagram(rng)
    assert abs(bottleneck(a, b) - bottleneck_oracle(a, b)) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_pseudometric(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (random_diagram(rng, 8) for _ in range(3))
    assert bottleneck(a, a) == 0
    assert bottleneck(a, b) == bottleneck(b, a)
    assert bottleneck(a, c) <= bottleneck(a, b) + bottleneck(b, c) + 1e-12


@settings(max_examples=60, deadline=None)
@given(seeds, st.floats(-10, 10))
def test_translation_invariance(seed, shift):
    rng = np.random.default_rng(seed)
    a, b = random_diagram(rng), random_diagram(rng)

    def move(d):
        return ExtendedDiagram(tuple(DiagramPoint(p.ptype, p.birth + shift, p.death + shift) for p in d))

    assert bottleneck(move(a), move(b)) == pytest.approx(bottleneck(a, b), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_bounded_by_any_matching(seed):
    rng = np.random.default_rng(seed)
    a, b = random_diagram(rng, 4), random_diagram(rng, 4)
    best = bottleneck(a, b)
    pa, pb = a.points, b.points
    for _ in range(20):
        pairs, used = [], set()
        for i in rng.permutation(len(pa)):
            options = [j for j in range(len(pb)) if pb[j].ptype == pa[i].ptype and j not in used]
            if options and rng.random() < 0.7:
                j = int(rng.choice(options))
                used.add(j)
                pairs.append((int(i), j))
        assert best <= matching_cost(a, b, pairs) + 1e-12

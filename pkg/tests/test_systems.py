from __future__ import annotations

from math import comb

import numpy as np
import pytest

from tcsproofs.algebra import ONE, Monomial, mono_eval
from tcsproofs.systems import (
    Axiom,
    AxiomSystem,
    Family,
    HoleSets,
    Weakening,
    assignments_no_minimum,
    assignments_one_hole_per_pigeon,
    build_ord,
    build_php,
    canonical_cycle,
    enumerate_weakenings,
    full_cube,
    hole_maps,
    holesets_to_weakening,
    no_minimum,
    one_hole_per_pigeon,
    ord_literal,
    ord_monomial,
    ord_pairs,
    ord_var,
    php_var,
    tournaments,
    weakening_to_holesets,
    with_minimum,
)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_build_php_counts(n):
    system = build_php(n)
    assert system.var_count == n * (n - 1)
    assert len(system.axioms) == n + comb(n, 2) * (n - 1)
    assert system.axioms[0].label == "pigeon[1]"
    assert system.family is Family.PHP


def test_php_variable_order():
    assert php_var(3, 1, 1) == 0
    assert php_var(3, 1, 2) == 1
    assert php_var(3, 2, 1) == 2
    assert php_var(3, 3, 2) == 5


def test_build_php_too_small():
    with pytest.raises(ValueError):
        build_php(1)


def test_php_is_unsatisfiable():
    system = build_php(3)
    violated = system.violated(np.arange(2**system.var_count))
    assert violated.any(axis=1).all()


@pytest.mark.parametrize("n", [3, 4, 5])
def test_build_ord_counts(n):
    system = build_ord(n)
    assert system.var_count == comb(n, 2)
    kinds = [ax.kind for ax in system.axioms]
    assert kinds.count("nonmin") == n
    assert kinds.count("trans") == 2 * comb(n, 3)


def test_ord_literals():
    assert ord_var(4, 1, 2) == 0
    assert ord_var(4, 2, 3) == 3
    assert ord_var(4, 3, 4) == 5
    assert ord_literal(4, 3, 1) == Monomial((), (ord_var(4, 1, 3),))
    pairs = [(1, 2), (3, 1), (4, 2)]
    assert ord_pairs(4, ord_monomial(4, pairs)) == sorted(pairs)
    with pytest.raises(ValueError):
        ord_var(4, 2, 2)


def test_ord_is_unsatisfiable():
    system = build_ord(4)
    assert system.violated(tournaments(4).index).any(axis=1).all()


@pytest.mark.parametrize(
    ("cycle", "expected"),
    [((2, 3, 1), (1, 2, 3)), ((3, 1, 2), (1, 2, 3)), ((1, 3, 2), (1, 3, 2))],
)
def test_canonical_cycle(cycle, expected):
    assert canonical_cycle(*cycle) == expected


def test_axiom_lookup():
    system = build_ord(4)
    i = system.find_axiom("trans", (1, 3, 2))
    assert system.axioms[i].label == "trans[1,3,2]"
    assert system.axiom_index("nonmin[2]") == 1
    with pytest.raises(ValueError):
        system.find_axiom("trans", (3, 2, 1))
    with pytest.raises(ValueError):
        system.axiom_index("nonmin[9]")


def test_zero_axiom_rejected():
    with pytest.raises(ValueError):
        AxiomSystem(("a",), (Axiom("bad", Monomial((0,), (0,))),))


def test_system_dict_round_trip():
    system = build_php(3)
    assert AxiomSystem.from_dict(system.to_dict()) == system
    custom = AxiomSystem.from_dict(
        {"vars": ["a", "b"], "axioms": [{"label": "ab", "monomial": "x0 !x1"}]}
    )
    assert custom.family is Family.CUSTOM
    assert custom.axioms[0].monomial == Monomial((0,), (1,))


def test_weakening_normalizes_multiplier():
    system = build_php(3)
    i = system.find_axiom("hole", (1, 2, 1))
    axiom = system.axioms[i].monomial
    w = Weakening.of(system, i, Monomial((0, 4)))
    assert w.product == Monomial((*axiom.positives, 4))
    assert w.multiplier == Monomial((4,))
    assert w == Weakening.of(system, i, Monomial((4,)))
    assert Weakening.from_dict(system, w.to_dict(system)) == w


def test_enumerate_weakenings():
    system = build_php(3)
    i = system.find_axiom("hole", (1, 2, 2))
    products = [w.product for w in enumerate_weakenings(system, i)]
    assert len(products) == 3**4
    assert len(set(products)) == len(products)
    assert products[0] == system.axioms[i].monomial
    with pytest.raises(ValueError):
        next(enumerate_weakenings(system, 99))


def test_full_cube():
    cube = full_cube(3)
    assert len(cube) == 8
    assert cube.is_full_cube
    assert list(cube)[5] == (1, 0, 1)


def test_support_lookup():
    support = one_hole_per_pigeon(3)
    pos = support.position(support.index[::-1])
    assert list(pos) == list(range(len(support)))[::-1]
    assert not support.contains(np.array([0]))[0]
    with pytest.raises(ValueError):
        support.position(np.array([0]))


@pytest.mark.parametrize("n", [3, 4])
def test_one_hole_per_pigeon(n):
    support = one_hole_per_pigeon(n)
    maps = hole_maps(n)
    assert len(support) == (n - 1) ** n
    for x, f in zip(support, maps):
        for i in range(1, n + 1):
            assert [x[php_var(n, i, j)] for j in range(1, n)] == [
                int(j - 1 == f[i - 1]) for j in range(1, n)
            ]
    assert len(list(assignments_one_hole_per_pigeon(n))) == (n - 1) ** n


def test_hole_maps_order():
    maps = hole_maps(3)
    assert maps.shape == (8, 3)
    assert list(maps[1]) == [1, 0, 0]
    assert list(maps[2]) == [0, 1, 0]


@pytest.mark.parametrize("n", [3, 4, 5])
def test_minimum_partition(n):
    without, with_ = no_minimum(n), with_minimum(n)
    assert len(without) + len(with_) == 2 ** comb(n, 2)
    # a tournament has a minimum in n * 2^C(n-1,2) ways
    assert len(with_) == n * 2 ** comb(n - 1, 2)
    assert len(list(assignments_no_minimum(n))) == len(without)


def test_no_minimum_has_no_minimum():
    n = 4
    for x in no_minimum(n):
        for i in range(1, n + 1):
            beaten = [j for j in range(1, n + 1) if j != i and mono_eval(ord_literal(n, j, i), x)]
            assert beaten


def test_holesets_validation():
    with pytest.raises(ValueError):
        HoleSets.from_mapping(4, (1, 2, 1), {3: [1]})
    with pytest.raises(ValueError):
        HoleSets.from_mapping(4, (1, 2, 1), {3: [1], 4: [7]})
    with pytest.raises(ValueError):
        HoleSets.from_mapping(4, (2, 1, 1), {3: [1], 4: [2]})


def test_holesets_flip_and_mask():
    h = HoleSets.from_mapping(4, (1, 2, 1), {3: [1, 2], 4: []})
    assert h.allowed(1) == {1}
    assert h[3] == {1, 2}
    flipped = h.flip([3, 4])
    assert flipped.as_dict() == {3: [3], 4: [1, 2, 3]}
    maps = hole_maps(4)
    assert not h.mask(maps).any()
    h = HoleSets.from_mapping(4, (1, 2, 1), {3: [1, 2], 4: [3]})
    expected = (
        (maps[:, 0] == 0)
        & (maps[:, 1] == 0)
        & np.isin(maps[:, 2], [0, 1])
        & (maps[:, 3] == 2)
    )
    assert np.array_equal(h.mask(maps), expected)


@pytest.mark.parametrize(
    "mapping", [{3: [1, 2], 4: [3]}, {3: [], 4: [1, 2, 3]}, {3: [2], 4: [2]}]
)
def test_holesets_weakening_round_trip(mapping):
    n = 4
    system = build_php(n)
    h = HoleSets.from_mapping(n, (1, 2, 1), mapping)
    w = holesets_to_weakening(system, h)
    assert not w.product.positives[2:]
    assert weakening_to_holesets(system, w) == h
    support = one_hole_per_pigeon(n)
    assert np.array_equal(w.product.mask(support.index), h.mask(hole_maps(n)))


def test_weakening_to_holesets_positive_literals():
    n = 4
    system = build_php(n)
    i = system.find_axiom("hole", (1, 2, 1))
    forced = Weakening.of(system, i, Monomial((php_var(n, 3, 2),), (php_var(n, 4, 1),)))
    h = weakening_to_holesets(system, forced)
    assert h.as_dict() == {3: [2], 4: [2, 3]}
    clash = Weakening.of(system, i, Monomial((php_var(n, 3, 2), php_var(n, 3, 3))))
    assert weakening_to_holesets(system, clash).as_dict()[3] == []
    with pytest.raises(ValueError):
        weakening_to_holesets(system, Weakening.of(system, 0, ONE))


from __future__ import annotations

from fractions import Fraction

import pytest

from tcsproofs.simplex import LpModel, LpRow, LpStatus, simplex_solve


def _model(sense, costs, rows, **bounds):
    model = LpModel(sense=sense)
    for j, cost in enumerate(costs):
        model.add_variable(f"x{j}", cost=cost, **bounds)
    for coeffs, rel, rhs in rows:
        model.add_row(dict(enumerate(coeffs)), rel, rhs)
    return model


def test_max_with_duals():
    model = _model("max", [3, 2], [([1, 1], "<=", 4), ([1, 3], "<=", 9), ([1, 0], "<=", 3)])
    sol = simplex_solve(model)
    assert sol.status is LpStatus.OPTIMAL
    assert sol.value == 11
    assert sol.primal == [3, 1]
    assert sol.dual == [2, 0, 1]


def test_min_with_ge_rows():
    model = _model("min", [1, 1], [([1, 2], ">=", 4), ([3, 1], ">=", 6)])
    sol = simplex_solve(model)
    assert sol.value == Fraction(14, 5)
    assert sol.primal == [Fraction(8, 5), Fraction(6, 5)]
    assert sol.dual == [Fraction(2, 5), Fraction(1, 5)]
    # strong duality
    assert sum(d * r.rhs for d, r in zip(sol.dual, model.rows)) == sol.value


def test_equality_and_free_variables():
    model = _model("max", [1, 0], [([1, -1], "=", 1), ([0, 1], "<=", 2)], lower=None)
    sol = simplex_solve(model)
    assert sol.value == 3
    assert sol.primal == [3, 2]


def test_free_variable_can_go_negative():
    model = _model("min", [1], [([1], ">=", -5)], lower=None)
    sol = simplex_solve(model)
    assert sol.value == -5


def test_bounds():
    model = LpModel(sense="max")
    model.add_variable("x", cost=1, lower=1, upper=2)
    model.add_variable("y", cost=1, lower=1, upper=3)
    assert simplex_solve(model).value == 5

    model = LpModel(sense="min")
    model.add_variable("x", cost=1, lower=1)
    model.add_variable("y", cost=-1, lower=None, upper=4)
    sol = simplex_solve(model)
    assert sol.value == -3
    assert sol.primal == [1, 4]


def test_infeasible():
    model = _model("max", [1], [([1], "<=", -1)])
    assert simplex_solve(model).status is LpStatus.INFEASIBLE

    model = _model("max", [1, 1], [([1, 1], ">=", 3), ([1, 1], "<=", 2)])
    sol = simplex_solve(model)
    assert sol.status is LpStatus.INFEASIBLE
    assert sol.value is None


def test_unbounded():
    model = _model("max", [1, 0], [([1, -1], "<=", 1)])
    assert simplex_solve(model).status is LpStatus.UNBOUNDED


def test_phase_one_start():
    model = _model("max", [-1, -1], [([1, 1], ">=", 2), ([1, -1], "<=", 0)])
    sol = simplex_solve(model)
    assert sol.value == -2
    assert model.is_feasible(sol.primal)


@pytest.mark.parametrize("bland", [False, True])
def test_degenerate_program_terminates(bland):
    q = Fraction(1, 4)
    model = _model(
        "max",
        [3 * q, -20, 2 * q, -6],
        [
            ([q, -8, -1, 9], "<=", 0),
            ([2 * q, -12, -2 * q, 3], "<=", 0),
            ([0, 0, 1, 0], "<=", 1),
        ],
    )
    sol = simplex_solve(model, bland=bland)
    assert sol.status is LpStatus.OPTIMAL
    assert sol.value == Fraction(5, 4)


def test_row_and_model_validation():
    with pytest.raises(ValueError):
        LpRow({0: 1}, "<", 1)
    with pytest.raises(ValueError):
        LpModel(sense="maximize")
    model = LpModel()
    model.add_variable("x")
    with pytest.raises(ValueError):
        model.add_row({1: 1}, "<=", 1)


def test_row_normalization():
    row = LpRow({0: 1, 1: 0, 2: Fraction(1, 2)}, ">=", 1)
    assert row.coeffs == {0: 1, 2: Fraction(1, 2)}
    assert row.satisfied([Fraction(1, 2), 0, 1])
    assert not row.satisfied([0, 5, 1])

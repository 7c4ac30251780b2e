from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from tcsproofs.certificates import verify_certificate
from tcsproofs.lp import (
    DualFunctional,
    TcsProgram,
    build_dual_tcs,
    build_primal_tcs,
    mode_support,
    solve_program,
    solve_tcs,
    weak_duality_check,
)
from tcsproofs.simplex import LpStatus, simplex_solve
from tcsproofs.symmetry import SymmetryGroup
from tcsproofs.systems import build_ord, build_php, full_cube
from tcsproofs.utils import repeating_decimal


@pytest.mark.parametrize(
    ("build", "n", "mode", "expected"),
    [
        (build_php, 3, "full", 11),
        (build_php, 3, "restricted", 6),
        (build_php, 4, "restricted", 27),
        (build_php, 5, "restricted", 100),
        (build_ord, 3, "full", 5),
        (build_ord, 4, "full", 12),
        (build_ord, 5, "full", 27),
        (build_ord, 3, "restricted", 2),
        (build_ord, 4, "restricted", 8),
        (build_ord, 5, "restricted", 20),
    ],
)
def test_optimal_values(build, n, mode, expected):
    result = solve_tcs(build(n), mode, congen=True)
    assert result.status is LpStatus.OPTIMAL
    assert result.value == expected


@pytest.mark.parametrize("build", [build_php, build_ord])
def test_primal_equals_dual(build):
    system = build(3)
    primal = solve_tcs(system, side="primal")
    dual = solve_tcs(system, side="dual")
    assert primal.value == dual.value
    assert primal.functional().value() == dual.value


@pytest.mark.parametrize(("build", "mode"), [(build_ord, "full"), (build_php, "restricted")])
def test_symmetry_reduction_keeps_the_optimum(build, mode):
    system = build(3)
    plain = TcsProgram(system, mode_support(system, mode), SymmetryGroup.trivial(system.var_count))
    assert len(plain.orbits) == len(plain.support)
    assert solve_program(plain).value == solve_tcs(system, mode).value


@pytest.mark.parametrize(("n", "mode"), [(3, "full"), (4, "restricted")])
def test_constraint_generation_matches_enumeration(n, mode):
    system = build_php(n)
    lazy = solve_tcs(system, mode, congen=True)
    assert lazy.value == solve_tcs(system, mode).value
    assert lazy.solution.rounds >= 1


@pytest.mark.parametrize(
    ("build", "n", "mode"),
    [(build_php, 3, "full"), (build_php, 4, "restricted"), (build_ord, 4, "full")],
)
def test_certificate_and_functional(build, n, mode):
    system = build(n)
    result = solve_tcs(system, mode, congen=True)
    support = mode_support(system, mode)

    cert = result.certificate()
    assert verify_certificate(cert, support).ok
    assert cert.total_coefficient_size() == result.value

    d = result.functional()
    assert d.value() == result.value
    assert d.max_weakening_value(system, support) == 1
    assert d.normalized_value(system, support) == result.value

    check = weak_duality_check(cert, d)
    assert check.holds
    assert check.pairing == result.value


def test_restricted_certificate_fails_off_support(php3):
    cert = solve_tcs(php3, "restricted").certificate()
    assert verify_certificate(cert, mode_support(php3, "restricted")).ok
    assert not verify_certificate(cert).ok


def test_resolution_like(php3):
    result = solve_tcs(php3, "resolution-like")
    assert result.status is LpStatus.OPTIMAL
    assert 0 < result.value <= 11
    assert any(row.is_monomial for row in result.program.rows)
    with pytest.raises(ValueError):
        result.certificate()


def test_models_from_assignment_lists(ord3):
    points = list(itertools.product((0, 1), repeat=ord3.var_count))
    assert simplex_solve(build_dual_tcs(ord3, points)).value == 5
    assert simplex_solve(build_primal_tcs(ord3, points)).value == 5


def test_argument_validation(php3):
    program = TcsProgram(php3, full_cube(php3.var_count))
    with pytest.raises(ValueError):
        solve_program(program, side="both")
    with pytest.raises(ValueError):
        solve_program(program, side="primal", congen=True)
    with pytest.raises(ValueError):
        mode_support(php3, "partial")


def test_dual_functional_basics(ord3):
    d = DualFunctional(ord3.var_count, {0: Fraction(1, 2), 7: 2, 3: 0})
    assert d.values == {0: Fraction(1, 2), 7: 2}
    assert d.value() == Fraction(5, 2)
    assert d.scaled(2).value() == 5
    back = DualFunctional.from_dict(d.to_dict())
    assert back == d
    assert d.to_dict()["values"][1]["assignment"] == "111"


def test_weak_duality_dimension_check(php3, ord3):
    cert = solve_tcs(ord3).certificate()
    with pytest.raises(ValueError):
        weak_duality_check(cert, DualFunctional(php3.var_count))


@pytest.mark.slow
def test_php4_full():
    result = solve_tcs(build_php(4), congen=True)
    assert repeating_decimal(result.value) == "41.4(69)"


@pytest.mark.slow
def test_php6_restricted():
    assert solve_tcs(build_php(6), "restricted", congen=True).value == Fraction("293.75")


@pytest.mark.slow
def test_ord6_full():
    assert solve_tcs(build_ord(6), congen=True).value == 52


@pytest.mark.parametrize("factor", [3, Fraction(1, 4)])
def test_normalized_value_is_scale_free(ord3, factor):
    support = mode_support(ord3, "full")
    d = solve_tcs(ord3).functional()
    scaled = d.scaled(factor)
    assert scaled.value() == factor * d.value()
    assert scaled.max_weakening_value(ord3, support) == factor
    assert scaled.normalized_value(ord3, support) == d.normalized_value(ord3, support) == 5

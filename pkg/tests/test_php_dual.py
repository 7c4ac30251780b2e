from __future__ import annotations

from fractions import Fraction

import pytest

from tcsproofs import php_dual
from tcsproofs.algebra import Monomial, Polynomial
from tcsproofs.systems import HoleSets, build_php, hole_maps, one_hole_per_pigeon, php_var
from tcsproofs.utils import round_decimal


def _assignment(n, holes):
    x = [0] * (n * (n - 1))
    for i, j in enumerate(holes, start=1):
        x[php_var(n, i, j)] = 1
    return x


@pytest.mark.parametrize(
    ("n", "size", "expected"),
    [
        (3, 0, Fraction(1, 2)),
        (3, 1, Fraction(-1, 2)),
        (3, 2, 1),
        (4, 0, Fraction(-2, 9)),
        (4, 1, Fraction(2, 9)),
        (4, 2, Fraction(-1, 3)),
    ],
)
def test_coefficients(n, size, expected):
    assert php_dual.coefficient(n, size) == expected
    assert php_dual.PhpDualCertificate(n).coefficient(size) == expected


def test_coefficient_needs_proper_subset():
    with pytest.raises(ValueError):
        php_dual.coefficient(4, 4)
    with pytest.raises(ValueError):
        php_dual.PhpDualCertificate(1)


def test_pigeon_map():
    assert php_dual.pigeon_map(_assignment(4, (1, 3, 3, 2))) == (1, 3, 3, 2)
    x = _assignment(4, (1, 3, 3, 2))
    x[php_var(4, 2, 1)] = 1
    assert php_dual.pigeon_map(x) is None
    with pytest.raises(ValueError):
        php_dual.pigeon_map([0] * 7)


def test_j_eval():
    x = _assignment(4, (1, 3, 3, 2))
    assert php_dual.j_eval({1, 2, 4}, x) == 1
    assert php_dual.j_eval({2, 3}, x) == 0
    assert php_dual.j_eval(set(), x) == 1
    with pytest.raises(ValueError):
        php_dual.j_eval({1, 2, 3, 4}, x)
    with pytest.raises(ValueError):
        php_dual.j_eval({1}, [0] * 12)


def test_d_on_three_pigeons():
    # -1 when all pigeons share a hole, +1 otherwise
    assert php_dual.d_eval(3, _assignment(3, (1, 1, 1))) == -1
    assert php_dual.d_eval(3, _assignment(3, (2, 1, 2))) == 1
    assert php_dual.d_eval(3, [0] * 6) == 0


@pytest.mark.parametrize("n", [3, 4, 5])
def test_d_eval_matches_subset_sum(n, rng):
    for _ in range(20):
        holes = rng.integers(1, n, size=n)
        x = _assignment(n, holes)
        assert php_dual.d_eval(n, x) == php_dual.d_eval_subsets(n, x)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_expectation_of_d(n):
    assert php_dual.exp_d_closed(n) == php_dual.exp_d_brute(n)


def test_expectation_values():
    assert php_dual.exp_d_closed(3) == Fraction(1, 2)
    assert php_dual.exp_d_closed(4) == Fraction(2, 9)
    assert php_dual.exp_d_closed(5) == Fraction(3, 32)


@pytest.mark.parametrize(("n", "pigeons"), [(4, (1, 2)), (5, (2, 4, 5)), (5, ())])
def test_j_expectation(n, pigeons):
    assert php_dual.j_expectation(n, len(pigeons)) == php_dual.j_expectation_brute(n, pigeons)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_norm(n):
    assert php_dual.norm_d_squared_closed(n) == php_dual.norm_d_squared_brute(n)
    assert php_dual.norm_d_squared_closed(n) <= php_dual.rough_norm_bound(n)
    assert php_dual.partial_sums_alternate(php_dual.norm_series_terms(n))


def test_norm_on_three_pigeons():
    assert php_dual.norm_d_squared_closed(3) == 1
    assert php_dual.norm_series_terms(3) == [Fraction(1, 2), Fraction(-1, 4), Fraction(1, 12)]


@pytest.mark.parametrize(("n", "expected"), [(3, 4), (4, 18), (5, 64)])
def test_d_value(n, expected):
    assert php_dual.d_value(n) == expected


def test_d_value_six_pigeons():
    assert round_decimal(php_dual.d_value(6), 3) == "210.674"


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_maximizing_weakening(n):
    best, witness = php_dual.max_abs_exp_dw(n)
    assert abs(php_dual.exp_dw(n, witness)) == best
    conjecture = php_dual.conjectured_extremal_weakening(n)
    assert abs(php_dual.exp_dw(n, conjecture)) == best


def test_functional_agrees_with_expectations():
    d = php_dual.php_dual_functional(3)
    support = one_hole_per_pigeon(3)
    assert d.value() == php_dual.exp_d_closed(3) * 8
    assert d.max_weakening_value(build_php(3), support) == 1
    assert d.normalized_value(build_php(3), support) == php_dual.d_value(3)


@pytest.mark.parametrize("factor", [2, Fraction(3, 7)])
def test_rescaled_functional_keeps_its_value(factor):
    system = build_php(4)
    support = one_hole_per_pigeon(4)
    d = php_dual.php_dual_functional(4).scaled(factor)
    assert d.normalized_value(system, support) == php_dual.d_value(4) == 18


@pytest.mark.parametrize(
    ("n", "decimal"), [(3, "1.633"), (4, "2.828"), (5, "4.382"), (6, "6.400")]
)
def test_lower_bound(n, decimal):
    assert php_dual.php_lower_bound_value(n).decimal(3) == decimal


@pytest.mark.parametrize("n", [3, 4, 5])
def test_bound_chain(n):
    chain = php_dual.bound_chain(n)
    assert chain.holds
    assert chain.d_value >= chain.lower_bound


def test_surd_values():
    a = php_dual.SurdValue(Fraction(2), Fraction(2))
    assert a == php_dual.SurdValue(Fraction(1), Fraction(8))
    assert a > 2
    assert a < 3
    assert a > -1
    assert float(a) == pytest.approx(2.828427)
    with pytest.raises(ValueError):
        php_dual.SurdValue(Fraction(-1), Fraction(2))


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_resolution_failure(n):
    assert php_dual.resolution_failure_value(n) == php_dual.resolution_failure_brute(n)
    assert php_dual.resolution_failure_value(n) < 0
    assert php_dual.resolution_observations(n) == php_dual.resolution_observations_closed(n)
    all_first = php_dual.first_hole_monomial(n, range(1, n + 1), ())
    assert php_dual.exp_d_monomial(n, all_first) == php_dual.all_in_first_hole_value(n)


def test_resolution_failure_values():
    assert php_dual.resolution_failure_value(3) == Fraction(-1, 8)
    assert php_dual.resolution_failure_value(4) == Fraction(-16, 243)
    # the published closed form only holds for an odd number of pigeons
    assert php_dual.resolution_failure_value_printed(5) == php_dual.resolution_failure_value(5)
    assert php_dual.resolution_failure_value_printed(4) == Fraction(-20, 243)
    assert php_dual.normalized_resolution_failure(3) == -1


def test_weakening_sign_laws(rng, config):
    for _ in range(config.acceptance.samples // 4):
        n = int(rng.integers(3, 6))
        h = php_dual.random_holesets(n, rng)
        value = php_dual.exp_dw(n, h)
        assert value == php_dual.exp_dw_unreduced(n, h)
        assert php_dual.exp_d_signed_weakening(n, h) == 2 ** (n - 2) * value

        i1, i2, _ = h.axiom
        pigeon = int(rng.choice([i for i in range(1, n + 1) if i not in (i1, i2)]))
        assert php_dual.exp_dw(n, h.flip([pigeon])) == -value


def test_full_hole_set_gives_zero():
    h = HoleSets.from_mapping(4, (1, 3, 2), {2: [1, 2, 3], 4: [2]})
    assert php_dual.exp_dw(4, h) == 0


def test_dual_intuition(rng):
    for _ in range(10):
        n = int(rng.integers(3, 6))
        pigeon = int(rng.integers(1, n + 1))
        p = php_dual.random_polynomial(n, rng, pigeon)
        lhs, rhs = php_dual.dual_intuition_sides(n, p, pigeon)
        assert lhs == rhs


def test_dual_intuition_rejects_dependent_polynomials():
    p = Polynomial.from_terms([(Monomial((php_var(4, 1, 2),)), 1)])
    with pytest.raises(ValueError):
        php_dual.dual_intuition_sides(4, p, pigeon=1)
    assert php_dual.dual_intuition_sides(4, p, pigeon=2)[0] == php_dual.exp_d_polynomial(4, p)


def test_d_values_scale():
    values, scale = php_dual.d_values(4)
    assert scale == 27
    assert len(values) == len(hole_maps(4))


def test_dual_report():
    report = php_dual.dual_report(4)
    assert report["dual_value"] == 18
    assert report["E_D2_agree"]
    assert report["bound_chain_holds"]
    assert report["conjecture_match"]
    assert report["lower_bound_decimal"] == "2.828"

r"""The explicit dual certificate of the pigeonhole principle.

On the restricted measure (every pigeon in exactly one hole, uniform over
the :math:`(n-1)^n` maps) the certificate is

.. math::

    D = \sum_{S \subsetneq [n]} c_{|S|} J_S, \qquad
    c_s = (-1)^{n-1-s} \frac{(n-1-s)!}{(n-1)^{n-1-s}},

where :math:`J_S` is 1 when the pigeons of :math:`S` sit in distinct holes.
Summing over :math:`|S| = s` gives the elementary symmetric polynomial
:math:`e_s` of the hole occupation numbers, which is how :func:`d_values`
evaluates ``D`` on all maps at once. Expectations are exact rationals over
the restricted measure.
"""

from __future__ import annotations

import functools
import itertools
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import Monomial, Polynomial
from .lp import DualFunctional
from .systems import HoleSets, hole_maps, one_hole_per_pigeon, php_var
from .transforms import hole_map_array, subset_sums
from .utils import round_decimal, sqrt_round

log = logging.getLogger(__name__)

MAX_BRUTE_N = 8
MAX_SUBSET_N = 12
MAX_SEARCH_N = 6


def _check_n(n: int, *, lowest: int = 2, highest: int | None = None) -> None:
    if n < lowest or (highest is not None and n > highest):
        top = "" if highest is None else f" and at most {highest}"
        msg = f"n must be at least {lowest}{top}, got {n}"
        raise ValueError(msg)


def coefficient(n: int, size: int) -> Fraction:
    """The coefficient ``c_S`` of a pigeon set of the given size."""
    if not 0 <= size <= n - 1:
        msg = f"pigeon sets must be proper subsets of [{n}], got size {size}"
        raise ValueError(msg)
    k = n - 1 - size
    return Fraction((-1) ** k * math.factorial(k), (n - 1) ** k)


@dataclass(frozen=True)
class PhpDualCertificate:
    """The dual certificate for ``n`` pigeons, coefficients in closed form."""

    n: int

    def __post_init__(self) -> None:
        _check_n(self.n)

    def coefficient(self, size: int) -> Fraction:
        return coefficient(self.n, size)

    def __call__(self, x: Sequence[int]) -> Fraction:
        return d_eval(self.n, x)

    def expectation(self) -> Fraction:
        return exp_d_closed(self.n)

    def functional(self) -> DualFunctional:
        return php_dual_functional(self.n)


def _infer_n(var_count: int) -> int:
    n = (1 + math.isqrt(1 + 4 * var_count)) // 2
    if n * (n - 1) != var_count:
        msg = f"{var_count} variables do not form a PHP system"
        raise ValueError(msg)
    return n


def pigeon_map(x: Sequence[int], n: int | None = None) -> tuple[int, ...] | None:
    """1-based holes of the pigeons, or ``None`` if ``x`` is not one-hole-per-pigeon."""
    if n is None:
        n = _infer_n(len(x))
    if len(x) != n * (n - 1):
        msg = f"assignment of length {len(x)} does not fit PHP with n={n}"
        raise ValueError(msg)
    holes = []
    for i in range(1, n + 1):
        hit = [j for j in range(1, n) if x[php_var(n, i, j)]]
        if len(hit) != 1:
            return None
        holes.append(hit[0])
    return tuple(holes)


def j_eval(pigeons: Iterable[int], x: Sequence[int], n: int | None = None) -> int:
    """``J_S(x)``: 1 iff the pigeons of ``S`` are in pairwise different holes."""
    if n is None:
        n = _infer_n(len(x))
    pigeons = set(pigeons)
    if len(pigeons) >= n or not pigeons <= set(range(1, n + 1)):
        msg = f"J_S needs a proper subset of the pigeons 1..{n}, got {sorted(pigeons)}"
        raise ValueError(msg)
    f = pigeon_map(x, n)
    if f is None:
        msg = "J_S is only defined on one-hole-per-pigeon assignments"
        raise ValueError(msg)
    holes = [f[i - 1] for i in pigeons]
    return int(len(set(holes)) == len(holes))


def _elementary(occupation: np.ndarray, top: int) -> list[np.ndarray]:
    """``e_0 .. e_top`` of the rows of an occupation-number matrix."""
    e = [np.ones(len(occupation), dtype=np.int64)]
    e += [np.zeros(len(occupation), dtype=np.int64) for _ in range(top)]
    for col in occupation.T:
        for s in range(top, 0, -1):
            e[s] = e[s] + e[s - 1] * col
    return e


def _scaled_coefficients(n: int) -> list[int]:
    # c_s * (n-1)^(n-1)
    return [
        (-1) ** (n - 1 - s) * math.factorial(n - 1 - s) * (n - 1) ** s for s in range(n)
    ]


def d_values(n: int, maps: np.ndarray | None = None) -> tuple[np.ndarray, int]:
    """Evaluate ``D`` on pigeon-to-hole maps, grouped by occupation numbers.

    Parameters
    ----------
    n
        number of pigeons.
    maps
        0-based hole maps ``(count, n)``; all of them (:func:`~.systems.hole_maps`
        order) by default.

    Returns
    -------
    values, scale
        the integers ``D(f) * scale`` and ``scale = (n-1)^(n-1)``.
    """
    _check_n(n)
    if maps is None:
        maps = hole_maps(n)
    holes = n - 1
    occupation = np.stack([(maps == h).sum(axis=1) for h in range(holes)], axis=1)
    e = _elementary(occupation, n - 1)
    scaled = _scaled_coefficients(n)
    dtype = np.int64 if n <= 10 else object
    out = np.zeros(len(maps), dtype=dtype)
    for s, k in enumerate(scaled):
        out = out + e[s].astype(dtype) * k
    return out, holes ** (n - 1)


def d_eval(n: int, x: Sequence[int]) -> Fraction:
    """``D(x)``; zero on assignments that are not one-hole-per-pigeon."""
    f = pigeon_map(x, n)
    if f is None:
        return Fraction(0)
    values, scale = d_values(n, np.array([[h - 1 for h in f]], dtype=np.int64))
    return Fraction(int(values[0]), scale)


def d_eval_subsets(n: int, x: Sequence[int]) -> Fraction:
    """``D(x)`` summed directly over the proper pigeon subsets."""
    _check_n(n, highest=MAX_SUBSET_N)
    if pigeon_map(x, n) is None:
        return Fraction(0)
    return sum(
        (
            coefficient(n, size) * j_eval(subset, x, n)
            for size in range(n)
            for subset in itertools.combinations(range(1, n + 1), size)
        ),
        Fraction(0),
    )


def php_dual_functional(n: int) -> DualFunctional:
    """``D`` as a functional on assignments (not divided by the number of maps)."""
    values, scale = d_values(n)
    support = one_hole_per_pigeon(n)
    return DualFunctional(
        n * (n - 1), {int(x): Fraction(int(v), scale) for x, v in zip(support.index, values)}
    )


def _expectation(weights: np.ndarray, n: int) -> Fraction:
    """``E(D w)`` for integer per-map weights ``w``."""
    values, scale = d_values(n)
    total = int(np.sum(values.astype(object) * weights.astype(object)))
    return Fraction(total, scale * (n - 1) ** n)


def j_expectation(n: int, size: int) -> Fraction:
    """``E(J_S) = (n-1)(n-2)...(n-|S|) / (n-1)^|S|``."""
    if not 0 <= size <= n - 1:
        msg = f"pigeon sets must be proper subsets of [{n}], got size {size}"
        raise ValueError(msg)
    return Fraction(math.perm(n - 1, size), (n - 1) ** size)


def j_expectation_brute(n: int, pigeons: Iterable[int]) -> Fraction:
    _check_n(n, highest=MAX_BRUTE_N)
    cols = [i - 1 for i in pigeons]
    maps = hole_maps(n)[:, cols]
    distinct = np.array([len(set(row)) == len(row) for row in maps.tolist()])
    return Fraction(int(distinct.sum()), (n - 1) ** n)


def exp_d_closed(n: int) -> Fraction:
    """``E(D) = (n-2)! / (n-1)^(n-2)``."""
    _check_n(n)
    return Fraction(math.factorial(n - 2), (n - 1) ** (n - 2))


def exp_d_brute(n: int) -> Fraction:
    _check_n(n, highest=MAX_BRUTE_N)
    return _expectation(np.ones((n - 1) ** n, dtype=np.int64), n)


def exp_d_monomial(n: int, m: Monomial) -> Fraction:
    """``E(D m)`` for a monomial over the PHP variables."""
    _check_n(n, highest=MAX_BRUTE_N)
    return _expectation(m.mask(one_hole_per_pigeon(n).index).astype(np.int64), n)


def exp_d_polynomial(n: int, p: Polynomial) -> Fraction:
    """``E(D p)`` for a polynomial with rational coefficients."""
    _check_n(n, highest=MAX_BRUTE_N)
    values, scale = d_values(n)
    p_values = p.evaluate(one_hole_per_pigeon(n).index)
    total = sum(values.astype(object) * p_values, Fraction(0))
    return Fraction(total) / (scale * (n - 1) ** n)


def dual_intuition_sides(n: int, p: Polynomial, pigeon: int) -> tuple[Fraction, Fraction]:
    """``E(D p)`` and ``E(J_{[n] - {i}} p)`` for a polynomial that ignores pigeon ``i``.

    The two agree whenever ``p`` does not use the variables of pigeon ``i``.
    """
    _check_n(n, highest=MAX_BRUTE_N)
    own = {php_var(n, pigeon, j) for j in range(1, n)}
    if any(set(m.variables) & own for m, _ in p):
        msg = f"the polynomial depends on pigeon {pigeon}"
        raise ValueError(msg)
    others = [i - 1 for i in range(1, n + 1) if i != pigeon]
    maps = hole_maps(n)[:, others]
    j_rest = np.array([len(set(row)) == len(row) for row in maps.tolist()], dtype=object)
    p_values = p.evaluate(one_hole_per_pigeon(n).index)
    rhs = Fraction(sum(j_rest * p_values, Fraction(0))) / (n - 1) ** n
    return exp_d_polynomial(n, p), rhs


def _flip_small(h: HoleSets) -> tuple[HoleSets, int]:
    """Complement every hole set larger than half the holes; returns the sign picked up."""
    half = (h.n - 1) // 2
    big = [i for i, holes in h.sets if len(holes) > half]
    return h.flip(big), (-1) ** len(big)


def exp_dw(n: int, h: HoleSets) -> Fraction:
    """``E(D W)`` for the weakening with hole sets ``h``, by direct summation.

    Large hole sets are complemented first (each flip changes the sign).
    """
    _check_n(n, lowest=3, highest=MAX_BRUTE_N)
    if h.n != n:
        msg = f"hole sets for n={h.n}, expected n={n}"
        raise ValueError(msg)
    small, sign = _flip_small(h)
    return sign * _expectation(small.mask(hole_maps(n)).astype(np.int64), n)


def exp_dw_unreduced(n: int, h: HoleSets) -> Fraction:
    """``E(D W)`` summed directly, without the flip reduction."""
    _check_n(n, lowest=3, highest=MAX_BRUTE_N)
    return _expectation(h.mask(hole_maps(n)).astype(np.int64), n)


def signed_weakening(h: HoleSets, maps: np.ndarray) -> np.ndarray:
    """``W^{-1,0,1}``: zero unless the axiom pair collides, else ``prod_i (+1 if f(i) in H_i else -1)``."""
    i1, i2, j = h.axiom
    out = ((maps[:, i1 - 1] == j - 1) & (maps[:, i2 - 1] == j - 1)).astype(np.int64)
    for pigeon, holes in h.sets:
        allowed = np.isin(maps[:, pigeon - 1], [k - 1 for k in holes])
        out = out * np.where(allowed, 1, -1)
    return out


def exp_d_signed_weakening(n: int, h: HoleSets) -> Fraction:
    """``E(D W^{-1,0,1})``, equal to ``2^(n-2) E(D W)``."""
    _check_n(n, lowest=3, highest=MAX_BRUTE_N)
    return _expectation(signed_weakening(h, hole_maps(n)), n)


def random_holesets(n: int, rng: np.random.Generator) -> HoleSets:
    """Hole sets of a uniformly random hole axiom with uniformly random subsets."""
    i1, i2 = sorted(int(i) for i in rng.choice(np.arange(1, n + 1), size=2, replace=False))
    j = int(rng.integers(1, n))
    mapping = {
        i: [h for h in range(1, n) if rng.random() < 0.5]
        for i in range(1, n + 1)
        if i not in (i1, i2)
    }
    return HoleSets.from_mapping(n, (i1, i2, j), mapping)


def random_polynomial(
    n: int, rng: np.random.Generator, pigeon: int, terms: int = 4, degree: int = 3
) -> Polynomial:
    """Random polynomial with small integer coefficients avoiding the variables of ``pigeon``."""
    allowed = [
        php_var(n, i, j) for i in range(1, n + 1) if i != pigeon for j in range(1, n)
    ]
    pairs = []
    for _ in range(terms):
        size = int(rng.integers(0, min(degree, len(allowed)) + 1))
        chosen = rng.choice(allowed, size=size, replace=False)
        signs = rng.random(size) < 0.5
        mono = Monomial(
            tuple(int(v) for v, s in zip(chosen, signs) if s),
            tuple(int(v) for v, s in zip(chosen, signs) if not s),
        )
        pairs.append((mono, int(rng.integers(-3, 4))))
    return Polynomial.from_terms(pairs)


def max_abs_exp_dw(n: int) -> tuple[Fraction, HoleSets]:
    """Exact ``max_W |E(D W)|`` over all weakenings and a maximizing one.

    By symmetry only the axiom ``x[1,1] x[2,1]`` is searched; a subset-sum
    transform gives ``E(D W)`` for every hole-set tuple at once, and only
    tuples with sets of at most half the holes are compared.
    """
    _check_n(n, lowest=3, highest=MAX_SEARCH_N)
    values, scale = d_values(n)
    holes = n - 1
    sums = subset_sums(hole_map_array(values, n)[0, 0], holes)
    small = [m for m in range(2**holes) if m.bit_count() <= holes // 2]
    sums = np.abs(sums[np.ix_(*[small] * (n - 2))])
    pos = np.unravel_index(int(np.argmax(sums)), sums.shape)
    best = Fraction(int(sums[pos]), scale * holes**n)
    mapping = {
        pigeon: [h + 1 for h in range(holes) if (small[k] >> h) & 1]
        for pigeon, k in zip(range(3, n + 1), pos)
    }
    witness = HoleSets.from_mapping(n, (1, 2, 1), mapping)
    log.debug("n=%d: max |E(DW)| = %s at %s", n, best, witness.as_dict())
    return best, witness


def d_value(n: int) -> Fraction:
    """The bound ``E(D) / max_W |E(D W)|`` certified by the rescaled certificate."""
    return exp_d_closed(n) / max_abs_exp_dw(n)[0]


def conjectured_extremal_weakening(n: int) -> HoleSets:
    """The weakening of ``x[1,1] x[2,1]`` that maximizes ``|E(D W)|`` for small ``n``.

    Odd ``n``: every other pigeon may use holes ``2..(n+1)/2``. Even ``n``:
    pigeons ``3..n/2+1`` use ``2..n/2`` and pigeons ``n/2+2..n`` use
    ``n/2+1..n-1``.
    """
    _check_n(n, lowest=3)
    if n % 2:
        block = list(range(2, (n + 1) // 2 + 1))
        mapping = {i: block for i in range(3, n + 1)}
    else:
        half = n // 2
        mapping = {i: list(range(2, half + 1)) for i in range(3, half + 2)}
        mapping |= {i: list(range(half + 1, n)) for i in range(half + 2, n + 1)}
    return HoleSets.from_mapping(n, (1, 2, 1), mapping)


def norm_series_terms(n: int) -> list[Fraction]:
    """Terms of the series in ``E(D^2)``, largest first (``c = n-1`` down to ``0``)."""
    _check_n(n)
    return [
        Fraction((-1) ** (n - 1 - c), (n - c) * (n - 1) ** (n - 1 - c) * math.factorial(c))
        for c in range(n - 1, -1, -1)
    ]


def partial_sums_alternate(terms: Sequence[Fraction]) -> bool:
    """True if the partial sums lie alternately above and below the total."""
    total = sum(terms, Fraction(0))
    partial = Fraction(0)
    signs = []
    for term in terms:
        partial += term
        if partial != total:
            signs.append(partial > total)
    return all(a != b for a, b in itertools.pairwise(signs))


def norm_d_squared_closed(n: int) -> Fraction:
    """``E(D^2) = E(D) * n! * sum_c (-1)^(n-1-c) / ((n-c) (n-1)^(n-1-c) c!)``."""
    return exp_d_closed(n) * math.factorial(n) * sum(norm_series_terms(n), Fraction(0))


def norm_d_squared_brute(n: int) -> Fraction:
    _check_n(n, highest=MAX_BRUTE_N)
    values, scale = d_values(n)
    total = int(np.sum(values.astype(object) ** 2))
    return Fraction(total, scale**2 * (n - 1) ** n)


def rough_norm_bound(n: int) -> Fraction:
    """``n! / (n-1)^(n-1)``, an upper bound on ``E(D^2)``."""
    _check_n(n)
    return Fraction(math.factorial(n), (n - 1) ** (n - 1))


@functools.total_ordering
@dataclass(frozen=True)
class SurdValue:
    """The non-negative number ``coef * sqrt(radicand)``, compared through its square."""

    coef: Fraction
    radicand: Fraction

    def __post_init__(self) -> None:
        if self.coef < 0 or self.radicand < 0:
            msg = "surd values are non-negative"
            raise ValueError(msg)

    @property
    def square(self) -> Fraction:
        return Fraction(self.coef) ** 2 * self.radicand

    def decimal(self, places: int = 3) -> str:
        return sqrt_round(self.square, places)

    def __float__(self) -> float:
        return float(self.coef) * math.sqrt(self.radicand)

    @staticmethod
    def _square_of(other: SurdValue | Fraction | int) -> Fraction:
        if isinstance(other, SurdValue):
            return other.square
        if other < 0:
            return Fraction(-1)
        return Fraction(other) ** 2

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (SurdValue, Fraction, int)):
            return NotImplemented
        return self.square == self._square_of(other)

    def __lt__(self, other: SurdValue | Fraction | int) -> bool:
        return self.square < self._square_of(other)

    def __hash__(self) -> int:
        return hash(self.square)

    def __str__(self) -> str:
        return f"{self.coef}*sqrt({self.radicand})"


def php_lower_bound_value(n: int) -> SurdValue:
    """``2^(n-2) (n-1) / sqrt(n) * sqrt((n-1)! / (n-1)^(n-1))``."""
    _check_n(n)
    return SurdValue(
        Fraction(2 ** (n - 2) * (n - 1)),
        Fraction(math.factorial(n - 1), n * (n - 1) ** (n - 1)),
    )


@dataclass(frozen=True)
class BoundChain:
    """``d_value >= E(D) (n-1) 2^(n-2) / sqrt(E(D^2)) >= lower bound``."""

    n: int
    d_value: Fraction
    norm_bound: SurdValue
    lower_bound: SurdValue

    @property
    def holds(self) -> bool:
        return self.d_value >= self.norm_bound >= self.lower_bound


def bound_chain(n: int) -> BoundChain:
    e_d = exp_d_closed(n)
    norm = SurdValue(e_d * (n - 1) * 2 ** (n - 2), 1 / norm_d_squared_closed(n))
    return BoundChain(n, d_value(n), norm, php_lower_bound_value(n))


def first_hole_monomial(n: int, inside: Iterable[int], outside: Iterable[int]) -> Monomial:
    return Monomial(
        tuple(php_var(n, i, 1) for i in inside), tuple(php_var(n, i, 1) for i in outside)
    )


def resolution_failure_value(n: int) -> Fraction:
    r"""``E(D prod_i (1 - x[i,1])) = -(n-2)!/(n-1)^(n-1) * (1 - 1/(n-1)^(n-2))``."""
    _check_n(n, lowest=3)
    base = Fraction(math.factorial(n - 2), (n - 1) ** (n - 1))
    return -base * (1 - Fraction(1, (n - 1) ** (n - 2)))


def resolution_failure_value_printed(n: int) -> Fraction:
    """The published closed form; it agrees with :func:`resolution_failure_value` for odd ``n``."""
    _check_n(n, lowest=3)
    base = Fraction(math.factorial(n - 2), (n - 1) ** (n - 1))
    return -base * (1 - Fraction((-1) ** (n - 1), (n - 1) ** (n - 2)))


def resolution_failure_brute(n: int) -> Fraction:
    return exp_d_monomial(n, first_hole_monomial(n, (), range(1, n + 1)))


def resolution_observations(n: int) -> tuple[Fraction, Fraction, Fraction]:
    """``E(D m)`` for the three monomials whose signed sum is ``prod_i (1 - x[i,1])``.

    ``prod_{i>=2} (1 - x[i,1])``, ``x[1,1] prod_{i>=3} (1 - x[i,1])`` and
    ``x[1,1] x[2,1] prod_{i>=3} (1 - x[i,1])``.
    """
    rest = range(3, n + 1)
    return (
        exp_d_monomial(n, first_hole_monomial(n, (), range(2, n + 1))),
        exp_d_monomial(n, first_hole_monomial(n, (1,), rest)),
        exp_d_monomial(n, first_hole_monomial(n, (1, 2), rest)),
    )


def resolution_observations_closed(n: int) -> tuple[Fraction, Fraction, Fraction]:
    _check_n(n, lowest=3)
    return (
        Fraction(0),
        Fraction(math.factorial(n - 2), (n - 1) ** (n - 1)),
        Fraction(math.factorial(n - 2), (n - 1) ** (2 * n - 3)),
    )


def all_in_first_hole_value(n: int) -> Fraction:
    """``E(D prod_i x[i,1]) = (-1)^n (n-2)! / (n-1)^(2n-3)``."""
    _check_n(n, lowest=3)
    return Fraction((-1) ** n * math.factorial(n - 2), (n - 1) ** (2 * n - 3))


def normalized_resolution_failure(n: int) -> Fraction:
    """The failure value after rescaling ``D`` so that ``max_W |E(D W)| = 1``."""
    return resolution_failure_value(n) / max_abs_exp_dw(n)[0]


@dataclass(frozen=True)
class ExpectationReport:
    closed_form: Fraction
    brute_force: Fraction

    @property
    def agree(self) -> bool:
        return self.closed_form == self.brute_force


def dual_report(n: int) -> dict:
    """Closed forms, brute-force checks and the certified bound for ``n`` pigeons."""
    _check_n(n, lowest=3, highest=MAX_SEARCH_N)
    best, witness = max_abs_exp_dw(n)
    conjecture = conjectured_extremal_weakening(n)
    chain = bound_chain(n)
    norm = ExpectationReport(norm_d_squared_closed(n), norm_d_squared_brute(n))
    report = {
        "n": n,
        "E_D": exp_d_closed(n),
        "E_D_brute": exp_d_brute(n),
        "E_D2_closed": norm.closed_form,
        "E_D2_brute": norm.brute_force,
        "E_D2_agree": norm.agree,
        "max_expDW": best,
        "max_expDW_witness": {str(k): v for k, v in witness.as_dict().items()},
        "dual_value": chain.d_value,
        "dual_value_decimal": round_decimal(chain.d_value, 3),
        "lower_bound": str(chain.lower_bound),
        "lower_bound_decimal": chain.lower_bound.decimal(3),
        "bound_chain_holds": chain.holds,
        "conjecture_match": abs(exp_dw(n, conjecture)) == best,
        "resolution_failure": resolution_failure_value(n),
        "resolution_failure_normalized": normalized_resolution_failure(n),
    }
    log.info("n=%d: value of D %s", n, report["dual_value_decimal"])
    return report

"""Total-coefficient-size programs of refutations over a support.

For an axiom system and a finite list of assignments (the *support*) the
minimum total coefficient size of a Nullstellensatz refutation that is valid
on the support is the optimum of

.. code-block:: text

    primal:  min  sum_W |c_W|     s.t.  sum_W c_W W(x) = 1  for x in support
    dual:    max  sum_x D(x)      s.t.  |sum_x W(x) D(x)| <= 1  for every weakening W

Both programs are built on orbits of the support under a symmetry group of
the system: an optimal dual can be averaged over the group, so ``D`` is
constant on orbits and the weakenings of one axiom per axiom orbit suffice.
Weakenings are generated from sum transforms (see :mod:`.transforms`), either
all at once or lazily by a separation oracle.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import Monomial, Polynomial, bits_of, index_of
from .certificates import ProofCertificate
from .simplex import LpModel, LpRow, LpSolution, LpStatus, simplex_solve
from .symmetry import SymmetryGroup, symmetry_of
from .systems import (
    AxiomSystem,
    Family,
    HoleSets,
    Support,
    Weakening,
    full_cube,
    holesets_to_weakening,
    no_minimum,
    one_hole_per_pigeon,
)
from .transforms import (
    cube_array,
    digits_to_literals,
    fix_literals,
    hole_map_array,
    subcube_sums,
    subset_sums,
    top_entries,
)
from .utils import format_fraction, parse_fraction, round_decimal, scale_to_integers

log = logging.getLogger(__name__)

MODES = ("full", "restricted", "resolution-like")
SIDES = ("primal", "dual")
DEFAULT_BATCH = 50
MAX_TRANSFORM_SIZE = 3**14


@dataclass
class DualFunctional:
    """A finitely supported weighting ``D`` of assignments.

    ``values`` maps cube indices to ``D(x)``; a polynomial ``p`` is sent to
    ``sum_x D(x) p(x)``.
    """

    var_count: int
    values: dict[int, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.values = {int(k): Fraction(v) for k, v in self.values.items() if v != 0}

    def __call__(self, p: Polynomial | Monomial) -> Fraction:
        if isinstance(p, Monomial):
            p = Polynomial({p: Fraction(1)})
        if not self.values:
            return Fraction(0)
        index = np.fromiter(self.values, dtype=np.int64)
        weights = np.array(list(self.values.values()), dtype=object)
        return Fraction(sum(weights * p.evaluate(index), Fraction(0)))

    def value(self) -> Fraction:
        """``D(1)``."""
        return sum(self.values.values(), Fraction(0))

    def of_weakening(self, w: Weakening) -> Fraction:
        return self(w.product)

    def scaled(self, factor: Fraction | int) -> DualFunctional:
        return DualFunctional(self.var_count, {k: v * factor for k, v in self.values.items()})

    def max_weakening_value(self, system: AxiomSystem, support: Support | None = None) -> Fraction:
        """``max_W |D(W)|`` over every weakening of every axiom.

        Parameters
        ----------
        system
            the axiom system.
        support
            a support containing the points of ``D`` (the full cube by
            default); it selects the weakening transforms.
        """
        if support is None:
            support = full_cube(self.var_count)
        rows = np.zeros(len(support), dtype=object)
        rows[:] = Fraction(0)
        if self.values:
            rows[support.position(np.fromiter(self.values, dtype=np.int64))] = list(
                self.values.values()
            )
        ints, scale = scale_to_integers(rows, terms=len(support))
        best = 0
        for family in weakening_families(system, support):
            sums = family.sums(ints)
            if sums.size:
                best = max(best, int(np.max(np.abs(sums))))
        return Fraction(best, scale)

    def normalized_value(self, system: AxiomSystem, support: Support | None = None) -> Fraction:
        """``D(1) / max_W |D(W)|``, the bound certified by the rescaled functional."""
        top = self.max_weakening_value(system, support)
        if top == 0:
            msg = "the functional vanishes on every weakening"
            raise ValueError(msg)
        return self.value() / top

    def to_dict(self) -> dict:
        return {
            "var_count": self.var_count,
            "values": [
                {"assignment": "".join(map(str, bits_of(k, self.var_count))), "value": v}
                for k, v in sorted(self.values.items())
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> DualFunctional:
        return cls(
            int(data["var_count"]),
            {
                index_of([int(b) for b in item["assignment"]]): parse_fraction(item["value"])
                for item in data["values"]
            },
        )


class WeakeningFamily:
    """Every weakening of one axiom, seen as a function on a support.

    :meth:`sums` maps per-assignment values to the sums ``sum_x W(x) v(x)``
    of all members at once; :meth:`member` decodes a position of that array.
    """

    def __init__(self, system: AxiomSystem, support: Support, axiom_index: int | None):
        self.system = system
        self.support = support
        self.axiom_index = axiom_index

    def sums(self, values: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def member(self, position: Sequence[int]) -> Weakening | Monomial:
        raise NotImplementedError

    @staticmethod
    def product(member: Weakening | Monomial) -> Monomial:
        return member.product if isinstance(member, Weakening) else member


class CubeFamily(WeakeningFamily):
    """Weakenings ``r * p`` for all monomials ``r`` in the other variables.

    With ``axiom_index=None`` the members are the plain monomials over all
    variables.
    """

    def __init__(self, system: AxiomSystem, support: Support, axiom_index: int | None):
        super().__init__(system, support, axiom_index)
        axiom = Monomial() if axiom_index is None else system.axioms[axiom_index].monomial
        self.fixed = axiom
        used = set(axiom.variables)
        self.free = [v for v in range(system.var_count) if v not in used]
        if 3 ** len(self.free) > MAX_TRANSFORM_SIZE:
            msg = (
                f"{3 ** len(self.free)} weakenings per axiom are too many to transform; "
                "reduce the system size"
            )
            raise ValueError(msg)

    def sums(self, values: np.ndarray) -> np.ndarray:
        n_vars = self.system.var_count
        if self.support.is_full_cube and np.array_equal(
            self.support.index, np.arange(2**n_vars)
        ):
            full = np.asarray(values)
        else:
            full = np.zeros(2**n_vars, dtype=np.asarray(values).dtype)
            full[self.support.index] = values
        arr = fix_literals(cube_array(full, n_vars), self.fixed.positives, self.fixed.negatives)
        return subcube_sums(arr)

    def member(self, position: Sequence[int]) -> Weakening | Monomial:
        pos, neg = digits_to_literals(position, self.free)
        multiplier = Monomial(pos, neg)
        if self.axiom_index is None:
            return multiplier
        return Weakening.of(self.system, self.axiom_index, multiplier)


class HoleSetFamily(WeakeningFamily):
    """Weakenings of a hole axiom on the one-hole-per-pigeon support, by hole sets."""

    def __init__(self, system: AxiomSystem, support: Support, axiom_index: int):
        super().__init__(system, support, axiom_index)
        self.n = system.n
        self.axiom = system.axioms[axiom_index].params
        self.others = [i for i in range(1, self.n + 1) if i not in self.axiom[:2]]

    def sums(self, values: np.ndarray) -> np.ndarray:
        i1, i2, j = self.axiom
        arr = hole_map_array(values, self.n)
        idx: list[int | slice] = [slice(None)] * self.n
        idx[i1 - 1] = idx[i2 - 1] = j - 1
        return subset_sums(arr[tuple(idx)], self.n - 1)

    def member(self, position: Sequence[int]) -> Weakening:
        mapping = {
            pigeon: [h + 1 for h in range(self.n - 1) if (int(mask) >> h) & 1]
            for pigeon, mask in zip(self.others, position)
        }
        return holesets_to_weakening(
            self.system, HoleSets.from_mapping(self.n, self.axiom, mapping)
        )


def is_one_hole_per_pigeon(system: AxiomSystem, support: Support) -> bool:
    if system.family is not Family.PHP:
        return False
    ref = one_hole_per_pigeon(system.n)
    return len(support) == len(ref) and np.array_equal(support.index, ref.index)


def weakening_families(
    system: AxiomSystem, support: Support, axioms: Iterable[int] | None = None
) -> list[WeakeningFamily]:
    """One family per axiom that is not identically 0 on the support."""
    restricted = is_one_hole_per_pigeon(system, support)
    out: list[WeakeningFamily] = []
    for i in range(len(system.axioms)) if axioms is None else axioms:
        axiom = system.axioms[i]
        if not axiom.monomial.mask(support.index).any():
            continue
        if restricted and axiom.kind == "hole":
            out.append(HoleSetFamily(system, support, i))
        else:
            out.append(CubeFamily(system, support, i))
    return out


def as_support(system: AxiomSystem, assignments: Support | Iterable[Sequence[int]]) -> Support:
    """Wrap a stream of 0/1 assignments into a :class:`~.systems.Support`."""
    if isinstance(assignments, Support):
        return assignments
    index = [index_of(x) for x in assignments]
    return Support(system.var_count, np.array(index, dtype=np.int64), "custom")


def mode_support(system: AxiomSystem, mode: str) -> Support:
    """The support of a named program: ``full`` cube or the family's ``restricted`` one."""
    if mode not in MODES:
        msg = f"unknown mode '{mode}', expected one of {MODES}"
        raise ValueError(msg)
    if mode != "restricted":
        return full_cube(system.var_count)
    if system.family is Family.PHP:
        return one_hole_per_pigeon(system.n)
    if system.family is Family.ORD:
        return no_minimum(system.n)
    msg = "restricted supports exist for the PHP and ORD families only"
    raise ValueError(msg)


@dataclass(frozen=True)
class ProgramRow:
    """A weakening (or, for resolution-like programs, a monomial) and its orbit counts."""

    member: Weakening | Monomial
    counts: tuple[int, ...]

    @property
    def is_monomial(self) -> bool:
        return isinstance(self.member, Monomial)


class TcsProgram:
    """The orbit-reduced total-coefficient-size program of a system on a support.

    Parameters
    ----------
    system
        the axiom system.
    support
        the assignments on which the refutation must hold; it must be closed
        under ``symmetry``.
    symmetry
        a group of signed variable permutations preserving the axioms. The
        trivial group gives the unreduced program with one variable per
        assignment.
    resolution_like
        add the monomial constraints ``D(r) >= -1`` (dual) and the matching
        non-negative monomial columns (primal).
    """

    def __init__(
        self,
        system: AxiomSystem,
        support: Support,
        symmetry: SymmetryGroup | None = None,
        *,
        resolution_like: bool = False,
    ):
        self.system = system
        self.support = support
        self.symmetry = symmetry or SymmetryGroup.trivial(system.var_count)
        self.orbits = self.symmetry.orbits(support)
        self.families = weakening_families(
            system, support, self.symmetry.axiom_representatives(system)
        )
        self.monomials = CubeFamily(system, support, None) if resolution_like else None
        self.rows: list[ProgramRow] = []
        self._seen: set[tuple[bool, tuple[int, ...]]] = set()
        log.info(
            "%s on %s: %d orbit variables, %d weakening families",
            "resolution-like program" if resolution_like else "TCS program",
            support,
            len(self.orbits),
            len(self.families),
        )

    @property
    def resolution_like(self) -> bool:
        return self.monomials is not None

    def row_counts(self, product: Monomial) -> tuple[int, ...]:
        """``|W ∩ O|`` for every orbit ``O``."""
        return tuple(int(k) for k in self.orbits.counts(product.mask(self.support.index)))

    def add_row(self, member: Weakening | Monomial, counts: Sequence[int] | None = None) -> bool:
        """Add a row unless it is zero or duplicates an existing one."""
        if counts is None:
            counts = self.row_counts(WeakeningFamily.product(member))
        counts = tuple(int(k) for k in counts)
        key = (isinstance(member, Monomial), counts)
        if not any(counts) or key in self._seen:
            return False
        self._seen.add(key)
        self.rows.append(ProgramRow(member, counts))
        return True

    def seed(self) -> int:
        """Add one point weakening per orbit; this bounds every orbit variable by 1."""
        added = 0
        violated = self.system.violated(self.support.index[self.orbits.representatives])
        for row, hits in zip(self.orbits.representatives, violated):
            bits = bits_of(int(self.support.index[row]), self.system.var_count)
            if not hits.any():
                msg = f"assignment {bits} satisfies every axiom, no refutation exists on this support"
                raise ValueError(msg)
            point = Monomial(
                tuple(v for v, b in enumerate(bits) if b),
                tuple(v for v, b in enumerate(bits) if not b),
            )
            added += self.add_row(Weakening.of(self.system, int(np.argmax(hits)), point))
        return added

    def _all_families(self) -> list[WeakeningFamily]:
        return [*self.families, *([self.monomials] if self.monomials else [])]

    def enumerate_rows(self) -> int:
        """Add every distinct row (all weakenings of the representative axioms)."""
        added = 0
        for family in self._all_families():
            blocks = [family.sums(self.orbits.indicator(k)) for k in range(len(self.orbits))]
            shape = blocks[0].shape
            matrix = np.stack([b.reshape(-1) for b in blocks], axis=1)
            unique, first = np.unique(matrix, axis=0, return_index=True)
            for counts, pos in zip(unique, first):
                if counts.any():
                    member = family.member(np.unravel_index(int(pos), shape))
                    added += self.add_row(member, counts)
            log.debug("family of axiom %s: %d candidate rows", family.axiom_index, len(unique))
        log.info("enumerated %d distinct rows", len(self.rows))
        return added

    def separate(self, orbit_values: Sequence[Fraction], batch: int = DEFAULT_BATCH) -> list[int]:
        """Add the most violated rows for a candidate dual; returns their row numbers."""
        ints, scale = scale_to_integers(orbit_values, terms=len(self.support))
        values = ints[self.orbits.labels]
        start = len(self.rows)
        for family in self.families:
            sums = family.sums(values)
            for pos in top_entries(sums, scale, batch):
                self.add_row(family.member(pos))
        if self.monomials is not None:
            sums = self.monomials.sums(values)
            below = np.where((sums < 0).astype(bool), -sums, 0)
            for pos in top_entries(below, scale, batch):
                self.add_row(self.monomials.member(pos))
        new = list(range(start, len(self.rows)))
        log.debug("separation added %d rows", len(new))
        return new

    def _lp_rows(self, i: int) -> list[LpRow]:
        row = self.rows[i]
        coeffs = {k: c for k, c in enumerate(row.counts) if c}
        if row.is_monomial:
            return [LpRow(coeffs, ">=", Fraction(-1), (i, 0))]
        return [
            LpRow(coeffs, "<=", Fraction(1), (i, 1)),
            LpRow(coeffs, ">=", Fraction(-1), (i, -1)),
        ]

    def dual_model(self) -> LpModel:
        """``max sum_O |O| d_O`` subject to the rows collected so far."""
        model = LpModel(sense="max")
        for k, size in enumerate(self.orbits.sizes):
            model.add_variable(f"d[{k}]", cost=int(size), lower=None)
        for i in range(len(self.rows)):
            model.rows.extend(self._lp_rows(i))
        return model

    def primal_model(self) -> LpModel:
        """``min sum |c_W| (+ sum z_r)`` with one equality per orbit."""
        model = LpModel(sense="min")
        columns: list[tuple[int, int]] = []
        for i, row in enumerate(self.rows):
            if row.is_monomial:
                columns.append((model.add_variable(f"z[{i}]", cost=1), -1))
            else:
                columns.append((model.add_variable(f"c+[{i}]", cost=1), 1))
                columns.append((model.add_variable(f"c-[{i}]", cost=1), -1))
        owners = [i for i, row in enumerate(self.rows) for _ in range(1 if row.is_monomial else 2)]
        for k, size in enumerate(self.orbits.sizes):
            coeffs = {}
            for (j, sign), i in zip(columns, owners):
                count = self.rows[i].counts[k]
                if count:
                    coeffs[j] = sign * count
            model.add_row(coeffs, "=", int(size), tag=k)
        return model

    def oracle(self, batch: int = DEFAULT_BATCH) -> Callable[[LpSolution], list[LpRow]]:
        """Separation oracle for :func:`solve_with_constraint_generation` on :meth:`dual_model`."""

        def _oracle(solution: LpSolution) -> list[LpRow]:
            new = self.separate(solution.primal, batch)
            return [r for i in new for r in self._lp_rows(i)]

        return _oracle


def _enumerated(
    system: AxiomSystem,
    assignments: Support | Iterable[Sequence[int]],
    symmetry: SymmetryGroup | None,
    *,
    resolution_like: bool = False,
) -> TcsProgram:
    program = TcsProgram(
        system, as_support(system, assignments), symmetry, resolution_like=resolution_like
    )
    program.seed()
    program.enumerate_rows()
    return program


def build_primal_tcs(
    system: AxiomSystem,
    assignments: Support | Iterable[Sequence[int]],
    symmetry: SymmetryGroup | None = None,
) -> LpModel:
    """The primal program: columns ``c+``/``c-`` per weakening, one equality per orbit.

    Weakenings that agree on the support share a column.
    """
    return _enumerated(system, assignments, symmetry).primal_model()


def build_dual_tcs(
    system: AxiomSystem,
    assignments: Support | Iterable[Sequence[int]],
    symmetry: SymmetryGroup | None = None,
) -> LpModel:
    """The dual program: one variable per orbit, ``|D(W)| <= 1`` for every weakening."""
    return _enumerated(system, assignments, symmetry).dual_model()


def build_dual_resolution_like(
    system: AxiomSystem,
    assignments: Support | Iterable[Sequence[int]],
    symmetry: SymmetryGroup | None = None,
) -> LpModel:
    """The dual program with the extra rows ``D(r) >= -1`` for every monomial ``r``."""
    return _enumerated(system, assignments, symmetry, resolution_like=True).dual_model()


def solve_with_constraint_generation(
    model: LpModel,
    oracle: Callable[[LpSolution], list[LpRow]],
    *,
    max_rounds: int | None = None,
    bland: bool = False,
) -> LpSolution:
    """Solve a relaxation, add the rows the oracle reports violated, repeat.

    Parameters
    ----------
    model
        the initial (relaxed) program; rows are appended to it in place.
    oracle
        returns violated rows for a solution, or an empty list when the
        solution is feasible for the full program.
    max_rounds
        give up (``RuntimeError``) after this many solves.
    """
    rounds = 0
    while True:
        rounds += 1
        solution = simplex_solve(model, bland=bland)
        if solution.status is not LpStatus.OPTIMAL:
            solution.rounds = rounds
            return solution
        rows = oracle(solution)
        log.info(
            "round %d: %d rows, value %s, %d new rows",
            rounds,
            len(model.rows),
            solution.value,
            len(rows),
        )
        if not rows:
            solution.rounds = rounds
            return solution
        if max_rounds is not None and rounds >= max_rounds:
            msg = f"constraint generation did not converge in {max_rounds} rounds"
            raise RuntimeError(msg)
        model.rows.extend(rows)


@dataclass
class TcsResult:
    """A solved TCS program.

    ``orbit_values`` is the optimal dual per orbit and ``coefficients`` the
    optimal primal coefficient per program row (zero rows omitted).
    """

    program: TcsProgram
    solution: LpSolution
    side: str
    orbit_values: list[Fraction] = field(default_factory=list)
    coefficients: dict[int, Fraction] = field(default_factory=dict)

    @property
    def status(self) -> LpStatus:
        return self.solution.status

    @property
    def value(self) -> Fraction | None:
        return self.solution.value

    def functional(self) -> DualFunctional:
        """The optimal dual functional, constant on orbits."""
        support = self.program.support
        d = self.orbit_values
        return DualFunctional(
            self.program.system.var_count,
            {int(x): d[k] for x, k in zip(support.index, self.program.orbits.labels)},
        )

    def certificate(self) -> ProofCertificate:
        """The optimal refutation, spread over the symmetry group.

        It is valid on the program's support.
        """
        program = self.program
        if program.resolution_like:
            msg = "resolution-like solutions are not Nullstellensatz certificates"
            raise ValueError(msg)
        group = program.symmetry
        order = len(group.elements)
        cert = ProofCertificate(program.system)
        for i, c in self.coefficients.items():
            for image in group.weakening_images(program.system, program.rows[i].member):
                cert.add(image, c / order)
        return cert

    def to_dict(self) -> dict:
        data = {
            "status": self.status.value,
            "side": self.side,
            "support": self.program.support.name,
            "orbits": len(self.program.orbits),
            "rows": len(self.program.rows),
            "rounds": self.solution.rounds,
            "pivots": self.solution.pivots,
        }
        if self.value is not None:
            data |= {
                "value": format_fraction(self.value),
                "value_numer": self.value.numerator,
                "value_denom": self.value.denominator,
                "decimal_10dp": round_decimal(self.value, 10),
            }
        return data


def solve_program(
    program: TcsProgram,
    *,
    side: str = "dual",
    congen: bool = False,
    batch: int = DEFAULT_BATCH,
    max_rounds: int | None = None,
    bland: bool = False,
) -> TcsResult:
    """Solve a :class:`TcsProgram` and read off both optimal witnesses.

    The dual side yields the refutation from the row multipliers, the primal
    side yields the dual functional from the equality multipliers.
    """
    if side not in SIDES:
        msg = f"unknown side '{side}', expected one of {SIDES}"
        raise ValueError(msg)
    if congen and side == "primal":
        msg = "constraint generation works on the dual side only"
        raise ValueError(msg)

    program.seed()
    if not congen:
        program.enumerate_rows()

    if side == "dual":
        model = program.dual_model()
        if congen:
            solution = solve_with_constraint_generation(
                model, program.oracle(batch), max_rounds=max_rounds, bland=bland
            )
        else:
            solution = simplex_solve(model, bland=bland)
        result = TcsResult(program, solution, side)
        if solution.status is LpStatus.OPTIMAL:
            result.orbit_values = list(solution.primal)
            for row, y in zip(model.rows, solution.dual):
                i, _ = row.tag
                if y:
                    result.coefficients[i] = result.coefficients.get(i, Fraction(0)) + y
            result.coefficients = {i: c for i, c in result.coefficients.items() if c}
    else:
        model = program.primal_model()
        solution = simplex_solve(model, bland=bland)
        result = TcsResult(program, solution, side)
        if solution.status is LpStatus.OPTIMAL:
            result.orbit_values = list(solution.dual)
            x = solution.primal
            j = 0
            for i, row in enumerate(program.rows):
                if row.is_monomial:
                    c, j = -x[j], j + 1
                else:
                    c, j = x[j] - x[j + 1], j + 2
                if c:
                    result.coefficients[i] = c

    log.info(
        "%s side on %s: %s, value %s (%d rows, %d pivots)",
        side,
        program.support,
        solution.status.value,
        solution.value,
        len(program.rows),
        solution.pivots,
    )
    return result


def solve_tcs(
    system: AxiomSystem,
    mode: str = "full",
    *,
    side: str = "dual",
    congen: bool = False,
    symmetry: SymmetryGroup | None = None,
    batch: int = DEFAULT_BATCH,
    max_rounds: int | None = None,
    bland: bool = False,
) -> TcsResult:
    """Minimum total coefficient size of a refutation of ``system``.

    Parameters
    ----------
    system
        the axiom system.
    mode
        ``full`` (all assignments), ``restricted`` (one hole per pigeon, or no
        minimum element) or ``resolution-like`` (full cube with monomial rows).
    side
        which program the simplex method solves.
    congen
        generate weakening rows lazily with the separation oracle.
    symmetry
        defaults to the natural group of the family.
    bland
        pivot with Bland's rule throughout.
    """
    program = TcsProgram(
        system,
        mode_support(system, mode),
        symmetry if symmetry is not None else symmetry_of(system),
        resolution_like=mode == "resolution-like",
    )
    return solve_program(
        program, side=side, congen=congen, batch=batch, max_rounds=max_rounds, bland=bland
    )


@dataclass
class DualityCheck:
    """``D(1) <= TCS`` for a refutation and a dual functional.

    ``pairing`` is ``sum_W c_W D(W)``; it equals ``target * D(1)`` whenever the
    refutation holds on the points of ``D``.
    """

    dual_value: Fraction
    primal_value: Fraction
    pairing: Fraction

    @property
    def holds(self) -> bool:
        return self.dual_value <= self.primal_value

    def __bool__(self) -> bool:
        return self.holds


def weak_duality_check(
    cert: ProofCertificate, d: DualFunctional, system: AxiomSystem | None = None
) -> DualityCheck:
    """Compare ``D(1)`` with the total coefficient size of ``cert``."""
    system = system or cert.system
    if d.var_count != system.var_count:
        msg = f"functional over {d.var_count} variables, system has {system.var_count}"
        raise ValueError(msg)
    pairing = sum((c * d.of_weakening(w) for w, c in cert.entries.items()), Fraction(0))
    check = DualityCheck(d.value(), cert.total_coefficient_size(), pairing)
    log.debug("weak duality: D(1) = %s, TCS = %s", check.dual_value, check.primal_value)
    return check

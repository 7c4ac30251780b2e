"""Exact rational linear programming with the simplex method.

Models keep the user's form (``<=``, ``=``, ``>=`` rows, free or bounded
variables, min or max). :func:`simplex_solve` converts them to
``max c.x, A x <= b, x >= 0`` and runs a two-phase simplex on a compact
tableau of :class:`~fractions.Fraction` entries.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

log = logging.getLogger(__name__)

RELATIONS = ("<=", "=", ">=")


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LpRow:
    """A constraint ``sum(coeffs[j] * x[j]) <relation> rhs``.

    ``tag`` is free-form data identifying the row (e.g. the weakening it
    encodes).
    """

    coeffs: dict[int, Fraction]
    relation: str
    rhs: Fraction
    tag: Any = None

    def __post_init__(self) -> None:
        if self.relation not in RELATIONS:
            msg = f"unknown relation '{self.relation}', expected one of {RELATIONS}"
            raise ValueError(msg)
        self.coeffs = {int(j): Fraction(a) for j, a in self.coeffs.items() if a != 0}
        self.rhs = Fraction(self.rhs)

    def activity(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * x[j] for j, a in self.coeffs.items()), Fraction(0))

    def satisfied(self, x: Sequence[Fraction]) -> bool:
        lhs = self.activity(x)
        if self.relation == "<=":
            return lhs <= self.rhs
        if self.relation == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass
class LpModel:
    """An exact-rational linear program.

    Variables default to ``x >= 0``; use ``lower=None`` for free variables.
    """

    sense: str = "max"
    objective: dict[int, Fraction] = field(default_factory=dict)
    rows: list[LpRow] = field(default_factory=list)
    lower: list[Fraction | None] = field(default_factory=list)
    upper: list[Fraction | None] = field(default_factory=list)
    labels: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.sense not in ("max", "min"):
            msg = f"sense must be 'max' or 'min', got '{self.sense}'"
            raise ValueError(msg)

    @property
    def n_vars(self) -> int:
        return len(self.labels)

    def add_variable(
        self,
        label: str,
        *,
        cost: Fraction | int = 0,
        lower: Fraction | int | None = 0,
        upper: Fraction | int | None = None,
    ) -> int:
        j = self.n_vars
        self.labels.append(label)
        self.lower.append(None if lower is None else Fraction(lower))
        self.upper.append(None if upper is None else Fraction(upper))
        if cost:
            self.objective[j] = Fraction(cost)
        return j

    def add_row(
        self,
        coeffs: Mapping[int, Fraction | int],
        relation: str,
        rhs: Fraction | int,
        tag: Any = None,
    ) -> LpRow:
        row = LpRow(dict(coeffs), relation, Fraction(rhs), tag)
        if row.coeffs and max(row.coeffs) >= self.n_vars:
            msg = f"row uses variable {max(row.coeffs)} but the model has {self.n_vars}"
            raise ValueError(msg)
        self.rows.append(row)
        return row

    def objective_value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * x[j] for j, c in self.objective.items()), Fraction(0))

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        """Exact feasibility check of a point."""
        for j, val in enumerate(x):
            if self.lower[j] is not None and val < self.lower[j]:
                return False
            if self.upper[j] is not None and val > self.upper[j]:
                return False
        return all(row.satisfied(x) for row in self.rows)


@dataclass
class LpSolution:
    """Result of :func:`simplex_solve`.

    ``dual[i]`` is the sensitivity of the optimum to the right-hand side of
    row ``i`` (so it is ``>= 0`` for ``<=`` rows of a max model).
    """

    status: LpStatus
    value: Fraction | None = None
    primal: list[Fraction] = field(default_factory=list)
    dual: list[Fraction] = field(default_factory=list)
    pivots: int = 0
    model: LpModel | None = None
    rounds: int = 1


class _Tableau:
    """Compact simplex tableau for ``max c.x, A x <= b, x >= 0``.

    Basic variable of row ``i`` is ``x[basis[i]] = b[i] - sum_j a[i][j] x[nonbasic[j]]``
    and the objective is ``v + sum_j c[j] x[nonbasic[j]]``.
    """

    def __init__(
        self,
        a: list[list[Fraction]],
        b: list[Fraction],
        c: list[Fraction],
        *,
        bland: bool,
        structural: int | None = None,
    ):
        # variable ids: structural columns 0..k-1, slacks k..k+m-1, then extras
        self.m = len(b)
        self.n = len(c) if structural is None else structural
        self.a = a
        self.b = b
        self.c = c
        self.v = Fraction(0)
        extra = range(self.n + self.m, self.m + len(c))
        self.nonbasic = [*range(self.n), *extra]
        self.basis = list(range(self.n, self.n + self.m))
        self.bland = bland
        self.pivots = 0

    def pivot(self, l: int, e: int) -> None:
        a, b, c = self.a, self.b, self.c
        row = a[l]
        piv = row[e]
        inv = 1 / piv
        b[l] *= inv
        nz = []
        for j in range(len(row)):
            if j != e and row[j]:
                row[j] *= inv
                nz.append(j)
        row[e] = inv
        bl = b[l]
        for i in range(len(a)):
            if i == l:
                continue
            ri = a[i]
            f = ri[e]
            if not f:
                continue
            b[i] -= f * bl
            for j in nz:
                ri[j] -= f * row[j]
            ri[e] = -f * inv
        f = c[e]
        if f:
            self.v += f * bl
            for j in nz:
                c[j] -= f * row[j]
            c[e] = -f * inv
        self.nonbasic[e], self.basis[l] = self.basis[l], self.nonbasic[e]
        self.pivots += 1

    def _entering(self, bland: bool) -> int | None:
        best = None
        for j, cj in enumerate(self.c):
            if cj <= 0:
                continue
            if best is None:
                best = j
            elif bland:
                if self.nonbasic[j] < self.nonbasic[best]:
                    best = j
            elif cj > self.c[best] or (
                cj == self.c[best] and self.nonbasic[j] < self.nonbasic[best]
            ):
                best = j
        return best

    def _leaving(self, e: int) -> int | None:
        best = None
        best_ratio = None
        for i in range(len(self.a)):
            aie = self.a[i][e]
            if aie <= 0:
                continue
            ratio = self.b[i] / aie
            if (
                best is None
                or ratio < best_ratio
                or (ratio == best_ratio and self.basis[i] < self.basis[best])
            ):
                best, best_ratio = i, ratio
        return best

    def run(self) -> LpStatus:
        """Pivot to optimality; Bland's rule is used after every degenerate pivot."""
        degenerate = False
        while True:
            e = self._entering(self.bland or degenerate)
            if e is None:
                return LpStatus.OPTIMAL
            l = self._leaving(e)
            if l is None:
                return LpStatus.UNBOUNDED
            degenerate = self.b[l] == 0
            self.pivot(l, e)

    def remove_column(self, e: int) -> None:
        for row in self.a:
            del row[e]
        del self.c[e]
        del self.nonbasic[e]

    def remove_row(self, l: int) -> None:
        del self.a[l]
        del self.b[l]
        del self.basis[l]


@dataclass
class _Canonical:
    """Bookkeeping of the conversion of an :class:`LpModel` to canonical form."""

    # per model variable: offset and list of (canonical column, sign)
    offsets: list[Fraction]
    columns: list[list[tuple[int, int]]]
    # per canonical row: (model row or None for bound rows, sign)
    origins: list[tuple[int | None, int]]
    a: list[list[Fraction]]
    b: list[Fraction]
    c: list[Fraction]


def _canonicalize(model: LpModel) -> _Canonical:
    offsets: list[Fraction] = []
    columns: list[list[tuple[int, int]]] = []
    bound_rows: list[tuple[int, Fraction]] = []
    ncols = 0
    for j in range(model.n_vars):
        lo, up = model.lower[j], model.upper[j]
        if lo is not None:
            offsets.append(lo)
            columns.append([(ncols, 1)])
            if up is not None:
                bound_rows.append((ncols, up - lo))
            ncols += 1
        elif up is not None:
            offsets.append(up)
            columns.append([(ncols, -1)])
            ncols += 1
        else:
            offsets.append(Fraction(0))
            columns.append([(ncols, 1), (ncols + 1, -1)])
            ncols += 2

    a: list[list[Fraction]] = []
    b: list[Fraction] = []
    origins: list[tuple[int | None, int]] = []
    for i, row in enumerate(model.rows):
        dense = [Fraction(0)] * ncols
        shift = Fraction(0)
        for j, coeff in row.coeffs.items():
            shift += coeff * offsets[j]
            for col, sign in columns[j]:
                dense[col] += sign * coeff
        rhs = row.rhs - shift
        if row.relation in ("<=", "="):
            a.append(dense)
            b.append(rhs)
            origins.append((i, 1))
        if row.relation in (">=", "="):
            a.append([-x for x in dense])
            b.append(-rhs)
            origins.append((i, -1))
    for col, bound in bound_rows:
        dense = [Fraction(0)] * ncols
        dense[col] = Fraction(1)
        a.append(dense)
        b.append(bound)
        origins.append((None, 1))

    sign = 1 if model.sense == "max" else -1
    c = [Fraction(0)] * ncols
    for j, coeff in model.objective.items():
        for col, s in columns[j]:
            c[col] += sign * s * coeff
    return _Canonical(offsets, columns, origins, a, b, c)


def _initialize(canon: _Canonical, bland: bool) -> _Tableau | None:
    """Find a feasible basis (phase 1); ``None`` if the program is infeasible."""
    n = len(canon.c)
    if all(bi >= 0 for bi in canon.b):
        return _Tableau(canon.a, canon.b, list(canon.c), bland=bland)

    # auxiliary program: max -x0 with x0 added to every row
    aux_id = n + len(canon.b)
    a = [[*row, Fraction(-1)] for row in canon.a]
    tab = _Tableau(
        a, list(canon.b), [Fraction(0)] * n + [Fraction(-1)], bland=bland, structural=n
    )
    tab.pivot(min(range(tab.m), key=lambda i: tab.b[i]), n)
    tab.run()
    if tab.v < 0:
        return None

    if aux_id in tab.basis:
        l = tab.basis.index(aux_id)
        e = next((j for j, x in enumerate(tab.a[l]) if x != 0), None)
        if e is None:
            tab.remove_row(l)
        else:
            tab.pivot(l, e)
    if aux_id in tab.nonbasic:
        tab.remove_column(tab.nonbasic.index(aux_id))

    # express the real objective in the current nonbasic variables
    c = [Fraction(0)] * len(tab.nonbasic)
    v = Fraction(0)
    col_of = {var: j for j, var in enumerate(tab.nonbasic)}
    row_of = {var: i for i, var in enumerate(tab.basis)}
    for k, ck in enumerate(canon.c):
        if not ck:
            continue
        if k in col_of:
            c[col_of[k]] += ck
        else:
            i = row_of[k]
            v += ck * tab.b[i]
            for j, aij in enumerate(tab.a[i]):
                if aij:
                    c[j] -= ck * aij
    tab.c = c
    tab.v = v
    return tab


def simplex_solve(model: LpModel, *, bland: bool = False) -> LpSolution:
    """Solve an :class:`LpModel` exactly.

    Pricing picks the largest reduced cost and switches to Bland's rule
    after a degenerate pivot, so the method always terminates.

    Parameters
    ----------
    model
        the program.
    bland
        use Bland's rule for every pivot.

    Returns
    -------
    LpSolution
        status, optimum, primal point and row duals. Infeasible and unbounded
        programs are reported through the status.
    """
    canon = _canonicalize(model)
    n = len(canon.c)
    log.debug(
        "simplex: %d variables, %d rows -> canonical %d x %d",
        model.n_vars,
        len(model.rows),
        len(canon.b),
        n,
    )
    tab = _initialize(canon, bland)
    if tab is None:
        log.debug("simplex: infeasible")
        return LpSolution(LpStatus.INFEASIBLE, model=model)

    status = tab.run()
    if status is LpStatus.UNBOUNDED:
        log.debug("simplex: unbounded after %d pivots", tab.pivots)
        return LpSolution(LpStatus.UNBOUNDED, pivots=tab.pivots, model=model)

    xcanon = [Fraction(0)] * n
    for i, var in enumerate(tab.basis):
        if var < n:
            xcanon[var] = tab.b[i]
    primal = [
        canon.offsets[j] + sum((s * xcanon[col] for col, s in canon.columns[j]), Fraction(0))
        for j in range(model.n_vars)
    ]

    slack_dual = {}
    for j, var in enumerate(tab.nonbasic):
        if var >= n:
            slack_dual[var - n] = -tab.c[j]
    dual = [Fraction(0)] * len(model.rows)
    sense = 1 if model.sense == "max" else -1
    for r, (i, s) in enumerate(canon.origins):
        if i is not None:
            dual[i] += sense * s * slack_dual.get(r, Fraction(0))

    if not model.is_feasible(primal):
        msg = "simplex returned a point that violates the model"
        raise RuntimeError(msg)

    value = model.objective_value(primal)
    log.debug("simplex: optimum %s after %d pivots", value, tab.pivots)
    return LpSolution(LpStatus.OPTIMAL, value, primal, dual, tab.pivots, model)

"""Acceptance suite: every reproducible claim, checked exactly.

Each criterion is a function returning ``(ok, detail)``. The ``quick`` level
runs the mandatory criteria of the quick level; ``full`` adds the mandatory
criteria that need the larger instances and the stretch instances, which are
reported but never make the run fail.
"""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field

import numpy as np

from . import ord_proofs, php_dual
from .certificates import verify_certificate
from .lp import DEFAULT_BATCH, solve_tcs
from .systems import HoleSets, build_ord, build_php, no_minimum
from .tables import TableSpec, lp_options, reproduce_table
from .utils import format_fraction, repeating_decimal

log = logging.getLogger(__name__)

LEVELS = ("quick", "full")


@dataclass(frozen=True)
class Criterion:
    key: str
    title: str
    check: Callable[[Mapping], tuple[bool, str]]
    mandatory: bool = True
    level: str = "quick"

    @property
    def stretch(self) -> bool:
        return not self.mandatory

    def runs_at(self, level: str) -> bool:
        """Stretch criteria and those of the ``full`` level are skipped by ``quick`` runs."""
        return level == "full" or (self.level == "quick" and self.mandatory)


@dataclass
class CriterionResult:
    key: str
    title: str
    mandatory: bool
    status: str
    detail: str = ""
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "title": self.title,
            "mandatory": self.mandatory,
            "status": self.status,
            "detail": self.detail,
        }


@dataclass
class AcceptanceReport:
    level: str
    results: list[CriterionResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """True if every mandatory criterion passed."""
        return all(r.passed for r in self.results if r.mandatory)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def failures(self) -> list[CriterionResult]:
        return [r for r in self.results if not r.passed]

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "ok": self.ok,
            "criteria": [r.to_dict() for r in self.results],
        }


def _table_check(table_id: str, ns: list[int], mode: str | None = None):
    def check(options: Mapping) -> tuple[bool, str]:
        result = reproduce_table(
            TableSpec(table_id, tuple(ns), mode),
            timeout=options.get("tables", {}).get("timeout"),
            options=lp_options(options),
        )
        ok = all(c.status == "ok" and c.match for c in result.cells)
        detail = ", ".join(f"n={c.n}: {c.exact or c.status}" for c in result.cells)
        return ok, detail

    return check


def _php_full_n4(options: Mapping) -> tuple[bool, str]:
    lp = lp_options(options)
    value = solve_tcs(
        build_php(4),
        "full",
        congen=True,
        batch=lp.get("batch", DEFAULT_BATCH),
        max_rounds=lp.get("max_rounds"),
        bland=lp["bland"],
    ).value
    expansion = repeating_decimal(value)
    return expansion == "41.4(69)", f"{format_fraction(value)} = {expansion}"


def _expectations(options: Mapping) -> tuple[bool, str]:  # noqa: ARG001
    bad = []
    for n in range(3, 7):
        if php_dual.exp_d_closed(n) != php_dual.exp_d_brute(n):
            bad.append(f"E(D) n={n}")
        e_d2 = php_dual.norm_d_squared_closed(n)
        if e_d2 != php_dual.norm_d_squared_brute(n):
            bad.append(f"E(D^2) n={n}")
        if e_d2 > php_dual.rough_norm_bound(n):
            bad.append(f"E(D^2) bound n={n}")
    return not bad, "; ".join(bad) or "closed forms agree for n = 3..6"


def _random_properties(options: Mapping) -> tuple[bool, str]:
    settings = options.get("acceptance", {})
    rng = np.random.default_rng(settings.get("seed", 1234))
    samples = settings.get("samples", 100)
    bad = []
    for n in range(3, 7):
        for _ in range(samples):
            h = php_dual.random_holesets(n, rng)
            value = php_dual.exp_dw(n, h)
            subset = [i for i, _ in h.sets if rng.random() < 0.5]
            if php_dual.exp_dw(n, h.flip(subset)) != (-1) ** len(subset) * value:
                bad.append(f"flip n={n} {h.as_dict()}")
            if php_dual.exp_d_signed_weakening(n, h) != 2 ** (n - 2) * value:
                bad.append(f"signed n={n} {h.as_dict()}")
            if h.sets:
                pigeon, _ = h.sets[int(rng.integers(len(h.sets)))]
                full = {i: (range(1, n) if i == pigeon else sorted(s)) for i, s in h.sets}
                wide = HoleSets.from_mapping(n, h.axiom, full)
                if php_dual.exp_dw(n, wide) != 0:
                    bad.append(f"full hole set n={n} {wide.as_dict()}")
        for _ in range(max(samples // 10, 1)):
            pigeon = int(rng.integers(1, n + 1))
            p = php_dual.random_polynomial(n, rng, pigeon)
            lhs, rhs = php_dual.dual_intuition_sides(n, p, pigeon)
            if lhs != rhs:
                bad.append(f"dual intuition n={n} pigeon {pigeon}")
    return not bad, "; ".join(bad[:5]) or f"{samples} samples per n = 3..6"


def _ord_construction(ns: range):
    def check(options: Mapping) -> tuple[bool, str]:  # noqa: ARG001
        bad = []
        for n in ns:
            cert = ord_proofs.build_ord_proof(n)
            if cert.total_coefficient_size() != 2**n - n:
                bad.append(f"n={n}: size {cert.total_coefficient_size()}")
            if not verify_certificate(cert):
                bad.append(f"n={n}: not valid")
            if not ord_proofs.partition_property(cert):
                bad.append(f"n={n}: partition property")
            if not ord_proofs.check_nice_transitivity(cert):
                bad.append(f"n={n}: weakening that is not nice")
        return not bad, "; ".join(bad) or f"valid with size 2^n - n for n = {ns.start}..{ns.stop - 1}"

    return check


def _restriction_transform(options: Mapping) -> tuple[bool, str]:  # noqa: ARG001
    n = 4
    partial = solve_tcs(build_ord(n), "restricted").certificate()
    if not verify_certificate(partial, no_minimum(n)):
        return False, "restricted certificate is not valid without a minimum"
    full = ord_proofs.restrict_to_no_min(partial)
    bound = (n + 1) * partial.total_coefficient_size() + n
    ok = bool(verify_certificate(full)) and full.total_coefficient_size() <= bound
    return ok, f"size {full.total_coefficient_size()} <= {bound}"


def _sos_proof(ns: range):
    def check(options: Mapping) -> tuple[bool, str]:  # noqa: ARG001
        bad = []
        for n in ns:
            if not verify_certificate(ord_proofs.build_sos_ord_proof(n)):
                bad.append(f"identity n={n}")
            for m in range(1, n):
                for j in range(1, m + 1):
                    if not ord_proofs.building_block_holds(n, j, m):
                        bad.append(f"building block n={n} j={j} m={m}")
        return not bad, "; ".join(bad) or f"identity holds for n = {ns.start}..{ns.stop - 1}"

    return check


def _resolution_failure(options: Mapping) -> tuple[bool, str]:  # noqa: ARG001
    bad = []
    for n in range(3, 7):
        value = php_dual.resolution_failure_value(n)
        if value != php_dual.resolution_failure_brute(n):
            bad.append(f"closed form n={n}")
        if n % 2 and value != php_dual.resolution_failure_value_printed(n):
            bad.append(f"published form n={n}")
        if php_dual.resolution_observations(n) != php_dual.resolution_observations_closed(n):
            bad.append(f"observations n={n}")
        first = php_dual.exp_d_monomial(n, php_dual.first_hole_monomial(n, range(1, n + 1), ()))
        if first != php_dual.all_in_first_hole_value(n):
            bad.append(f"all in first hole n={n}")
    return not bad, "; ".join(bad) or "closed forms agree for n = 3..6"


def _lower_bound_chain(options: Mapping) -> tuple[bool, str]:
    ok, detail = _table_check("PHP_LOWER_BOUNDS", [3, 4, 5, 6])(options)
    broken = [n for n in range(3, 7) if not php_dual.bound_chain(n).holds]
    if broken:
        return False, f"bound chain fails for n={broken}"
    return ok, detail


def _ord_restricted_dual(options: Mapping) -> tuple[bool, str]:
    ok, detail = _table_check("ORD_RESTRICTED", [3, 4, 5])(options)
    for n in range(3, 6):
        dual = ord_proofs.trivial_no_minimum_dual(n)
        if dual.value() != 2 * math.comb(n, 3):
            return False, f"trivial dual n={n} has value {dual.value()}"
        if dual.max_weakening_value(build_ord(n), no_minimum(n)) > 1:
            return False, f"trivial dual n={n} is infeasible"
    return ok, detail


CRITERIA: tuple[Criterion, ...] = (
    Criterion(
        "1",
        "PHP dual optimum, all assignments, n = 3",
        _table_check("PHP_DUAL_OPTIMA", [3], "full"),
    ),
    Criterion(
        "1s", "PHP dual optimum, all assignments, n = 4", _php_full_n4, mandatory=False
    ),
    Criterion(
        "2",
        "PHP dual optima, one hole per pigeon, n = 3..5",
        _table_check("PHP_DUAL_OPTIMA", [3, 4, 5], "restricted"),
    ),
    Criterion(
        "2s",
        "PHP dual optimum, one hole per pigeon, n = 6",
        _table_check("PHP_DUAL_OPTIMA", [6], "restricted"),
        mandatory=False,
    ),
    Criterion(
        "3",
        "value of the PHP dual certificate, n = 3..6",
        _table_check("PHP_D_VALUES", [3, 4, 5, 6]),
    ),
    Criterion("4", "PHP lower bound values and bound chain, n = 3..6", _lower_bound_chain),
    Criterion("5", "closed forms of E(D) and E(D^2)", _expectations),
    Criterion("6", "random weakening properties of the PHP dual", _random_properties),
    Criterion(
        "7", "ORD refutation of size 2^n - n, n = 3..6", _ord_construction(range(3, 7))
    ),
    Criterion(
        "7f",
        "ORD refutation of size 2^n - n, n = 7",
        _ord_construction(range(7, 8)),
        level="full",
    ),
    Criterion("8", "ORD optima, n = 3..5", _table_check("ORD_OPTIMA", [3, 4, 5])),
    Criterion("8r", "ORD optima without a minimum, n = 3..5", _ord_restricted_dual),
    Criterion(
        "8s", "ORD optimum, n = 6", _table_check("ORD_OPTIMA", [6]), mandatory=False
    ),
    Criterion(
        "8rf",
        "ORD optimum without a minimum, n = 6",
        _table_check("ORD_RESTRICTED", [6]),
        level="full",
    ),
    Criterion("9", "restriction to tournaments without a minimum, n = 4", _restriction_transform),
    Criterion("10", "SoS ORD refutation, n = 3..6", _sos_proof(range(3, 7))),
    Criterion(
        "10s", "SoS ORD refutation, n = 7", _sos_proof(range(7, 8)), mandatory=False
    ),
    Criterion("11", "value of D on the resolution-like product", _resolution_failure),
)


def run_acceptance(
    level: str = "quick",
    options: Mapping | None = None,
    criteria: tuple[Criterion, ...] = CRITERIA,
) -> AcceptanceReport:
    """Run the acceptance criteria.

    Failures and exceptions are recorded per criterion and never stop the
    run.

    Parameters
    ----------
    level
        ``quick`` (mandatory criteria on small instances) or ``full`` (with the
        larger mandatory instances and the stretch instances).
    options
        configuration (see :func:`~.utils.load_config`).
    """
    if level not in LEVELS:
        msg = f"unknown acceptance level '{level}', expected one of {LEVELS}"
        raise ValueError(msg)
    options = options or {}
    report = AcceptanceReport(level)
    for criterion in criteria:
        if not criterion.runs_at(level):
            continue
        start = time.perf_counter()
        try:
            ok, detail = criterion.check(options)
            status = "pass" if ok else "fail"
        except Exception as exc:  # noqa: BLE001
            status, detail = "error", f"{type(exc).__name__}: {exc}"
        result = CriterionResult(
            criterion.key,
            criterion.title,
            criterion.mandatory,
            status,
            detail,
            time.perf_counter() - start,
        )
        report.results.append(result)
        if result.passed:
            log.info("criterion %s (%s): pass [%.1f s]", result.key, result.title, result.seconds)
        else:
            log.warning("criterion %s (%s): %s, %s", result.key, result.title, status, detail)
    return report


def tally(report: AcceptanceReport) -> dict[str, int]:
    counts: dict[str, int] = {}
    for r in report.results:
        counts[r.status] = counts.get(r.status, 0) + 1
    return counts


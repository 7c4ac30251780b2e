"""Reproduction of the reference tables.

Reference values live in one YAML file per table under
``tcsproofs/configs/tables``. Every cell is computed as an exact value, rendered
with three decimals and compared against the reference with the rule of the
manifest (``exact``, ``rounded`` or ``repeating``).
"""

from __future__ import annotations

import csv
import functools
import io
import logging
import multiprocessing
import queue
import time
from collections.abc import Callable, Iterable, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from dbetto import AttrsDict, TextDB

from . import ord_proofs, php_dual
from .certificates import sos_total_coefficient_size
from .lp import DEFAULT_BATCH, solve_tcs
from .php_dual import SurdValue
from .systems import build_ord, build_php
from .utils import dump_dict, format_fraction, parse_fraction, repeating_decimal, round_decimal

log = logging.getLogger(__name__)

TABLE_IDS = (
    "PHP_DUAL_OPTIMA",
    "PHP_D_VALUES",
    "ORD_OPTIMA",
    "ORD_RESTRICTED",
    "PHP_LOWER_BOUNDS",
    "SOS_GROWTH",
)
FORMATS = ("csv", "md", "json")
RULES = ("exact", "rounded", "repeating")
COLUMNS = ("n", "exact", "decimal", "expected", "match", "status")


@functools.cache
def load_manifest() -> TextDB:
    """The reference values, one entry per table (lower-case table id)."""
    return TextDB(resources.files("tcsproofs") / "configs" / "tables")


def table_manifest(table_id: str) -> AttrsDict:
    if table_id not in TABLE_IDS:
        msg = f"unknown table '{table_id}', expected one of {TABLE_IDS}"
        raise ValueError(msg)
    return load_manifest()[table_id.lower()]


@dataclass(frozen=True)
class TableSpec:
    """Which table to reproduce, for which ``n`` and in which mode.

    ``mode`` defaults to the table's default mode. ``n_range`` must lie within
    the feasibility cap of the mode.
    """

    table_id: str
    n_range: tuple[int, ...]
    mode: str | None = None

    def __post_init__(self) -> None:
        manifest = table_manifest(self.table_id)
        mode = self.mode if self.mode is not None else manifest.default_mode
        if mode not in manifest.modes:
            msg = f"table {self.table_id} has no mode '{mode}', expected one of {list(manifest.modes)}"
            raise ValueError(msg)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "n_range", tuple(int(n) for n in self.n_range))

        limits = manifest.modes[mode]
        if not self.n_range:
            msg = "empty n range"
            raise ValueError(msg)
        bad = [n for n in self.n_range if not limits.min_n <= n <= limits.cap]
        if bad:
            msg = (
                f"n={bad} outside of the feasible range {limits.min_n}..{limits.cap} "
                f"of {self.table_id} ({mode})"
            )
            raise ValueError(msg)

    @property
    def limits(self) -> AttrsDict:
        return table_manifest(self.table_id).modes[self.mode]

    def is_stretch(self, n: int) -> bool:
        return n in self.limits.stretch

    def reference(self, n: int) -> AttrsDict | None:
        return self.limits["values"].get(str(n))


def match_value(value: Fraction | SurdValue, reference: Mapping) -> bool:
    """Compare an exact value with a reference string.

    ``exact`` parses the reference as a rational, ``rounded`` compares after
    rounding to ``places`` decimals and ``repeating`` compares the exact
    decimal expansion with its period in parentheses.
    """
    rule, expected = reference["rule"], str(reference["expected"])
    if rule not in RULES:
        msg = f"unknown matching rule '{rule}'"
        raise ValueError(msg)
    if rule == "exact":
        return value == parse_fraction(expected)
    if rule == "rounded":
        places = int(reference.get("places", 3))
        return parse_fraction(_decimal(value, places)) == parse_fraction(expected)
    if isinstance(value, SurdValue):
        return False
    return repeating_decimal(value) == expected


def _decimal(value: Fraction | SurdValue, places: int = 3) -> str:
    if isinstance(value, SurdValue):
        return value.decimal(places)
    return round_decimal(value, places)


def _exact(value: Fraction | SurdValue) -> str:
    if isinstance(value, SurdValue):
        return str(value)
    return format_fraction(value)


def lp_options(config: Mapping) -> dict:
    """The LP settings of a configuration: the ``lp`` section plus the pivoting rule."""
    return {**config.get("lp", {}), "bland": config.get("simplex", {}).get("bland", False)}


def _lp_value(system, mode: str, options: Mapping) -> Fraction:
    result = solve_tcs(
        system,
        mode,
        side="dual",
        congen=True,
        batch=options.get("batch", DEFAULT_BATCH),
        max_rounds=options.get("max_rounds"),
        bland=options.get("bland", False),
    )
    if result.value is None:
        msg = f"program is {result.status.value}"
        raise RuntimeError(msg)
    return result.value


def _php_dual_optimum(n: int, mode: str, options: Mapping) -> Fraction:
    return _lp_value(build_php(n), mode, options)


def _php_d_value(n: int, mode: str, options: Mapping) -> Fraction:  # noqa: ARG001
    return php_dual.d_value(n)


def _ord_optimum(n: int, mode: str, options: Mapping) -> Fraction:
    return _lp_value(build_ord(n), mode, options)


def _php_lower_bound(n: int, mode: str, options: Mapping) -> SurdValue:  # noqa: ARG001
    return php_dual.php_lower_bound_value(n)


def _sos_size(n: int, mode: str, options: Mapping) -> Fraction:  # noqa: ARG001
    return sos_total_coefficient_size(ord_proofs.build_sos_ord_proof(n))


_COMPUTE: dict[str, Callable[[int, str, Mapping], Fraction | SurdValue]] = {
    "PHP_DUAL_OPTIMA": _php_dual_optimum,
    "PHP_D_VALUES": _php_d_value,
    "ORD_OPTIMA": _ord_optimum,
    "ORD_RESTRICTED": _ord_optimum,
    "PHP_LOWER_BOUNDS": _php_lower_bound,
    "SOS_GROWTH": _sos_size,
}


@dataclass
class TableCell:
    """One row of a reproduced table."""

    n: int
    status: str = "ok"
    value: Fraction | SurdValue | None = None
    expected: str | None = None
    match: bool | None = None
    error: str | None = None
    seconds: float = 0.0

    @property
    def exact(self) -> str:
        return "" if self.value is None else _exact(self.value)

    @property
    def decimal(self) -> str:
        return "" if self.value is None else _decimal(self.value)

    def to_dict(self) -> dict:
        data = {
            "n": self.n,
            "exact": self.exact,
            "decimal": self.decimal,
            "expected": self.expected,
            "match": self.match,
            "status": self.status,
        }
        if self.error is not None:
            data["error"] = self.error
        return data


@dataclass
class TableResult:
    spec: TableSpec
    cells: list[TableCell] = field(default_factory=list)

    @property
    def title(self) -> str:
        return table_manifest(self.spec.table_id).title

    @property
    def mismatches(self) -> list[TableCell]:
        return [c for c in self.cells if c.match is False]

    @property
    def skipped(self) -> list[TableCell]:
        return [c for c in self.cells if c.status != "ok"]

    def diff(self) -> list[str]:
        """One line per cell that disagrees with its reference value."""
        return [
            f"n={c.n}: computed {c.exact} ({c.decimal}), reference {c.expected}"
            for c in self.mismatches
        ]

    def to_dict(self) -> dict:
        return {
            "table": self.spec.table_id,
            "mode": self.spec.mode,
            "title": self.title,
            "cells": [c.to_dict() for c in self.cells],
            "diff": self.diff(),
        }

    def render(self, fmt: str = "md") -> str:
        """Render the table as CSV, Markdown or JSON; the output only depends on the values."""
        if fmt not in FORMATS:
            msg = f"unknown format '{fmt}', expected one of {FORMATS}"
            raise ValueError(msg)
        if fmt == "json":
            return dump_dict(self.to_dict(), fmt="json")
        rows = [[_render_field(c.to_dict()[col]) for col in COLUMNS] for c in self.cells]
        if fmt == "csv":
            buffer = io.StringIO()
            writer = csv.writer(buffer, lineterminator="\n")
            writer.writerow(COLUMNS)
            writer.writerows(rows)
            return buffer.getvalue()
        lines = [
            f"### {self.spec.table_id} ({self.spec.mode})",
            "",
            f"{self.title}",
            "",
            "| " + " | ".join(COLUMNS) + " |",
            "|" + "|".join("---" for _ in COLUMNS) + "|",
        ]
        lines += ["| " + " | ".join(row) + " |" for row in rows]
        if self.diff():
            lines += ["", "Differences:", ""] + [f"- {line}" for line in self.diff()]
        return "\n".join(lines) + "\n"


def _render_field(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def compute_cell(table_id: str, mode: str, n: int, options: Mapping | None = None):
    """Exact value of one cell, computed in the current process."""
    return _COMPUTE[table_id](n, mode, dict(options or {}))


def _cell_worker(table_id: str, mode: str, n: int, options: dict, out) -> None:
    try:
        out.put(("ok", compute_cell(table_id, mode, n, options)))
    except Exception as exc:  # noqa: BLE001
        out.put(("error", f"{type(exc).__name__}: {exc}"))


def _run_with_timeout(
    table_id: str, mode: str, n: int, options: dict, timeout: float
) -> tuple[str, object]:
    ctx = multiprocessing.get_context("spawn")
    out = ctx.Queue()
    proc = ctx.Process(target=_cell_worker, args=(table_id, mode, n, options, out))
    proc.start()
    try:
        status, payload = out.get(timeout=timeout)
    except queue.Empty:
        status, payload = "skipped", f"no result within {timeout} s"
        proc.terminate()
    proc.join()
    return status, payload


def _run_cell(
    spec: TableSpec, n: int, options: dict, timeout: float | None
) -> TableCell:
    start = time.perf_counter()
    if timeout is None:
        try:
            status, payload = "ok", compute_cell(spec.table_id, spec.mode, n, options)
        except Exception as exc:  # noqa: BLE001
            status, payload = "error", f"{type(exc).__name__}: {exc}"
    else:
        status, payload = _run_with_timeout(spec.table_id, spec.mode, n, options, timeout)

    reference = spec.reference(n)
    cell = TableCell(
        n,
        status=status,
        expected=None if reference is None else str(reference.expected),
        seconds=time.perf_counter() - start,
    )
    if status == "ok":
        cell.value = payload
        if reference is not None:
            cell.match = match_value(payload, reference)
    else:
        cell.error = str(payload)
        log.warning("%s n=%d %s: %s", spec.table_id, n, status, payload)
    log.info(
        "%s (%s) n=%d: %s %s [%.1f s]",
        spec.table_id,
        spec.mode,
        n,
        cell.decimal or status,
        "" if cell.match is None else ("matches" if cell.match else "DIFFERS"),
        cell.seconds,
    )
    return cell


def reproduce_table(
    spec: TableSpec,
    *,
    timeout: float | None = None,
    workers: int = 1,
    options: Mapping | None = None,
    skip: Iterable[int] = (),
) -> TableResult:
    """Compute every cell of a table and compare it with the reference values.

    Parameters
    ----------
    spec
        the table and its ``n`` range.
    timeout
        wall-clock budget per cell in seconds. Cells are then computed in
        their own process and marked ``skipped`` when they run out of time;
        with ``None`` they run in the current process.
    workers
        number of cells computed concurrently.
    options
        LP options (``batch``, ``max_rounds``, ``bland``), see :func:`lp_options`.
    skip
        values of ``n`` not to compute (marked ``skipped``).
    """
    options = dict(options or {})
    skip = set(skip)
    todo = [n for n in spec.n_range if n not in skip]

    with ThreadPoolExecutor(max_workers=max(workers, 1)) as pool:
        futures = {n: pool.submit(_run_cell, spec, n, options, timeout) for n in todo}
        done = {n: f.result() for n, f in futures.items()}

    cells = []
    for n in spec.n_range:
        if n in done:
            cells.append(done[n])
        else:
            reference = spec.reference(n)
            cells.append(
                TableCell(
                    n,
                    status="skipped",
                    expected=None if reference is None else str(reference.expected),
                    error="not requested",
                )
            )
    return TableResult(spec, cells)

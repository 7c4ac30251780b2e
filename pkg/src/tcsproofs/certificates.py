"""Proof certificates and their pointwise verification.

A certificate is a sparse map from weakenings to rational coefficients,
optionally with a list of squared polynomials. It is a valid proof if

.. math::

    \\sum_W c_W W(x) + \\sum_j g_j(x)^2 = t

on every assignment ``x`` of the support, where the target ``t`` is ``+1``
for Nullstellensatz proofs and ``-1`` for sum-of-squares proofs.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import Polynomial, bits_of, total_coefficient_size
from .systems import AxiomSystem, Support, Weakening
from .utils import common_denominator, format_fraction, parse_fraction

log = logging.getLogger(__name__)

DEFAULT_CHUNK = 1 << 16
_INT64_SAFE = 2**62
_MAX_FULL_CUBE_VARS = 30


class CertificateError(ValueError):
    """A certificate is not a valid proof; ``witness`` is a failing assignment."""

    def __init__(self, msg: str, witness: tuple[int, ...] | None = None):
        super().__init__(msg)
        self.witness = witness


@dataclass
class ProofCertificate:
    """Weakening coefficients (and squares) of a Nullstellensatz or SoS proof.

    Zero coefficients are never stored.
    """

    system: AxiomSystem
    entries: dict[Weakening, Fraction] = field(default_factory=dict)
    target: Fraction = Fraction(1)
    squares: list[Polynomial] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.target = Fraction(self.target)
        if self.target not in (1, -1):
            msg = f"certificate target must be +1 or -1, got {self.target}"
            raise ValueError(msg)
        entries = self.entries
        self.entries = {}
        for w, c in entries.items():
            self.add(w, c)

    def add(self, w: Weakening, coeff: Fraction | int) -> None:
        """Add ``coeff * w``, merging with an existing entry for the same product."""
        if not 0 <= w.axiom_index < len(self.system.axioms):
            msg = f"weakening refers to axiom {w.axiom_index}, system has {len(self.system.axioms)}"
            raise ValueError(msg)
        if w.product.zero:
            return
        total = self.entries.get(w, Fraction(0)) + Fraction(coeff)
        if total == 0:
            self.entries.pop(w, None)
        else:
            self.entries[w] = total

    @property
    def is_sos(self) -> bool:
        return bool(self.squares) or self.target == -1

    def __len__(self) -> int:
        return len(self.entries)

    def total_coefficient_size(self) -> Fraction:
        return sos_total_coefficient_size(self)

    def to_dict(self) -> dict:
        data = {
            "system": self.system.to_dict(),
            "target": "+1" if self.target == 1 else "-1",
            "entries": [
                {**w.to_dict(self.system), "coeff": format_fraction(c)}
                for w, c in sorted(
                    self.entries.items(), key=lambda item: (item[0].axiom_index, item[0].product)
                )
            ],
        }
        if self.squares:
            data["squares"] = [g.to_list() for g in self.squares]
        return data

    @classmethod
    def from_dict(cls, data: Mapping) -> ProofCertificate:
        system = AxiomSystem.from_dict(data["system"])
        cert = cls(system, target=parse_fraction(data.get("target", "1")))
        for entry in data.get("entries", []):
            cert.add(Weakening.from_dict(system, entry), parse_fraction(entry["coeff"]))
        cert.squares = [Polynomial.from_list(g) for g in data.get("squares", [])]
        return cert


def sos_total_coefficient_size(cert: ProofCertificate) -> Fraction:
    """``sum |c_W| + sum T(g_j)^2``; without squares this is the Nullstellensatz size."""
    size = sum((abs(c) for c in cert.entries.values()), Fraction(0))
    return size + sum((total_coefficient_size(g) ** 2 for g in cert.squares), Fraction(0))


@dataclass
class VerificationResult:
    """Outcome of :func:`verify_certificate`.

    ``witness`` is the failing assignment with the lowest cube index and
    ``value`` the certificate's value there.
    """

    ok: bool
    checked: int
    witness: tuple[int, ...] | None = None
    witness_index: int | None = None
    value: Fraction | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checked": self.checked,
            "witness": None if self.witness is None else "".join(map(str, self.witness)),
            "value": self.value,
        }


class _ScaledEvaluator:
    """Integer evaluation of ``scale * (sum c_W W + sum g_j^2)`` on cube indices."""

    def __init__(self, cert: ProofCertificate):
        coeffs = list(cert.entries.values())
        square_scales = [common_denominator(c for _, c in g) for g in cert.squares]
        self.scale = math.lcm(common_denominator(coeffs), *(s * s for s in square_scales))

        self.terms = [
            (w.product.care, w.product.want, c.numerator * (self.scale // c.denominator))
            for w, c in cert.entries.items()
        ]
        self.squares = []
        bound = sum(abs(k) for _, _, k in self.terms)
        for g, s in zip(cert.squares, square_scales):
            terms = [(m.care, m.want, c.numerator * (s // c.denominator)) for m, c in g]
            self.squares.append((terms, self.scale // (s * s)))
            bound += sum(abs(k) for _, _, k in terms) ** 2 * (self.scale // (s * s))
        self.target = int(cert.target * self.scale)
        self.dtype = np.int64 if bound + abs(self.target) < _INT64_SAFE else object

    @staticmethod
    def _sum(terms, index: np.ndarray, dtype) -> np.ndarray:
        acc = np.zeros(index.shape, dtype=dtype)
        for care, want, k in terms:
            acc[(index & care) == want] += k
        return acc

    def __call__(self, index: np.ndarray) -> np.ndarray:
        acc = self._sum(self.terms, index, self.dtype)
        for terms, mult in self.squares:
            g = self._sum(terms, index, self.dtype)
            acc += g * g * mult
        return acc


def _chunks(
    var_count: int, support: Support | None, chunk_size: int
) -> Iterator[np.ndarray]:
    if support is None:
        if var_count > _MAX_FULL_CUBE_VARS:
            msg = f"refusing to enumerate 2^{var_count} assignments"
            raise ValueError(msg)
        total = 2**var_count
        for start in range(0, total, chunk_size):
            yield np.arange(start, min(start + chunk_size, total), dtype=np.int64)
    else:
        ordered = np.sort(support.index)
        for start in range(0, len(ordered), chunk_size):
            yield ordered[start : start + chunk_size]


def verify_certificate(
    cert: ProofCertificate,
    support: Support | None = None,
    *,
    chunk_size: int = DEFAULT_CHUNK,
) -> VerificationResult:
    """Check the certificate identity pointwise.

    Assignments are processed in chunks of increasing cube index and the
    check stops at the first failing chunk, so the witness is always the
    lowest failing assignment.

    Parameters
    ----------
    cert
        the certificate.
    support
        the assignments to check; all ``2^N`` assignments by default.
    chunk_size
        number of assignments evaluated at once.
    """
    var_count = cert.system.var_count
    evaluator = _ScaledEvaluator(cert)
    checked = 0
    for index in _chunks(var_count, support, chunk_size):
        values = evaluator(index)
        bad = np.flatnonzero(values != evaluator.target)
        if len(bad):
            k = int(index[bad[0]])
            value = Fraction(int(values[bad[0]]), evaluator.scale)
            log.debug("certificate fails at assignment %d (value %s)", k, value)
            return VerificationResult(
                False, checked + int(bad[0]) + 1, bits_of(k, var_count), k, value
            )
        checked += len(index)
    log.debug("certificate verified on %d assignments", checked)
    return VerificationResult(True, checked)


def require_valid(cert: ProofCertificate, support: Support | None = None) -> None:
    """Raise :class:`CertificateError` unless the certificate verifies."""
    result = verify_certificate(cert, support)
    if not result.ok:
        msg = f"certificate evaluates to {result.value} instead of {cert.target} at {result.witness}"
        raise CertificateError(msg, result.witness)


def active_weakening_counts(cert: ProofCertificate, index: Iterable[int]) -> np.ndarray:
    """Number of weakenings with nonzero coefficient that are 1 on each assignment."""
    index = np.fromiter(index, dtype=np.int64) if not isinstance(index, np.ndarray) else index
    counts = np.zeros(index.shape, dtype=np.int64)
    for w in cert.entries:
        counts += w.product.mask(index)
    return counts

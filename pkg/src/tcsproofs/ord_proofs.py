"""Explicit refutations of the ordering principle.

Pairs ``(a, b)`` stand for the literal ``x[a,b]`` ("``a`` comes before
``b``"); a transitivity weakening is kept as the 3-cycle of its axiom plus the
set of pairs of its product.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .algebra import Monomial, Polynomial, index_of
from .certificates import (
    CertificateError,
    ProofCertificate,
    active_weakening_counts,
    sos_total_coefficient_size,
    verify_certificate,
)
from .lp import DualFunctional
from .systems import (
    AxiomSystem,
    Family,
    Weakening,
    build_ord,
    canonical_cycle,
    no_minimum,
    ord_monomial,
    ord_pairs,
    ord_var,
)

log = logging.getLogger(__name__)

Pairs = frozenset[tuple[int, int]]


def cycle_pairs(a: int, b: int, c: int) -> Pairs:
    return frozenset({(a, b), (b, c), (c, a)})


def _check_n(n: int) -> None:
    if n < 3:
        msg = f"the ordering principle needs n >= 3, got {n}"
        raise ValueError(msg)


def transitivity_family(n: int) -> list[tuple[tuple[int, int, int], Pairs]]:
    """The transitivity weakenings of the ``2^n - n`` refutation, by induction on ``n``."""
    _check_n(n)
    family = [
        ((1, 2, 3), cycle_pairs(1, 2, 3)),
        ((1, 3, 2), cycle_pairs(1, 3, 2)),
    ]
    for m in range(3, n):
        top = m + 1
        step = [(cyc, pairs | {(1, top)}) for cyc, pairs in family]
        step += [
            (
                canonical_cycle(*(v + 1 for v in cyc)),
                frozenset((a + 1, b + 1) for a, b in pairs) | {(top, 1)},
            )
            for cyc, pairs in family
        ]
        for i in range(2, m + 1):
            rest = frozenset((i, j) for j in range(2, m + 1) if j != i)
            for cyc in ((1, i, top), (1, top, i)):
                step.append((cyc, cycle_pairs(*cyc) | rest))
        family = step
    return family


def build_ord_proof(n: int) -> ProofCertificate:
    """Refutation of ORD(n) with 0/1 coefficients and total coefficient size ``2^n - n``.

    Every non-minimality axiom appears bare; the transitivity weakenings are
    built from two shifted copies of the family for ``n - 1`` elements plus
    ``2(n - 2)`` weakenings of the axioms on ``(1, i, n)``.
    """
    system = build_ord(n)
    cert = ProofCertificate(system)
    for i, axiom in enumerate(system.axioms):
        if axiom.kind == "nonmin":
            cert.add(Weakening.of(system, i, Monomial()), 1)
    for cyc, pairs in transitivity_family(n):
        axiom_index = system.find_axiom("trans", cyc)
        cert.add(Weakening.of(system, axiom_index, ord_monomial(n, sorted(pairs))), 1)
    log.info("ORD(%d) refutation: %d entries", n, len(cert))
    return cert


@dataclass(frozen=True)
class TransitivityGraph:
    """Directed graph on ``1..n`` with an edge ``a -> b`` for each literal ``x[a,b]``."""

    n: int
    edges: tuple[tuple[int, int], ...]
    root: int

    @classmethod
    def of(cls, system: AxiomSystem, w: Weakening) -> TransitivityGraph:
        axiom = system.axioms[w.axiom_index]
        if system.family is not Family.ORD or axiom.kind != "trans":
            msg = "transitivity graphs are defined for ORD transitivity weakenings"
            raise ValueError(msg)
        return cls(system.n, tuple(ord_pairs(system.n, w.product)), min(axiom.params))

    def reachable(self) -> set[int]:
        succ: dict[int, list[int]] = {}
        for a, b in self.edges:
            succ.setdefault(a, []).append(b)
        seen = {self.root}
        queue = deque([self.root])
        while queue:
            for b in succ.get(queue.popleft(), []):
                if b not in seen:
                    seen.add(b)
                    queue.append(b)
        return seen

    @property
    def is_nice(self) -> bool:
        """Exactly ``n`` edges and every vertex reachable from the root."""
        return len(self.edges) == self.n and len(self.reachable()) == self.n


def check_nice_transitivity(cert: ProofCertificate) -> bool:
    """True if every transitivity weakening with nonzero coefficient is nice."""
    system = cert.system
    return all(
        TransitivityGraph.of(system, w).is_nice
        for w in cert.entries
        if system.axioms[w.axiom_index].kind == "trans"
    )


def partition_property(cert: ProofCertificate, chunk_size: int = 1 << 16) -> bool:
    """True if on every assignment exactly one weakening of the certificate is 1."""
    total = 2**cert.system.var_count
    for start in range(0, total, chunk_size):
        index = np.arange(start, min(start + chunk_size, total), dtype=np.int64)
        if np.any(active_weakening_counts(cert, index) != 1):
            return False
    return True


def restrict_to_no_min(cert_partial: ProofCertificate) -> ProofCertificate:
    """Turn a refutation valid on tournaments without a minimum into a full one.

    Returns ``C - sum_i C_i + sum_i A_i`` where ``A_i`` is the non-minimality
    axiom of ``i`` and ``C_i`` multiplies every entry of ``C`` by ``A_i``
    (as a weakening of ``A_i``, merging equal products). The total
    coefficient size is at most ``(n + 1) * TCS(C) + n``.

    Raises
    ------
    CertificateError
        if the input is not valid on every tournament without a minimum.
    """
    system = cert_partial.system
    if system.family is not Family.ORD:
        msg = "restriction to tournaments without a minimum needs an ORD system"
        raise ValueError(msg)
    check = verify_certificate(cert_partial, no_minimum(system.n))
    if not check.ok:
        msg = f"certificate fails on the tournament {check.witness} without a minimum"
        raise CertificateError(msg, check.witness)

    out = ProofCertificate(system, dict(cert_partial.entries))
    for i, axiom in enumerate(system.axioms):
        if axiom.kind != "nonmin":
            continue
        for w, c in cert_partial.entries.items():
            product = axiom.monomial * w.product
            if not product.zero:
                out.add(Weakening.of(system, i, product), -c)
        out.add(Weakening.of(system, i, Monomial()), 1)
    log.info(
        "restricted certificate of size %s -> full certificate of size %s",
        cert_partial.total_coefficient_size(),
        out.total_coefficient_size(),
    )
    return out


def first_element(n: int, j: int, m: int) -> Monomial:
    """``F_jm``: ``j`` comes first among ``1..m``."""
    return ord_monomial(n, [(j, i) for i in range(1, m + 1) if i != j])


def link_weakening(n: int, j: int, m: int, k: int) -> Monomial:
    """``T_jmk = F_jm x[m+1,j] x[k,m+1] prod_{i < k, i != j} x[m+1,i]``."""
    pairs = [(m + 1, j), (k, m + 1)] + [(m + 1, i) for i in range(1, k) if i != j]
    return first_element(n, j, m) * ord_monomial(n, pairs)


def sos_square(n: int, m: int) -> Polynomial:
    """``g_m = F_{m+1,m+1} (1 - sum_{j <= m} F_jm)``."""
    lead = first_element(n, m + 1, m + 1)
    inner = Polynomial.constant(1) - Polynomial.from_terms(
        (first_element(n, j, m), 1) for j in range(1, m + 1)
    )
    return inner * lead


def build_sos_ord_proof(n: int) -> ProofCertificate:
    """Sum-of-squares refutation ``-1 = -sum T_jmk - sum_j F_jn + sum_m g_m^2``."""
    _check_n(n)
    system = build_ord(n)
    cert = ProofCertificate(system, target=-1)
    for m in range(1, n):
        for j in range(1, m + 1):
            for k in range(1, m + 1):
                if k == j:
                    continue
                axiom_index = system.find_axiom("trans", canonical_cycle(m + 1, j, k))
                cert.add(Weakening.of(system, axiom_index, link_weakening(n, j, m, k)), -1)
    for j in range(1, n + 1):
        cert.add(Weakening.of(system, system.find_axiom("nonmin", (j,)), Monomial()), -1)
    cert.squares = [sos_square(n, m) for m in range(1, n)]
    log.info(
        "ORD(%d) SoS refutation: %d weakenings, %d squares, size %s",
        n,
        len(cert),
        len(cert.squares),
        sos_total_coefficient_size(cert),
    )
    return cert


def building_block_holds(n: int, j: int, m: int) -> bool:
    """Pointwise ``F_jm = F_{j,m+1} + sum_k T_jmk + F_jm F_{m+1,m+1}`` on every tournament."""
    if not 1 <= j <= m <= n - 1:
        msg = f"need 1 <= j <= m <= n - 1, got j={j}, m={m}, n={n}"
        raise ValueError(msg)
    index = np.arange(2 ** comb(n, 2), dtype=np.int64)
    lhs = first_element(n, j, m).mask(index).astype(np.int64)
    rhs = first_element(n, j, m + 1).mask(index).astype(np.int64)
    for k in range(1, m + 1):
        if k != j:
            rhs += link_weakening(n, j, m, k).mask(index)
    rhs += (first_element(n, j, m) * first_element(n, m + 1, m + 1)).mask(index)
    return bool(np.array_equal(lhs, rhs))


def sos_growth(ns: Iterable[int] = range(3, 8)) -> list[dict]:
    """Size of the SoS refutation for several ``n``."""
    rows = []
    for n in ns:
        cert = build_sos_ord_proof(n)
        rows.append(
            {
                "n": n,
                "weakenings": len(cert),
                "squares": sum(1 for g in cert.squares if g),
                "tcs": sos_total_coefficient_size(cert),
            }
        )
    return rows


def trivial_no_minimum_dual(n: int) -> DualFunctional:
    """A dual of value ``2 * C(n, 3)`` on tournaments without a minimum.

    For every transitivity axiom it puts weight 1 on the tournament where the
    axiom's 3-cycle comes first and the other elements follow in order; that
    tournament violates no other axiom.
    """
    _check_n(n)
    var_count = comb(n, 2)
    values = {}
    for a, b, c in itertools.combinations(range(1, n + 1), 3):
        for cyc in ((a, b, c), (a, c, b)):
            rest = [v for v in range(1, n + 1) if v not in cyc]
            before = set(cycle_pairs(*cyc))
            before |= {(u, v) for u in cyc for v in rest}
            before |= {(u, v) for u, v in itertools.combinations(rest, 2)}
            bits = [0] * var_count
            for u, v in before:
                if u < v:
                    bits[ord_var(n, u, v)] = 1
            values[index_of(bits)] = Fraction(1)
    return DualFunctional(var_count, values)

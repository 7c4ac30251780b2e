"""Variable symmetries of axiom systems and orbits of assignments."""

from __future__ import annotations

import itertools
import logging
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import Monomial
from .systems import AxiomSystem, Family, Support, Weakening, ord_var, php_var

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SignedPermutation:
    """Map variable ``v`` to variable ``perm[v]``, negated if ``flips[v]``.

    On assignments it acts as ``y[perm[v]] = x[v] ^ flips[v]``.
    """

    perm: tuple[int, ...]
    flips: tuple[bool, ...]

    @classmethod
    def identity(cls, var_count: int) -> SignedPermutation:
        return cls(tuple(range(var_count)), (False,) * var_count)

    def compose(self, other: SignedPermutation) -> SignedPermutation:
        """``self`` after ``other``."""
        perm = tuple(self.perm[p] for p in other.perm)
        flips = tuple(
            bool(f ^ self.flips[p]) for p, f in zip(other.perm, other.flips)
        )
        return SignedPermutation(perm, flips)

    def apply_index(self, index: np.ndarray) -> np.ndarray:
        index = np.asarray(index, dtype=np.int64)
        out = np.zeros_like(index)
        for v, (target, flip) in enumerate(zip(self.perm, self.flips)):
            bit = (index >> v) & 1
            if flip:
                bit ^= 1
            out |= bit << target
        return out

    def apply_monomial(self, m: Monomial) -> Monomial:
        if m.zero:
            return m
        pos, neg = [], []
        for v in m.positives:
            (neg if self.flips[v] else pos).append(self.perm[v])
        for v in m.negatives:
            (pos if self.flips[v] else neg).append(self.perm[v])
        return Monomial(tuple(pos), tuple(neg))


@dataclass(frozen=True)
class Orbits:
    """Orbits of a support under a group.

    ``labels[r]`` is the orbit of support row ``r``; ``representatives[k]`` is
    the first row of orbit ``k``; ``sizes[k]`` its number of rows.
    """

    labels: np.ndarray
    representatives: np.ndarray
    sizes: np.ndarray

    def __len__(self) -> int:
        return len(self.representatives)

    def counts(self, mask: np.ndarray) -> np.ndarray:
        """Number of rows of each orbit selected by a boolean mask over the support."""
        return np.bincount(self.labels[mask], minlength=len(self))

    def indicator(self, k: int) -> np.ndarray:
        return (self.labels == k).astype(np.int64)


class SymmetryGroup:
    """A group of signed variable permutations, given by generators."""

    def __init__(
        self, var_count: int, generators: Sequence[SignedPermutation], name: str = "custom"
    ):
        self.var_count = var_count
        self.generators = tuple(g for g in generators if g != SignedPermutation.identity(var_count))
        self.name = name

    def __repr__(self) -> str:
        return f"SymmetryGroup({self.name!r}, generators={len(self.generators)})"

    @classmethod
    def trivial(cls, var_count: int) -> SymmetryGroup:
        return cls(var_count, (), "trivial")

    @cached_property
    def elements(self) -> tuple[SignedPermutation, ...]:
        """All group elements (closure of the generators)."""
        ident = SignedPermutation.identity(self.var_count)
        seen = {ident}
        queue = deque([ident])
        while queue:
            g = queue.popleft()
            for gen in self.generators:
                h = gen.compose(g)
                if h not in seen:
                    seen.add(h)
                    queue.append(h)
        log.debug("group %s has %d elements", self.name, len(seen))
        return tuple(seen)

    def orbits(self, support: Support) -> Orbits:
        """Orbits of the support rows; the support must be closed under the group."""
        images = [support.position(g.apply_index(support.index)) for g in self.generators]
        lab = np.arange(len(support), dtype=np.int64)
        while True:
            old = lab.copy()
            for img in images:
                np.minimum.at(lab, img, lab.copy())
                lab = np.minimum(lab, lab[img])
            lab = lab[lab]
            if np.array_equal(lab, old):
                break
        reps, labels = np.unique(lab, return_inverse=True)
        labels = labels.reshape(-1)
        sizes = np.bincount(labels, minlength=len(reps))
        log.debug("%s: %d orbits under %s", support, len(reps), self.name)
        return Orbits(labels, reps, sizes)

    def axiom_representatives(self, system: AxiomSystem) -> list[int]:
        """One axiom index per orbit of axioms (the smallest index)."""
        lookup = {ax.monomial: i for i, ax in enumerate(system.axioms)}
        parent = list(range(len(system.axioms)))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, ax in enumerate(system.axioms):
            for g in self.generators:
                j = lookup.get(g.apply_monomial(ax.monomial))
                if j is None:
                    msg = f"group {self.name} does not map axiom {ax.label} to an axiom"
                    raise ValueError(msg)
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        return sorted({find(i) for i in range(len(system.axioms))})

    def weakening_images(self, system: AxiomSystem, w: Weakening) -> list[Weakening]:
        """``g.w`` for every group element ``g`` (with repetitions)."""
        lookup = {ax.monomial: i for i, ax in enumerate(system.axioms)}
        axiom = system.axioms[w.axiom_index].monomial
        out = []
        for g in self.elements:
            idx = lookup[g.apply_monomial(axiom)]
            out.append(Weakening.of(system, idx, g.apply_monomial(w.multiplier)))
        return out


def _from_positions(images: Sequence[int], var_count: int) -> SignedPermutation:
    return SignedPermutation(tuple(images), (False,) * var_count)


def _generating_permutations(k: int) -> list[tuple[int, ...]]:
    """A transposition and a k-cycle (0-based); they generate the symmetric group."""
    if k < 2:
        return []
    swap = (1, 0, *range(2, k))
    cycle = (*range(1, k), 0)
    return [swap] if k == 2 else [swap, cycle]


def php_symmetry(n: int) -> SymmetryGroup:
    """Permutations of pigeons and of holes acting on ``x[i,j]``."""
    var_count = n * (n - 1)
    gens = []
    for sigma in _generating_permutations(n):
        gens.append(
            _from_positions(
                [
                    php_var(n, sigma[i - 1] + 1, j)
                    for i in range(1, n + 1)
                    for j in range(1, n)
                ],
                var_count,
            )
        )
    for tau in _generating_permutations(n - 1):
        gens.append(
            _from_positions(
                [
                    php_var(n, i, tau[j - 1] + 1)
                    for i in range(1, n + 1)
                    for j in range(1, n)
                ],
                var_count,
            )
        )
    return SymmetryGroup(var_count, gens, f"pigeons x holes (n={n})")


def element_permutation(n: int, pi: Sequence[int]) -> SignedPermutation:
    """The signed variable permutation induced by relabelling elements ``i -> pi[i-1]``."""
    perm, flips = [], []
    for i, j in itertools.combinations(range(1, n + 1), 2):
        a, b = pi[i - 1], pi[j - 1]
        if a < b:
            perm.append(ord_var(n, a, b))
            flips.append(False)
        else:
            perm.append(ord_var(n, b, a))
            flips.append(True)
    return SignedPermutation(tuple(perm), tuple(flips))


def ord_symmetry(n: int) -> SymmetryGroup:
    """Relabellings of the ``n`` elements."""
    gens = [
        element_permutation(n, [p + 1 for p in pi]) for pi in _generating_permutations(n)
    ]
    return SymmetryGroup(n * (n - 1) // 2, gens, f"elements (n={n})")


def symmetry_of(system: AxiomSystem) -> SymmetryGroup:
    """The natural symmetry group of a built-in family (trivial for custom systems)."""
    if system.family is Family.PHP:
        return php_symmetry(system.n)
    if system.family is Family.ORD:
        return ord_symmetry(system.n)
    return SymmetryGroup.trivial(system.var_count)

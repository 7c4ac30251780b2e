"""Axiom systems, weakenings and assignment supports."""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from math import comb

import numpy as np

from .algebra import ONE, Monomial, bits_of, literal, mono_mul

log = logging.getLogger(__name__)


class Family(str, Enum):
    PHP = "php"
    ORD = "ord"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Axiom:
    """A monomial axiom ``monomial = 0``.

    ``kind`` is one of ``pigeon``, ``hole``, ``nonmin``, ``trans`` for the
    built-in families; ``params`` holds the 1-based pigeons/holes/elements the
    axiom is about (e.g. ``(i1, i2, j)`` for a hole axiom, or the cycle
    ``(i, j, k)`` of a transitivity axiom).
    """

    label: str
    monomial: Monomial
    kind: str = "custom"
    params: tuple[int, ...] = ()


@dataclass(frozen=True)
class AxiomSystem:
    """Named Boolean variables and a list of monomial axioms."""

    var_names: tuple[str, ...]
    axioms: tuple[Axiom, ...]
    family: Family = Family.CUSTOM
    n: int | None = None

    def __post_init__(self) -> None:
        for ax in self.axioms:
            if ax.monomial.zero:
                msg = f"axiom {ax.label} is the ZERO monomial"
                raise ValueError(msg)
            if ax.monomial.variables and max(ax.monomial.variables) >= self.var_count:
                msg = f"axiom {ax.label} uses a variable outside of the system"
                raise ValueError(msg)

    @property
    def var_count(self) -> int:
        return len(self.var_names)

    @cached_property
    def _by_label(self) -> dict[str, int]:
        return {ax.label: i for i, ax in enumerate(self.axioms)}

    @cached_property
    def _by_params(self) -> dict[tuple[str, tuple[int, ...]], int]:
        return {(ax.kind, ax.params): i for i, ax in enumerate(self.axioms)}

    def axiom_index(self, label: str) -> int:
        try:
            return self._by_label[label]
        except KeyError:
            msg = f"no axiom labelled '{label}'"
            raise ValueError(msg) from None

    def find_axiom(self, kind: str, params: Sequence[int]) -> int:
        try:
            return self._by_params[(kind, tuple(params))]
        except KeyError:
            msg = f"no {kind} axiom with parameters {tuple(params)}"
            raise ValueError(msg) from None

    def format_monomial(self, m: Monomial) -> str:
        """Human readable rendering using the variable names."""
        if m.zero:
            return "0"
        parts = [self.var_names[v] for v in m.positives]
        parts += [f"!{self.var_names[v]}" for v in m.negatives]
        return "*".join(parts) if parts else "1"

    def violated(self, index: np.ndarray) -> np.ndarray:
        """Boolean matrix ``(len(index), len(axioms))``: which axioms evaluate to 1."""
        index = np.asarray(index, dtype=np.int64)
        return np.stack([ax.monomial.mask(index) for ax in self.axioms], axis=-1)

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "n": self.n,
            "vars": list(self.var_names),
            "axioms": [
                {"label": ax.label, "monomial": str(ax.monomial), "kind": ax.kind}
                for ax in self.axioms
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> AxiomSystem:
        """Rebuild a system; built-in families are reconstructed from ``n``."""
        family = Family(data.get("family", "custom"))
        if family is Family.PHP:
            return build_php(int(data["n"]))
        if family is Family.ORD:
            return build_ord(int(data["n"]))
        axioms = tuple(
            Axiom(ax["label"], Monomial.parse(ax["monomial"]), ax.get("kind", "custom"))
            for ax in data["axioms"]
        )
        return cls(tuple(data["vars"]), axioms, Family.CUSTOM, data.get("n"))


def php_var(n: int, pigeon: int, hole: int) -> int:
    """Variable id of ``x[pigeon,hole]`` (1-based, row-major)."""
    return (pigeon - 1) * (n - 1) + (hole - 1)


def build_php(n: int) -> AxiomSystem:
    """The pigeonhole principle with ``n`` pigeons and ``n - 1`` holes.

    Pigeon axioms :math:`\\prod_j \\bar x_{i,j}` come first, then the hole
    axioms :math:`x_{i_1,j} x_{i_2,j}` for ``i1 < i2`` and every hole ``j``.
    """
    if n < 2:
        msg = f"PHP needs at least 2 pigeons, got n={n}"
        raise ValueError(msg)
    holes = range(1, n)
    names = tuple(f"x[{i},{j}]" for i in range(1, n + 1) for j in holes)

    axioms = [
        Axiom(
            f"pigeon[{i}]",
            Monomial((), tuple(php_var(n, i, j) for j in holes)),
            "pigeon",
            (i,),
        )
        for i in range(1, n + 1)
    ]
    for i1, i2 in itertools.combinations(range(1, n + 1), 2):
        axioms.extend(
            Axiom(
                f"hole[{i1},{i2},{j}]",
                Monomial((php_var(n, i1, j), php_var(n, i2, j))),
                "hole",
                (i1, i2, j),
            )
            for j in holes
        )
    return AxiomSystem(names, tuple(axioms), Family.PHP, n)


def ord_var(n: int, i: int, j: int) -> int:
    """Variable id of ``x[i,j]`` for ``i < j`` (1-based, lexicographic)."""
    if not 1 <= i < j <= n:
        msg = f"ord variables need 1 <= i < j <= n, got ({i}, {j})"
        raise ValueError(msg)
    # pairs (a, b) with a < i come first
    before = sum(n - a for a in range(1, i))
    return before + (j - i - 1)


def ord_literal(n: int, i: int, j: int) -> Monomial:
    """The literal ``x[i,j]`` ("i comes before j"), negated when ``i > j``."""
    if i < j:
        return literal(ord_var(n, i, j), True)
    return literal(ord_var(n, j, i), False)


def ord_monomial(n: int, pairs: Iterator[tuple[int, int]] | Sequence[tuple[int, int]]) -> Monomial:
    """Product of the ordered-pair literals ``x[a,b]``."""
    out = ONE
    for a, b in pairs:
        out = mono_mul(out, ord_literal(n, a, b))
    return out


def ord_pairs(n: int, m: Monomial) -> list[tuple[int, int]]:
    """Inverse of :func:`ord_monomial`: the ordered pairs of a monomial over ORD variables."""
    lookup = {
        ord_var(n, i, j): (i, j) for i, j in itertools.combinations(range(1, n + 1), 2)
    }
    pairs = [lookup[v] for v in m.positives]
    pairs += [lookup[v][::-1] for v in m.negatives]
    return sorted(pairs)


def build_ord(n: int) -> AxiomSystem:
    """The ordering principle on ``n`` elements.

    Variables are ``x[i,j]`` for ``i < j``; ``x[j,i]`` is the negated literal.
    Non-minimality axioms :math:`\\prod_{j \\ne i} x_{i,j}` come first, then for
    every ``i < j < k`` the two cyclic transitivity axioms ``(i, j, k)`` and
    ``(i, k, j)``.
    """
    if n < 3:
        msg = f"ORD needs at least 3 elements, got n={n}"
        raise ValueError(msg)
    names = tuple(f"x[{i},{j}]" for i, j in itertools.combinations(range(1, n + 1), 2))

    axioms = [
        Axiom(
            f"nonmin[{i}]",
            ord_monomial(n, [(i, j) for j in range(1, n + 1) if j != i]),
            "nonmin",
            (i,),
        )
        for i in range(1, n + 1)
    ]
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        for cycle in ((i, j, k), (i, k, j)):
            a, b, c = cycle
            axioms.append(
                Axiom(
                    f"trans[{a},{b},{c}]",
                    ord_monomial(n, [(a, b), (b, c), (c, a)]),
                    "trans",
                    cycle,
                )
            )
    return AxiomSystem(names, tuple(axioms), Family.ORD, n)


def canonical_cycle(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Rotate a 3-cycle so that its smallest element comes first."""
    cyc = (a, b, c)
    k = cyc.index(min(cyc))
    return cyc[k:] + cyc[:k]


@dataclass(frozen=True)
class Weakening:
    """A weakening ``r * p_i`` of axiom ``p_i``.

    Two weakenings of the same axiom are equal iff their products are equal;
    the multiplier is normalized to the product's literals outside the axiom.
    """

    axiom_index: int
    product: Monomial
    multiplier: Monomial = field(compare=False, default=ONE)

    @classmethod
    def of(cls, system: AxiomSystem, axiom_index: int, multiplier: Monomial) -> Weakening:
        axiom = system.axioms[axiom_index].monomial
        product = mono_mul(axiom, multiplier)
        return cls(axiom_index, product, product.quotient(axiom))

    def axiom(self, system: AxiomSystem) -> Axiom:
        return system.axioms[self.axiom_index]

    def to_dict(self, system: AxiomSystem) -> dict[str, str]:
        return {
            "axiom_label": system.axioms[self.axiom_index].label,
            "multiplier": str(self.multiplier),
        }

    @classmethod
    def from_dict(cls, system: AxiomSystem, data: Mapping) -> Weakening:
        return cls.of(
            system, system.axiom_index(data["axiom_label"]), Monomial.parse(data["multiplier"])
        )


def enumerate_weakenings(system: AxiomSystem, axiom_index: int) -> Iterator[Weakening]:
    """Lazily yield every weakening of one axiom, each product exactly once.

    Multipliers range over the ``3^(N-k)`` monomials in the variables the
    axiom does not use, in lexicographic order (absent < positive < negative
    per variable).
    """
    if not 0 <= axiom_index < len(system.axioms):
        msg = f"axiom index {axiom_index} out of range"
        raise ValueError(msg)
    axiom = system.axioms[axiom_index].monomial
    used = set(axiom.variables)
    others = [v for v in range(system.var_count) if v not in used]
    for states in itertools.product((0, 1, 2), repeat=len(others)):
        pos = tuple(v for v, s in zip(others, states) if s == 1)
        neg = tuple(v for v, s in zip(others, states) if s == 2)
        multiplier = Monomial(pos, neg)
        yield Weakening(axiom_index, mono_mul(axiom, multiplier), multiplier)


class Support:
    """A finite list of assignments, stored as cube indices.

    Parameters
    ----------
    var_count
        number of variables ``N``.
    index
        the cube indices, in the support's own (fixed) order.
    name
        short description used in logs and reports.
    """

    def __init__(self, var_count: int, index: np.ndarray, name: str = "custom"):
        self.var_count = var_count
        self.index = np.asarray(index, dtype=np.int64)
        self.name = name
        self._sorter = np.argsort(self.index, kind="stable")
        self._sorted = self.index[self._sorter]
        if len(self._sorted) > 1 and np.any(np.diff(self._sorted) == 0):
            msg = "support contains repeated assignments"
            raise ValueError(msg)

    def __len__(self) -> int:
        return len(self.index)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        for idx in self.index:
            yield bits_of(int(idx), self.var_count)

    def __repr__(self) -> str:
        return f"Support({self.name!r}, var_count={self.var_count}, size={len(self)})"

    @property
    def is_full_cube(self) -> bool:
        return len(self) == 2**self.var_count

    def bits(self) -> np.ndarray:
        """Boolean matrix ``(len(self), var_count)``."""
        shifts = np.arange(self.var_count, dtype=np.int64)
        return ((self.index[:, None] >> shifts) & 1).astype(bool)

    def position(self, index: np.ndarray) -> np.ndarray:
        """Row positions of the given cube indices; raises if one is not in the support."""
        index = np.asarray(index, dtype=np.int64)
        pos = np.searchsorted(self._sorted, index)
        pos = np.clip(pos, 0, max(len(self._sorted) - 1, 0))
        if len(self._sorted) == 0 or not np.array_equal(self._sorted[pos], index):
            msg = f"assignment not contained in support {self.name}"
            raise ValueError(msg)
        return self._sorter[pos]

    def contains(self, index: np.ndarray) -> np.ndarray:
        index = np.asarray(index, dtype=np.int64)
        if len(self._sorted) == 0:
            return np.zeros(index.shape, dtype=bool)
        pos = np.clip(np.searchsorted(self._sorted, index), 0, len(self._sorted) - 1)
        return self._sorted[pos] == index


def full_cube(var_count: int) -> Support:
    """All ``2^N`` assignments, in cube-index order."""
    return Support(var_count, np.arange(2**var_count, dtype=np.int64), "full")


def hole_maps(n: int) -> np.ndarray:
    """All maps from ``n`` pigeons to ``n - 1`` holes, as 0-based holes.

    Row ``r`` maps pigeon ``i`` (0-based) to hole ``(r // (n-1)**i) % (n-1)``,
    so reshaping a per-row array to ``(n-1,)*n`` and transposing gives one axis
    per pigeon.
    """
    holes = n - 1
    rows = np.arange(holes**n, dtype=np.int64)
    powers = holes ** np.arange(n, dtype=np.int64)
    return (rows[:, None] // powers) % holes


def one_hole_per_pigeon(n: int) -> Support:
    """The ``(n-1)^n`` indicator assignments of maps pigeons -> holes, in :func:`hole_maps` order."""
    if n < 2:
        msg = f"need at least 2 pigeons, got n={n}"
        raise ValueError(msg)
    maps = hole_maps(n)
    var = np.arange(n, dtype=np.int64) * (n - 1) + maps
    index = np.sum(np.left_shift(np.int64(1), var), axis=1)
    return Support(n * (n - 1), index, "one-hole-per-pigeon")


def assignments_one_hole_per_pigeon(n: int) -> Iterator[tuple[int, ...]]:
    """Stream of the restricted PHP assignments."""
    return iter(one_hole_per_pigeon(n))


def _minimum_masks(system: AxiomSystem, index: np.ndarray) -> np.ndarray:
    nonmin = [ax.monomial for ax in system.axioms if ax.kind == "nonmin"]
    return np.stack([m.mask(index) for m in nonmin], axis=-1)


def tournaments(n: int) -> Support:
    """All orientations of the pairs of ``n`` elements."""
    return full_cube(comb(n, 2))


def no_minimum(n: int) -> Support:
    """Tournaments in which every element loses to some other element."""
    system = build_ord(n)
    index = tournaments(n).index
    keep = ~_minimum_masks(system, index).any(axis=1)
    return Support(system.var_count, index[keep], "no-minimum")


def with_minimum(n: int) -> Support:
    """Tournaments that have a minimum element."""
    system = build_ord(n)
    index = tournaments(n).index
    keep = _minimum_masks(system, index).any(axis=1)
    return Support(system.var_count, index[keep], "with-minimum")


def assignments_no_minimum(n: int) -> Iterator[tuple[int, ...]]:
    """Stream of the tournaments without a minimum element."""
    return iter(no_minimum(n))


@dataclass(frozen=True)
class HoleSets:
    """Allowed hole sets of a weakening of the hole axiom ``x[i1,j] x[i2,j]``.

    Pigeons and holes are 1-based. ``sets`` lists ``(pigeon, holes)`` for
    every pigeon outside the axiom pair.
    """

    n: int
    axiom: tuple[int, int, int]
    sets: tuple[tuple[int, frozenset[int]], ...]

    @classmethod
    def from_mapping(
        cls, n: int, axiom: Sequence[int], mapping: Mapping[int, Sequence[int]]
    ) -> HoleSets:
        i1, i2, j = (int(a) for a in axiom)
        if not (1 <= i1 < i2 <= n and 1 <= j <= n - 1):
            msg = f"invalid hole axiom {tuple(axiom)} for n={n}"
            raise ValueError(msg)
        others = [i for i in range(1, n + 1) if i not in (i1, i2)]
        if sorted(mapping) != others:
            msg = f"hole sets must be given for pigeons {others}, got {sorted(mapping)}"
            raise ValueError(msg)
        sets = []
        for i in others:
            holes = frozenset(int(h) for h in mapping[i])
            if not holes <= set(range(1, n)):
                msg = f"hole set {sorted(holes)} of pigeon {i} is out of range"
                raise ValueError(msg)
            sets.append((i, holes))
        return cls(n, (i1, i2, j), tuple(sets))

    def __getitem__(self, pigeon: int) -> frozenset[int]:
        return self.allowed(pigeon)

    def allowed(self, pigeon: int) -> frozenset[int]:
        """Holes pigeon ``pigeon`` may occupy while the weakening is 1."""
        i1, i2, j = self.axiom
        if pigeon in (i1, i2):
            return frozenset({j})
        for i, holes in self.sets:
            if i == pigeon:
                return holes
        msg = f"no pigeon {pigeon}"
        raise ValueError(msg)

    def as_dict(self) -> dict[int, list[int]]:
        return {i: sorted(h) for i, h in self.sets}

    def flip(self, pigeons: Sequence[int]) -> HoleSets:
        """Complement the hole sets of the given pigeons."""
        holes = frozenset(range(1, self.n))
        return HoleSets(
            self.n,
            self.axiom,
            tuple((i, holes - h if i in pigeons else h) for i, h in self.sets),
        )

    def mask(self, maps: np.ndarray) -> np.ndarray:
        """Evaluate on an array of 0-based hole maps ``(count, n)``."""
        maps = np.asarray(maps)
        out = np.ones(len(maps), dtype=bool)
        for pigeon in range(1, self.n + 1):
            allowed = np.array(sorted(h - 1 for h in self.allowed(pigeon)), dtype=np.int64)
            out &= np.isin(maps[:, pigeon - 1], allowed)
        return out


def holesets_to_weakening(system: AxiomSystem, h: HoleSets) -> Weakening:
    """The canonical weakening with the given hole sets.

    The multiplier only uses negative literals ``!x[i,j]`` for ``j`` outside
    ``H_i``; an empty set multiplies by every ``!x[i,j]``.
    """
    if system.family is not Family.PHP or system.n != h.n:
        msg = "hole sets only apply to the PHP system with the same n"
        raise ValueError(msg)
    n = h.n
    axiom_index = system.find_axiom("hole", h.axiom)
    negatives = [
        php_var(n, i, j) for i, holes in h.sets for j in range(1, n) if j not in holes
    ]
    return Weakening.of(system, axiom_index, Monomial((), tuple(negatives)))


def weakening_to_holesets(system: AxiomSystem, w: Weakening) -> HoleSets:
    """Hole sets of a hole-axiom weakening, agreeing with it on restricted assignments."""
    axiom = system.axioms[w.axiom_index]
    if system.family is not Family.PHP or axiom.kind != "hole":
        msg = "only weakenings of PHP hole axioms have hole sets"
        raise ValueError(msg)
    n = system.n
    holes = set(range(1, n))
    pos, neg = set(w.product.positives), set(w.product.negatives)
    mapping = {}
    for i in range(1, n + 1):
        if i in axiom.params[:2]:
            continue
        forced = {j for j in holes if php_var(n, i, j) in pos}
        banned = {j for j in holes if php_var(n, i, j) in neg}
        if len(forced) > 1:
            mapping[i] = set()
        elif forced:
            mapping[i] = forced - banned
        else:
            mapping[i] = holes - banned
    return HoleSets.from_mapping(n, axiom.params, mapping)

"""Multilinear Boolean algebra with exact rational coefficients.

Variables are natural numbers. An assignment of ``N`` variables is either a
0/1 sequence or its *cube index* ``sum(x[v] << v)``; bulk evaluation works on
numpy arrays of cube indices.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .utils import format_fraction, parse_fraction

log = logging.getLogger(__name__)

_LITERAL = re.compile(r"^(!?)x(\d+)$")


@dataclass(frozen=True, order=True)
class Monomial:
    """A product of positive and negative Boolean literals.

    ``Monomial((1,), (2,))`` is :math:`x_1 (1 - x_2)`. Literal sets are stored
    sorted. A product that contains both :math:`x` and :math:`1-x` collapses
    to :data:`ZERO`.
    """

    positives: tuple[int, ...] = ()
    negatives: tuple[int, ...] = ()
    zero: bool = False

    def __post_init__(self) -> None:
        pos = tuple(sorted({int(v) for v in self.positives}))
        neg = tuple(sorted({int(v) for v in self.negatives}))
        if any(v < 0 for v in (*pos, *neg)):
            msg = f"variable ids must be non-negative, got {pos} / {neg}"
            raise ValueError(msg)
        if self.zero or set(pos) & set(neg):
            pos, neg = (), ()
            object.__setattr__(self, "zero", True)
        object.__setattr__(self, "positives", pos)
        object.__setattr__(self, "negatives", neg)

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(sorted((*self.positives, *self.negatives)))

    @property
    def degree(self) -> int:
        return len(self.positives) + len(self.negatives)

    @property
    def care(self) -> int:
        """Bitmask of the variables the monomial depends on."""
        mask = 0
        for v in self.variables:
            mask |= 1 << v
        return mask

    @property
    def want(self) -> int:
        """Bitmask of the positive literals."""
        mask = 0
        for v in self.positives:
            mask |= 1 << v
        return mask

    def __mul__(self, other: Monomial) -> Monomial:
        return mono_mul(self, other)

    def divides(self, other: Monomial) -> bool:
        """True if ``other`` is a multiple of this monomial (ZERO is a multiple of anything)."""
        if other.zero:
            return True
        if self.zero:
            return False
        return set(self.positives) <= set(other.positives) and set(
            self.negatives
        ) <= set(other.negatives)

    def quotient(self, divisor: Monomial) -> Monomial:
        """Literals of this monomial that are not in ``divisor``."""
        if self.zero:
            return ZERO
        return Monomial(
            tuple(set(self.positives) - set(divisor.positives)),
            tuple(set(self.negatives) - set(divisor.negatives)),
        )

    def mask(self, index: np.ndarray) -> np.ndarray:
        """Evaluate on an array of cube indices, returning a boolean array."""
        index = np.asarray(index, dtype=np.int64)
        if self.zero:
            return np.zeros(index.shape, dtype=bool)
        return (index & self.care) == self.want

    def __str__(self) -> str:
        if self.zero:
            return "0"
        if not self.positives and not self.negatives:
            return "1"
        lits = [(v, "") for v in self.positives] + [(v, "!") for v in self.negatives]
        return " ".join(f"{sign}x{v}" for v, sign in sorted(lits))

    @classmethod
    def parse(cls, text: str) -> Monomial:
        """Parse the text syntax, e.g. ``"x3 !x7 x12"``; ``"0"`` is ZERO, ``"1"`` or ``""`` the empty product."""
        text = text.strip()
        if text == "0":
            return ZERO
        if text in ("", "1"):
            return ONE
        pos, neg = [], []
        for token in text.split():
            match = _LITERAL.match(token)
            if match is None:
                msg = f"malformed literal '{token}' in monomial '{text}'"
                raise ValueError(msg)
            (neg if match.group(1) else pos).append(int(match.group(2)))
        return cls(tuple(pos), tuple(neg))


ZERO = Monomial(zero=True)
ONE = Monomial()


def literal(var: int, value: bool = True) -> Monomial:
    """The monomial :math:`x_v` (or :math:`1 - x_v` if ``value`` is false)."""
    return Monomial((var,), ()) if value else Monomial((), (var,))


def _check_assignment(m: Monomial, x: Sequence[int]) -> None:
    if m.zero:
        return
    top = max(m.variables, default=-1)
    if top >= len(x):
        msg = f"variable x{top} out of range for an assignment of length {len(x)}"
        raise ValueError(msg)


def mono_eval(m: Monomial, x: Sequence[int]) -> int:
    """Evaluate a monomial on a 0/1 assignment."""
    _check_assignment(m, x)
    if m.zero:
        return 0
    if all(x[v] for v in m.positives) and not any(x[v] for v in m.negatives):
        return 1
    return 0


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    """Product of two monomials modulo :math:`x^2 = x` and :math:`x(1-x) = 0`."""
    if a.zero or b.zero:
        return ZERO
    return Monomial(a.positives + b.positives, a.negatives + b.negatives)


def expand_one_minus(m: Monomial) -> list[Monomial]:
    r"""Write :math:`1 - m` as a sum of monomials.

    Uses :math:`1 - \prod_{j=1}^k \ell_j = \sum_{j=1}^k (1 - \ell_j) \prod_{i<j} \ell_i`
    over the literals of ``m`` in canonical order.
    """
    if m.zero:
        msg = "1 - ZERO is the constant 1, not a telescoping sum"
        raise ValueError(msg)
    lits = sorted([(v, True) for v in m.positives] + [(v, False) for v in m.negatives])
    out = []
    prefix = ONE
    for v, positive in lits:
        out.append(prefix * literal(v, not positive))
        prefix = prefix * literal(v, positive)
    return out


@dataclass(frozen=True)
class Polynomial:
    """Sparse multilinear polynomial with exact rational coefficients.

    Zero coefficients and ZERO monomials are never stored.
    """

    terms: Mapping[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            if mono.zero:
                continue
            total = clean.get(mono, Fraction(0)) + Fraction(coeff)
            if total == 0:
                clean.pop(mono, None)
            else:
                clean[mono] = total
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple[Monomial, Fraction | int]]) -> Polynomial:
        acc: dict[Monomial, Fraction] = {}
        for mono, coeff in pairs:
            acc[mono] = acc.get(mono, Fraction(0)) + Fraction(coeff)
        return cls(acc)

    @classmethod
    def constant(cls, value: Fraction | int) -> Polynomial:
        return cls({ONE: Fraction(value)})

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: Polynomial) -> Polynomial:
        return Polynomial.from_terms([*self, *other])

    def __neg__(self) -> Polynomial:
        return Polynomial({m: -c for m, c in self})

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other: Polynomial | Monomial | Fraction | int) -> Polynomial:
        if isinstance(other, Monomial):
            other = Polynomial({other: Fraction(1)})
        if not isinstance(other, Polynomial):
            return Polynomial({m: c * Fraction(other) for m, c in self})
        return Polynomial.from_terms(
            (mono_mul(ma, mb), ca * cb) for ma, ca in self for mb, cb in other
        )

    __rmul__ = __mul__

    def __call__(self, x: Sequence[int]) -> Fraction:
        return poly_eval(self, x)

    def evaluate(self, index: np.ndarray) -> np.ndarray:
        """Evaluate on an array of cube indices (``object`` array of Fractions)."""
        index = np.asarray(index, dtype=np.int64)
        out = np.full(index.shape, Fraction(0), dtype=object)
        for mono, coeff in self:
            out[mono.mask(index)] += coeff
        return out

    def to_list(self) -> list[dict[str, str]]:
        return [{"monomial": str(m), "coeff": format_fraction(c)} for m, c in self]

    @classmethod
    def from_list(cls, items: Iterable[Mapping[str, str]]) -> Polynomial:
        return cls.from_terms(
            (Monomial.parse(item["monomial"]), parse_fraction(item["coeff"]))
            for item in items
        )


def poly_eval(p: Polynomial, x: Sequence[int]) -> Fraction:
    """Evaluate a polynomial on a 0/1 assignment."""
    return sum((c * mono_eval(m, x) for m, c in p), Fraction(0))


def total_coefficient_size(p: Polynomial) -> Fraction:
    """Sum of the magnitudes of the coefficients."""
    return sum((abs(c) for _, c in p), Fraction(0))


def bits_of(index: int, var_count: int) -> tuple[int, ...]:
    """The 0/1 assignment with the given cube index."""
    return tuple((index >> v) & 1 for v in range(var_count))


def index_of(x: Sequence[int]) -> int:
    """Cube index of a 0/1 assignment."""
    return sum(int(b) << v for v, b in enumerate(x))

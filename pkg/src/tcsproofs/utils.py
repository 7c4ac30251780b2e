from __future__ import annotations

import json
import logging
import math
from collections.abc import Iterable, Mapping
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np
import yaml
from dbetto import AttrsDict
from dbetto import utils as dbutils

log = logging.getLogger(__name__)

_INT64_SAFE = 2**62


def load_config(path: str | Path | None = None) -> AttrsDict:
    """Load the package configuration.

    The bundled ``configs/defaults.yaml`` is read first, then the optional
    user file is merged on top of it (recursively, user values win).

    Parameters
    ----------
    path
        YAML or JSON file with overrides.
    """
    defaults = dbutils.load_dict(
        str(resources.files("tcsproofs") / "configs" / "defaults.yaml")
    )
    if path is not None:
        log.debug("loading configuration overrides from %s", path)
        _merge(defaults, dbutils.load_dict(str(path)))
    return AttrsDict(defaults)


def _merge(base: dict, extra: Mapping) -> None:
    for key, val in extra.items():
        if isinstance(val, Mapping) and isinstance(base.get(key), Mapping):
            _merge(base[key], val)
        else:
            base[key] = val


def write_dict(obj: Mapping, path: str | Path) -> None:
    """Write a dictionary to a JSON or YAML file, depending on the suffix.

    Exact values are converted to plain types first, see :func:`dump_dict`.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    dbutils.write_dict(_to_plain(obj), str(path))


def dump_dict(obj: Mapping, fmt: str = "json") -> str:
    """Serialize a (nested) dictionary of plain values to a string."""
    plain = _to_plain(obj)
    if fmt == "json":
        return json.dumps(plain, indent=2) + "\n"
    if fmt == "yaml":
        return yaml.safe_dump(plain, sort_keys=False)
    msg = f"unsupported output format '{fmt}'"
    raise ValueError(msg)


def _to_plain(obj):
    if isinstance(obj, Mapping):
        return {str(k): _to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_plain(v) for v in obj]
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def parse_fraction(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"``, an integer or a finite decimal into a :class:`Fraction`."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except ValueError:
        msg = f"'{text}' is not a rational number"
        raise ValueError(msg) from None


def format_fraction(value: Fraction) -> str:
    """Format a rational as ``"p/q"`` (or ``"p"`` when integral)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def round_decimal(value: Fraction, places: int = 3) -> str:
    """Round a rational half away from zero and render it with ``places`` decimals."""
    value = Fraction(value)
    scale = 10**places
    units = abs(value) * scale
    rounded = math.floor(units + Fraction(1, 2))
    return _render_units(rounded, places, negative=value < 0 and rounded != 0)


def _render_units(units: int, places: int, *, negative: bool) -> str:
    sign = "-" if negative else ""
    if places == 0:
        return f"{sign}{units}"
    whole, frac = divmod(units, 10**places)
    return f"{sign}{whole}.{frac:0{places}d}"


def repeating_decimal(value: Fraction) -> str:
    """Exact decimal expansion with the period in parentheses.

    Examples
    --------
    >>> repeating_decimal(Fraction(2737, 66))
    '41.4(69)'
    >>> repeating_decimal(Fraction(1175, 4))
    '293.75'
    """
    value = Fraction(value)
    sign = "-" if value < 0 else ""
    num, den = abs(value.numerator), value.denominator
    whole, rem = divmod(num, den)

    digits: list[str] = []
    seen: dict[int, int] = {}
    while rem and rem not in seen:
        seen[rem] = len(digits)
        rem *= 10
        digit, rem = divmod(rem, den)
        digits.append(str(digit))

    if not digits:
        return f"{sign}{whole}"
    if not rem:
        return f"{sign}{whole}.{''.join(digits)}"
    start = seen[rem]
    return f"{sign}{whole}.{''.join(digits[:start])}({''.join(digits[start:])})"


def sqrt_round(square: Fraction, places: int = 3) -> str:
    """Round ``sqrt(square)`` to ``places`` decimals without floating point.

    Parameters
    ----------
    square
        a non-negative rational.
    """
    square = Fraction(square)
    if square < 0:
        msg = "cannot take the square root of a negative number"
        raise ValueError(msg)
    scaled = square * 10 ** (2 * places)
    root = math.isqrt(math.floor(scaled))
    # round half up: compare (root + 1/2)^2 with the scaled square
    if Fraction((2 * root + 1) ** 2, 4) <= scaled:
        root += 1
    return _render_units(root, places, negative=False)


def common_denominator(values: Iterable[Fraction]) -> int:
    """Least common multiple of the denominators of ``values``."""
    return math.lcm(1, *(Fraction(v).denominator for v in values))


def scale_to_integers(
    values: Iterable[Fraction], *, terms: int = 1
) -> tuple[np.ndarray, int]:
    """Scale rationals to integers with their common denominator.

    Returns the scaled array and the scale. The array is ``int64`` if any sum
    of ``terms`` scaled values is guaranteed to fit, Python integers in an
    ``object`` array otherwise.

    Parameters
    ----------
    values
        the rationals.
    terms
        the largest number of values that will be added together.
    """
    values = [Fraction(v) for v in values]
    scale = common_denominator(values)
    ints = [v.numerator * (scale // v.denominator) for v in values]
    bound = max((abs(i) for i in ints), default=0) * max(terms, 1)
    if bound < _INT64_SAFE:
        return np.array(ints, dtype=np.int64), scale
    arr = np.empty(len(ints), dtype=object)
    arr[:] = ints
    return arr, scale


def parse_n_range(text: str) -> list[int]:
    """Parse ``"A..B"`` (inclusive) or a single integer into a list of ``n``."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        first, last = int(lo), int(hi)
    else:
        first = last = int(text)
    if first > last:
        msg = f"empty range '{text}'"
        raise ValueError(msg)
    return list(range(first, last + 1))

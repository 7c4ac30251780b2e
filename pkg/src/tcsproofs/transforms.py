"""Sum transforms over subcubes and hole-set tuples.

Both transforms work on integer arrays (``int64`` or ``object``), so every
sum they produce is exact.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np

log = logging.getLogger(__name__)


def cube_array(values: np.ndarray, var_count: int) -> np.ndarray:
    """View a vector over ``{0,1}^N`` (cube-index order) as an array with one axis per variable."""
    values = np.asarray(values)
    if values.shape != (2**var_count,):
        msg = f"expected {2**var_count} values, got shape {values.shape}"
        raise ValueError(msg)
    return values.reshape((2,) * var_count).T


def fix_literals(
    arr: np.ndarray, positives: Sequence[int], negatives: Sequence[int]
) -> np.ndarray:
    """Restrict a per-variable cube array to the subcube where the literals hold.

    The remaining axes are the free variables in increasing order.
    """
    idx: list[int | slice] = [slice(None)] * arr.ndim
    for v in positives:
        idx[v] = 1
    for v in negatives:
        idx[v] = 0
    return arr[tuple(idx)]


def subcube_sums(arr: np.ndarray) -> np.ndarray:
    """Sums over every subcube of a per-variable cube array.

    The output has shape ``(3,)*M``; along each axis digit 0 selects
    ``x_v = 0`` (literal ``!x_v``), 1 selects ``x_v = 1`` (literal ``x_v``)
    and 2 sums both (variable absent). Entry ``d`` is therefore the sum of the
    input over the points where the monomial encoded by ``d`` is 1.
    """
    for axis in range(arr.ndim):
        lo = np.take(arr, 0, axis=axis)
        hi = np.take(arr, 1, axis=axis)
        arr = np.stack([lo, hi, lo + hi], axis=axis)
    return arr


def digits_to_literals(
    digits: Sequence[int], free_vars: Sequence[int]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Decode a :func:`subcube_sums` multi-index into positive and negative literals."""
    pos = tuple(v for v, d in zip(free_vars, digits) if d == 1)
    neg = tuple(v for v, d in zip(free_vars, digits) if d == 0)
    return pos, neg


def hole_map_array(values: np.ndarray, n: int) -> np.ndarray:
    """View a vector over hole maps (:func:`~.systems.hole_maps` order) with one axis per pigeon."""
    values = np.asarray(values)
    holes = n - 1
    if values.shape != (holes**n,):
        msg = f"expected {holes**n} values, got shape {values.shape}"
        raise ValueError(msg)
    return values.reshape((holes,) * n).T


def subset_sums(arr: np.ndarray, holes: int) -> np.ndarray:
    """Replace each hole axis by an axis over hole subsets.

    Along each axis, entry ``A`` (bitmask over 0-based holes) is the sum of
    the input over the holes in ``A``.
    """
    for axis in range(arr.ndim):
        parts = [np.zeros_like(np.take(arr, 0, axis=axis))]
        for h in range(holes):
            slab = np.take(arr, h, axis=axis)
            parts = parts + [p + slab for p in parts]
        arr = np.stack(parts, axis=axis)
    return arr


def top_entries(arr: np.ndarray, threshold: int, count: int) -> list[tuple[int, ...]]:
    """Multi-indices of up to ``count`` entries with ``|value| > threshold``, largest first."""
    flat = np.abs(arr.reshape(-1))
    rank = flat.astype(float) if flat.dtype == object else flat
    order = np.argsort(-rank, kind="stable")[:count]
    picked = [int(k) for k in order if flat[k] > threshold]
    if not picked and flat.size:
        # float ranking may be inexact for object arrays
        k = int(np.argmax(flat))
        if flat[k] > threshold:
            picked = [k]
    return [tuple(int(d) for d in np.unravel_index(k, arr.shape)) for k in picked]

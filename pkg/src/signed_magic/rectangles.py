"""Signed magic rectangles SMA(m, 2m; 2t, t) built from two ``m x m`` halves."""

from __future__ import annotations

from .core import (
    CompositionError,
    SignedGrid,
    UnsupportedParameters,
    is_shiftable,
    map_values,
    negate,
    side_by_side,
)
from .squares import sms_band_multiple_of_four, add_four, sms6_2mod4, sms6_odd, sms_via_heffter


def _bad(m: int, t: int, why: str) -> UnsupportedParameters:
    return UnsupportedParameters(f"SMA({m},{2 * m};{2 * t},{t}): {why}")


def shiftable_sms(m: int, t: int) -> SignedGrid:
    """An SMS(m;t) with equal positive and negative counts in every line.

    Such squares exist exactly for even ``t`` with ``4 <= t <= m``.
    """
    if t % 2:
        raise _bad(m, t, "a shiftable square needs an even number of entries per line")
    if t < 4 or m < t:
        raise _bad(m, t, "a shiftable square needs 4 <= t <= m")
    if t == m:
        from .tight import construct_even_even

        grid = construct_even_even(m, m)
    elif t % 4 == 0:
        grid = sms_band_multiple_of_four(m, t)
    elif m % 2:
        grid = sms6_odd(m)
        for _ in range(6, t, 4):
            grid = add_four(grid)
    elif m % 4 == 2:
        grid = sms6_2mod4(m)
        for _ in range(6, t, 4):
            grid = add_four(grid)
    else:
        # m ≡ 0 (mod 4), t ≡ 2 (mod 4): pair each row of a sign-balanced
        # Heffter array with its negation
        from .providers import shiftable_tight_heffter

        h = shiftable_tight_heffter(m // 2, t)
        grid = sms_via_heffter(m, t, h.grid).with_meta(provider_key=h.key)
    if not is_shiftable(grid):
        raise CompositionError(f"internal error: SMS({m};{t}) is not shiftable")
    return grid


def sma_double_via_heffter(m: int, t: int) -> SignedGrid:
    """Left half an integer Heffter array H(m;t), right half its negation."""
    if not (3 <= t <= m) or (m * t) % 4 not in (0, 3):
        raise _bad(m, t, "needs m >= t >= 3 and mt ≡ 0,3 (mod 4)")
    from .providers import square_heffter

    h = square_heffter(m, t)
    return side_by_side(h.grid, negate(h.grid)).with_meta(provider_key=h.key)


def move_outward(grid: SignedGrid, k: int) -> SignedGrid:
    return map_values(grid, lambda v: v + k if v > 0 else v - k)


def sma_double_via_shiftable(m: int, t: int) -> SignedGrid:
    """Left half a shiftable SMS(m;t); right half the same square with every
    entry moved ``mt/2`` further from zero."""
    left = shiftable_sms(m, t)
    right = move_outward(left, m * t // 2)
    grid = side_by_side(left, right)
    key = left.meta.get("provider_key")
    return grid.with_meta(provider_key=key) if key else grid


def construct_double_rectangle(m: int, t: int) -> SignedGrid:
    from .decide import decide_double_rectangle

    try:
        decision = decide_double_rectangle(m, t)
    except ValueError as exc:
        raise _bad(m, t, str(exc)) from exc
    if not decision.exists:
        raise _bad(m, t, decision.reason or "not constructible")
    if decision.method == "double.heffter":
        grid = sma_double_via_heffter(m, t)
    else:
        grid = sma_double_via_shiftable(m, t)
    return grid.with_meta(method=decision.method)


__all__ = [
    "construct_double_rectangle",
    "move_outward",
    "shiftable_sms",
    "sma_double_via_heffter",
    "sma_double_via_shiftable",
]

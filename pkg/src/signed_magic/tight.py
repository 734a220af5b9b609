"""Tight signed magic arrays: every cell filled, rows and columns sum to zero."""

from __future__ import annotations

from .core import (
    SignedGrid,
    UnsupportedParameters,
    map_values,
    paste,
    shift_magnitudes,
    stack,
    transpose,
)

# the shiftable 2x4 building block; all even-sided tilings are copies of it
BLOCK_2X4 = SignedGrid.from_rows([[1, -2, -3, 4], [-1, 2, 3, -4]])
BLOCK_4X2 = transpose(BLOCK_2X4)

_BASE_2X3 = SignedGrid.from_rows([[1, 2, -3], [-1, -2, 3]])

_BASE_4X4 = SignedGrid.from_rows(
    [[1, -2, -3, 4], [-1, 2, 3, -4], [5, -6, -7, 8], [-5, 6, 7, -8]]
)
_BASE_4X6 = SignedGrid.from_rows(
    [
        [1, -2, -3, 4, 9, -9],
        [-1, 2, 3, -4, -10, 10],
        [5, -6, -7, 8, -11, 11],
        [-5, 6, 7, -8, 12, -12],
    ]
)
_BASE_6X6 = SignedGrid.from_rows(
    [
        [6, -4, -12, -3, 2, 11],
        [-13, 15, 16, 7, -8, -17],
        [10, -18, -5, -14, 18, 9],
        [-9, 1, 14, 5, -1, -10],
        [17, 8, -16, -7, -15, 13],
        [-11, -2, 3, 12, 4, -6],
    ]
)
_BASE_3X2 = SignedGrid.from_rows([[1, -1], [2, -2], [-3, 3]])
_BASE_3X4 = SignedGrid.from_rows([[1, -1, 2, -2], [5, 4, -5, -4], [-6, -3, 3, 6]])


def _unsupported(m: int, n: int, why: str) -> UnsupportedParameters:
    return UnsupportedParameters(f"no tight SMA({m},{n}): {why}")


def tight_condition(m: int, n: int) -> str | None:
    """Return ``None`` when a tight ``m x n`` array exists, else the violated condition."""
    if m < 1 or n < 1:
        return "dimensions must be positive"
    if m == 1 or n == 1:
        return None if m == n == 1 else "a single row or column must be 1x1"
    if m == 2 and n % 4 not in (0, 3):
        return "two-row arrays need n ≡ 0,3 (mod 4)"
    if n == 2 and m % 4 not in (0, 3):
        return "two-column arrays need m ≡ 0,3 (mod 4)"
    return None


def construct_2xn(n: int) -> SignedGrid:
    if n < 3 or n % 4 not in (0, 3):
        raise _unsupported(2, n, "n ≡ 0,3 (mod 4) required")
    base = _BASE_2X3 if n % 4 == 3 else BLOCK_2X4
    grid = SignedGrid.empty(2, n)
    grid = paste(grid, base)
    width = base.n
    while width < n:
        grid = paste(grid, shift_magnitudes(BLOCK_2X4, width), 0, width)
        width += 4
    return grid


def _tile_columns(grid: SignedGrid, m: int, width: int, first_magnitude: int) -> SignedGrid:
    """Fill columns ``width..width+3`` of an ``m``-row grid with stacked 2x4 blocks."""
    mag = first_magnitude
    for r in range(0, m, 2):
        grid = paste(grid, shift_magnitudes(BLOCK_2X4, mag), r, width)
        mag += 4
    return grid


def _tile_rows(grid: SignedGrid, n: int, height: int, first_magnitude: int) -> SignedGrid:
    mag = first_magnitude
    for c in range(0, n, 2):
        grid = paste(grid, shift_magnitudes(BLOCK_4X2, mag), height, c)
        mag += 4
    return grid


def construct_even_even(m: int, n: int) -> SignedGrid:
    """Shiftable tight array for even ``m, n > 2``: a base block grown four
    columns at a time, then four rows at a time."""
    if m % 2 or n % 2 or m < 4 or n < 4:
        raise _unsupported(m, n, "both sides must be even and greater than 2")
    bases = {
        (0, 0): _BASE_4X4,
        (0, 2): _BASE_4X6,
        (2, 0): transpose(_BASE_4X6),
        (2, 2): _BASE_6X6,
    }
    base = bases[(m % 4, n % 4)]
    h, w = base.m, base.n
    grid = paste(SignedGrid.empty(m, n), base)
    while w < n:
        grid = _tile_columns(grid, h, w, h * w // 2)
        w += 4
    while h < m:
        grid = _tile_rows(grid, n, h, h * n // 2)
        h += 4
    return grid


def construct_3xeven(n: int) -> SignedGrid:
    if n < 2 or n % 2:
        raise _unsupported(3, n, "n must be even")
    if n == 2:
        return _BASE_3X2
    if n == 4:
        return _BASE_3X4
    k = n // 2
    rows: list[list[int]] = [[0] * n for _ in range(3)]
    for j in range(1, n + 1):
        p = (j + 1) // 2
        top = {
            0: -(3 * p - 2) // 2,
            1: (3 * p - 1) // 2,
            2: -(3 * p - 1) // 2,
            3: (3 * p - 2) // 2,
        }[j % 4]
        if j == 1:
            bottom = -3 * k
        elif j == n:
            bottom = 3 * k
        elif j % 2 == 0:
            bottom = -3 * (k - p)
        else:
            bottom = 3 * (k - p + 1)
        rows[0][j - 1] = top
        rows[2][j - 1] = bottom
        rows[1][j - 1] = -(top + bottom)
    return SignedGrid.from_rows(rows)


def construct_5xeven(n: int) -> SignedGrid:
    if n < 4 or n % 2:
        raise _unsupported(5, n, "n must be even and greater than 2")
    three = construct_3xeven(n)
    half = 3 * n // 2
    if n % 4 == 0:
        strip = construct_2xn_tiled(n, half)
        return stack(three, strip)
    rows = three.to_rows()
    rows[1][0], rows[1][1] = rows[1][1], rows[1][0]
    grid = paste(SignedGrid.empty(5, n), SignedGrid.from_rows(rows))
    corner = SignedGrid.from_rows([[-half - 1, half + 1], [half + 2, -half - 2]])
    grid = paste(grid, corner, 3, 0)
    mag = half + 2
    for c in range(2, n, 4):
        grid = paste(grid, shift_magnitudes(BLOCK_2X4, mag), 3, c)
        mag += 4
    return grid


def construct_2xn_tiled(n: int, shift: int) -> SignedGrid:
    """A ``2 x n`` strip (``4 | n``) of 2x4 blocks using magnitudes ``shift+1 .. shift+n``."""
    grid = SignedGrid.empty(2, n)
    for c in range(0, n, 4):
        grid = paste(grid, shift_magnitudes(BLOCK_2X4, shift + c), 0, c)
    return grid


def construct_odd_even(m: int, n: int) -> SignedGrid:
    if m % 2 == 0 or m < 3 or n % 2 or n < 4:
        raise _unsupported(m, n, "need odd m > 1 and even n > 2")
    if m == 3:
        return construct_3xeven(n)
    if m == 5:
        return construct_5xeven(n)
    upper = construct_odd_even(m - 4, n)
    lower = shift_magnitudes(construct_even_even(4, n), (m - 4) * n // 2)
    return stack(upper, lower)


def construct_odd_odd(m: int, n: int) -> SignedGrid:
    """Subtract the midpoint from an ``m x n`` magic rectangle on ``0..mn-1``."""
    if m % 2 == 0 or n % 2 == 0 or m < 3 or n < 3:
        raise _unsupported(m, n, "both sides must be odd and greater than 1")
    from .providers import magic_rectangle

    rect = magic_rectangle(m, n)
    w = (m * n - 1) // 2
    grid = map_values(rect.as_grid(), lambda v: v - w)
    return grid.with_meta(provider_key=rect.key)


def construct_tight(m: int, n: int) -> SignedGrid:
    from .decide import decide_tight

    decision = decide_tight(m, n)
    if not decision.exists:
        raise _unsupported(m, n, decision.reason or "excluded")
    method = decision.method
    if (m, n) == (1, 1):
        grid = SignedGrid.from_rows([[0]])
    elif m == 2:
        grid = construct_2xn(n)
    elif n == 2:
        grid = transpose(construct_2xn(m))
    elif m % 2 == 0 and n % 2 == 0:
        grid = construct_even_even(m, n)
    elif m % 2 and n % 2:
        grid = construct_odd_odd(m, n)
    elif m % 2:
        grid = construct_odd_even(m, n)
    else:
        grid = transpose(construct_odd_even(n, m))
    return grid.with_meta(method=method)

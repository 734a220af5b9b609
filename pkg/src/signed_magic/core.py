"""Domain types, the verifier, and grid algebra shared by every construction.

Grids are immutable sparse maps from 0-based ``(row, col)`` to integers, so an
empty cell is structurally absent rather than encoded by a sentinel (zero is a
legitimate entry whenever ``m*s`` is odd).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence


class SignedMagicError(Exception):
    """Base class for all errors raised by this package."""


class SpecError(SignedMagicError, ValueError):
    """The quadruple (m, n, s, t) does not describe any array shape."""


class ArgumentError(SignedMagicError, ValueError):
    """An operation was called with arguments outside its domain."""


class CompositionError(SignedMagicError, ValueError):
    """Two grids could not be combined (overlapping cells, no room for a band)."""


class UnsupportedParameters(SignedMagicError, ValueError):
    """No construction exists (or none is known) for the requested parameters."""


class ProviderError(SignedMagicError, RuntimeError):
    """An ingredient provider failed to deliver a grid."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


class ProviderTimeout(ProviderError):
    """A provider search exhausted its budget before finding a grid."""


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class ArraySpec:
    m: int
    n: int
    s: int
    t: int

    def __post_init__(self) -> None:
        m, n, s, t = self.m, self.n, self.s, self.t
        if min(m, n) < 1:
            raise SpecError(f"dimensions must be positive, got {m}x{n}")
        if not (1 <= s <= n and 1 <= t <= m):
            raise SpecError(f"fill counts out of range: s={s} (1..{n}), t={t} (1..{m})")
        if m * s != n * t:
            raise SpecError(f"m*s != n*t ({m}*{s} != {n}*{t})")

    @classmethod
    def tight(cls, m: int, n: int) -> "ArraySpec":
        return cls(m, n, n, m)

    @classmethod
    def square(cls, n: int, t: int) -> "ArraySpec":
        return cls(n, n, t, t)

    @classmethod
    def double(cls, m: int, t: int) -> "ArraySpec":
        return cls(m, 2 * m, 2 * t, t)

    @property
    def cells(self) -> int:
        return self.m * self.s

    def transposed(self) -> "ArraySpec":
        return ArraySpec(self.n, self.m, self.t, self.s)


@dataclass(frozen=True)
class SymbolSet:
    parity: str  # "odd" or "even", parity of m*s
    bound: int
    contains_zero: bool

    def values(self) -> list[int]:
        neg = list(range(-self.bound, 0))
        pos = list(range(1, self.bound + 1))
        return neg + ([0] if self.contains_zero else []) + pos

    def __contains__(self, v: int) -> bool:
        return -self.bound <= v <= self.bound and (v != 0 or self.contains_zero)

    def __len__(self) -> int:
        return 2 * self.bound + (1 if self.contains_zero else 0)


def symbol_set(spec: ArraySpec) -> SymbolSet:
    ms = spec.m * spec.s
    if ms % 2:
        return SymbolSet("odd", (ms - 1) // 2, True)
    return SymbolSet("even", ms // 2, False)


@dataclass(frozen=True, eq=False)
class SignedGrid:
    """Sparse ``m x n`` integer grid with 0-based cell addresses.

    ``meta`` carries provenance (construction method, provider catalog key)
    and takes no part in equality.
    """

    m: int
    n: int
    cells: Mapping[tuple[int, int], int]
    meta: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ArgumentError(f"grid dimensions must be positive, got {self.m}x{self.n}")
        cells = dict(self.cells)
        for (r, c), v in cells.items():
            if not (0 <= r < self.m and 0 <= c < self.n):
                raise ArgumentError(f"cell ({r},{c}) outside {self.m}x{self.n} grid")
            if not isinstance(v, int):
                raise ArgumentError(f"cell ({r},{c}) holds non-integer {v!r}")
        object.__setattr__(self, "cells", MappingProxyType(cells))
        object.__setattr__(self, "meta", MappingProxyType(dict(self.meta)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignedGrid):
            return NotImplemented
        return self.m == other.m and self.n == other.n and dict(self.cells) == dict(other.cells)

    def __hash__(self) -> int:
        return hash((self.m, self.n, frozenset(self.cells.items())))

    def __repr__(self) -> str:
        return f"SignedGrid({self.m}x{self.n}, {len(self.cells)} cells)"

    # -- constructors and views

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int | None]], meta: Mapping[str, str] | None = None) -> "SignedGrid":
        if not rows or not rows[0]:
            raise ArgumentError("rows must be non-empty")
        n = len(rows[0])
        if any(len(row) != n for row in rows):
            raise ArgumentError("ragged rows")
        cells = {(r, c): v for r, row in enumerate(rows) for c, v in enumerate(row) if v is not None}
        return cls(len(rows), n, cells, meta or {})

    @classmethod
    def empty(cls, m: int, n: int) -> "SignedGrid":
        return cls(m, n, {})

    def to_rows(self) -> list[list[int | None]]:
        rows: list[list[int | None]] = [[None] * self.n for _ in range(self.m)]
        for (r, c), v in self.cells.items():
            rows[r][c] = v
        return rows

    def get(self, r: int, c: int) -> int | None:
        return self.cells.get((r, c))

    def with_meta(self, **meta: str) -> "SignedGrid":
        merged = dict(self.meta)
        merged.update({k: v for k, v in meta.items() if v is not None})
        return SignedGrid(self.m, self.n, self.cells, merged)

    def values(self) -> list[int]:
        return list(self.cells.values())

    def row_fill(self) -> list[int]:
        counts = [0] * self.m
        for r, _ in self.cells:
            counts[r] += 1
        return counts

    def col_fill(self) -> list[int]:
        counts = [0] * self.n
        for _, c in self.cells:
            counts[c] += 1
        return counts


@dataclass(frozen=True)
class VerificationReport:
    is_valid_sma: bool
    row_sums: list[int]
    col_sums: list[int]
    row_fill_counts: list[int]
    col_fill_counts: list[int]
    symbol_coverage_ok: bool
    is_shiftable: bool
    diagonal_width: int | None

    def failing_rows(self, s: int) -> list[int]:
        """1-based rows whose sum is nonzero or whose fill count differs from ``s``."""
        return [i + 1 for i, (v, k) in enumerate(zip(self.row_sums, self.row_fill_counts)) if v or k != s]

    def failing_cols(self, t: int) -> list[int]:
        return [j + 1 for j, (v, k) in enumerate(zip(self.col_sums, self.col_fill_counts)) if v or k != t]

    def as_dict(self) -> dict:
        return {
            "is_valid_sma": self.is_valid_sma,
            "row_sums": self.row_sums,
            "col_sums": self.col_sums,
            "row_fill_counts": self.row_fill_counts,
            "col_fill_counts": self.col_fill_counts,
            "symbol_coverage_ok": self.symbol_coverage_ok,
            "is_shiftable": self.is_shiftable,
            "diagonal_width": self.diagonal_width,
        }


@dataclass(frozen=True)
class BrokenDiagonal:
    d: int

    @staticmethod
    def of(r: int, c: int, n: int) -> "BrokenDiagonal":
        return BrokenDiagonal((c - r) % n)


# ---------------------------------------------------------------- verifier


def _sign_balanced(grid: SignedGrid) -> bool:
    rows = [0] * grid.m
    cols = [0] * grid.n
    for (r, c), v in grid.cells.items():
        step = (v > 0) - (v < 0)
        if step == 0:
            return False
        rows[r] += step
        cols[c] += step
    return not any(rows) and not any(cols)


def is_shiftable(grid: SignedGrid) -> bool:
    return _sign_balanced(grid)


def verify(grid: SignedGrid, spec: ArraySpec) -> VerificationReport:
    if (grid.m, grid.n) != (spec.m, spec.n):
        raise ArgumentError(f"grid is {grid.m}x{grid.n} but spec is {spec.m}x{spec.n}")
    row_sums = [0] * grid.m
    col_sums = [0] * grid.n
    for (r, c), v in grid.cells.items():
        row_sums[r] += v
        col_sums[c] += v
    row_fill = grid.row_fill()
    col_fill = grid.col_fill()
    entries = sorted(grid.cells.values())
    coverage = entries == symbol_set(spec).values()
    valid = (
        coverage
        and not any(row_sums)
        and not any(col_sums)
        and all(k == spec.s for k in row_fill)
        and all(k == spec.t for k in col_fill)
    )
    return VerificationReport(
        is_valid_sma=valid,
        row_sums=row_sums,
        col_sums=col_sums,
        row_fill_counts=row_fill,
        col_fill_counts=col_fill,
        symbol_coverage_ok=coverage,
        is_shiftable=_sign_balanced(grid),
        diagonal_width=diagonal_width(grid) if grid.m == grid.n else None,
    )


def _occupied_residues(grid: SignedGrid) -> set[int]:
    n = grid.n
    return {(c - r) % n for r, c in grid.cells}


def diagonal_band(grid: SignedGrid) -> tuple[int, int]:
    """Return ``(start, width)`` of the shortest cyclic window of residues
    ``(col - row) mod n`` covering every filled cell; ties go to the smallest start."""
    if grid.m != grid.n:
        raise ArgumentError("diagonal width is only defined for square grids")
    n = grid.n
    occupied = _occupied_residues(grid)
    if not occupied:
        return (0, 0)
    best = (0, n)
    for start in sorted(occupied):
        # the window must end at the last occupied residue before wrapping back to start
        width = 1 + max((d - start) % n for d in occupied)
        if width < best[1]:
            best = (start, width)
    return best


def diagonal_width(grid: SignedGrid) -> int:
    return diagonal_band(grid)[1]


# ---------------------------------------------------------------- algebra


def negate(grid: SignedGrid) -> SignedGrid:
    return SignedGrid(grid.m, grid.n, {k: -v for k, v in grid.cells.items()}, grid.meta)


def transpose(grid: SignedGrid) -> SignedGrid:
    return SignedGrid(grid.n, grid.m, {(c, r): v for (r, c), v in grid.cells.items()}, grid.meta)


def shift_magnitudes(grid: SignedGrid, k: int) -> SignedGrid:
    if k < 0:
        raise ArgumentError(f"shift must be non-negative, got {k}")
    if any(v == 0 for v in grid.cells.values()):
        raise ArgumentError("cannot shift magnitudes of a grid containing 0")
    return SignedGrid(
        grid.m, grid.n, {key: v + k if v > 0 else v - k for key, v in grid.cells.items()}, grid.meta
    )


def permute_columns_cyclic(grid: SignedGrid, c: int) -> SignedGrid:
    """Move column ``j`` to column ``(j + c) mod n``."""
    n = grid.n
    return SignedGrid(grid.m, n, {(r, (j + c) % n): v for (r, j), v in grid.cells.items()}, grid.meta)


def paste(dest: SignedGrid, src: SignedGrid, row_offset: int = 0, col_offset: int = 0) -> SignedGrid:
    cells = dict(dest.cells)
    for (r, c), v in src.cells.items():
        key = (r + row_offset, c + col_offset)
        if not (0 <= key[0] < dest.m and 0 <= key[1] < dest.n):
            raise CompositionError(f"pasted cell {key} falls outside {dest.m}x{dest.n}")
        if key in cells:
            raise CompositionError(f"paste collision at cell {key}")
        cells[key] = v
    return SignedGrid(dest.m, dest.n, cells, dest.meta)


def map_values(grid: SignedGrid, fn) -> SignedGrid:
    return SignedGrid(grid.m, grid.n, {k: fn(v) for k, v in grid.cells.items()}, grid.meta)


def stack(*grids: SignedGrid) -> SignedGrid:
    """Place grids of equal width one under another."""
    n = grids[0].n
    if any(g.n != n for g in grids):
        raise CompositionError("stacked grids must share a width")
    out = SignedGrid.empty(sum(g.m for g in grids), n)
    row = 0
    for g in grids:
        out = paste(out, g, row, 0)
        row += g.m
    return out


def side_by_side(*grids: SignedGrid) -> SignedGrid:
    m = grids[0].m
    if any(g.m != m for g in grids):
        raise CompositionError("juxtaposed grids must share a height")
    out = SignedGrid.empty(m, sum(g.n for g in grids))
    col = 0
    for g in grids:
        out = paste(out, g, 0, col)
        col += g.n
    return out


def render_rows(rows: Iterable[Sequence[int | None]]) -> str:
    rows = [list(r) for r in rows]
    width = max((len(str(v)) for row in rows for v in row if v is not None), default=1)
    return "\n".join(" ".join(("." if v is None else str(v)).rjust(width) for v in row) for row in rows)

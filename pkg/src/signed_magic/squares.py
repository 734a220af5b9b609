"""Signed magic squares SMS(n;t): ``t`` filled cells in every row and column.

Indices in the formulas below are 1-based to keep them readable; grids are
built through :func:`_grid1`, which converts to the 0-based cell map.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    CompositionError,
    SignedGrid,
    UnsupportedParameters,
    diagonal_band,
    paste,
    permute_columns_cyclic,
    shift_magnitudes,
    transpose,
)


def _grid1(n: int, cells: dict[tuple[int, int], int]) -> SignedGrid:
    """Square grid from a 1-based cell map; indices are reduced mod ``n``."""
    out: dict[tuple[int, int], int] = {}
    for (r, c), v in cells.items():
        key = ((r - 1) % n, (c - 1) % n)
        if key in out:
            raise CompositionError(f"two entries for cell {key[0] + 1},{key[1] + 1}")
        out[key] = v
    return SignedGrid(n, n, out)


def _bad(n: int, t: int, why: str) -> UnsupportedParameters:
    return UnsupportedParameters(f"SMS({n};{t}): {why}")


# ====================================================================
# odd n, odd t: orthogonal partitions of [-(nt-1)/2, (nt-1)/2]
# ====================================================================


@dataclass
class PartitionSystem:
    """Blocks ``D_i`` of ``n`` consecutive integers, column classes ``C_c`` and
    row classes ``R_r``; every class meets every block exactly once.

    ``placement[i][j]`` is the (1-based) column class receiving the ``j``-th
    smallest element of block ``i``; ``offsets[i]`` is the value just below
    block ``i`` so that its ``j``-th element is ``offsets[i] + j``.
    """

    n: int
    t: int
    offsets: list[int]
    placement: list[list[int]]
    column_classes: list[list[int]] = field(default_factory=list)
    row_classes: list[list[int]] = field(default_factory=list)
    breaks: list[list[int]] = field(default_factory=list)

    # residue bookkeeping, all 1-based in i and c
    @property
    def x(self) -> list[int]:
        n = self.n
        return [(2 * ((3 * n - 1) // 2 - (c - 1)) - 1) % n for c in range(1, n + 1)]

    def slope(self, i: int) -> int:
        n, t = self.n, self.t
        if i in (1, t):
            return 1
        return (n - 1) // 2 if i % 2 == 0 else (n + 1) // 2

    def intercept(self, i: int) -> int:
        n, t = self.n, self.t
        if i == t:
            return (n - 1) // 2
        return (n + 1) // 2 if i % 2 == 0 else n

    def inverse_slope(self, i: int) -> int:
        if i in (1, self.t):
            return 1
        return -2 if i % 2 == 0 else 2

    def inverse_intercept(self, i: int) -> int:
        if i == self.t:
            return (self.n + 1) // 2
        return 1 if i % 2 == 0 else 0

    def shift(self, i: int) -> int:
        return (self.n - 1) // 2 * (i - 1)

    def element(self, i: int, j: int) -> int:
        return self.offsets[i - 1] + j

    def position_in_block(self, i: int, c: int) -> int:
        """The ``j`` with ``placement[i][j] == c`` (1-based ``i``, ``c``; ``c`` taken mod ``n``)."""
        c = (c - 1) % self.n + 1
        return self.placement[i - 1].index(c) + 1

    def blocks(self) -> list[list[int]]:
        return [[self.element(i, j) for j in range(1, self.n + 1)] for i in range(1, self.t + 1)]


def _system_t3(n: int) -> PartitionSystem:
    half = (3 * n - 1) // 2
    low = (n - 1) // 2
    sets = []
    for c in range(1, n + 1):
        x = (2 * (half - (c - 1)) - 1) % n
        sets.append([(c - 1) - half, -low + x, -(c - 1) + half - x + low])
    offsets = [-half - 1, -half - 1 + n, -half - 1 + 2 * n]
    placement = [[0] * n for _ in range(3)]
    for c, members in enumerate(sets, start=1):
        for v in members:
            i = (v - offsets[0] - 1) // n
            j = v - offsets[i]
            placement[i][j - 1] = c
    return PartitionSystem(n, 3, offsets, placement)


def odd_partition_columns(n: int, t: int) -> PartitionSystem:
    """Column classes for odd ``n >= t >= 3``, grown from ``t = 3`` two blocks at a time."""
    if n % 2 == 0 or t % 2 == 0 or not (3 <= t <= n):
        raise _bad(n, t, "needs odd n >= t >= 3")
    system = _system_t3(n)
    for cur in range(3, t, 2):
        offsets = [d - n for d in system.offsets[:-1]]
        last = system.offsets[-1] + n
        low = (n * (cur - 4) + 1) // 2  # first element of the gap B
        up = (n + 1) // 2
        down = (n - 1) // 2
        first = [(up + up * q - 1) % n + 1 for q in range(n)]  # starts at (n+1)/2, steps (n+1)/2
        second = [(n + down * q - 1) % n + 1 for q in range(n)]  # starts at n, steps (n-1)/2
        offsets += [low - 1, low - 1 + n, last]
        placement = system.placement[:-1] + [first, second, system.placement[-1]]
        system = PartitionSystem(n, cur + 2, offsets, placement)
        _fill_columns(system)
        if any(sum(cls) for cls in system.column_classes):
            raise CompositionError(f"column classes fail to sum to zero at n={n}, t={cur + 2}")
    _fill_columns(system)
    return system


def _fill_columns(system: PartitionSystem) -> None:
    classes: list[list[int]] = [[] for _ in range(system.n)]
    for i in range(1, system.t + 1):
        for j, c in enumerate(system.placement[i - 1], start=1):
            classes[c - 1].append(system.element(i, j))
    system.column_classes = classes


def odd_partition_rows(system: PartitionSystem) -> PartitionSystem:
    """``R_r`` takes from block ``i`` its element in class ``C_c``, ``c ≡ r + s(i)``."""
    n, t = system.n, system.t
    rows = []
    for r in range(1, n + 1):
        rows.append([system.element(i, system.position_in_block(i, r + system.shift(i))) for i in range(1, t + 1)])
    system.row_classes = rows
    breaks = []
    for i in range(1, t + 1):
        jp = [system.position_in_block(i, r + system.shift(i)) for r in range(1, n + 2)]
        breaks.append([jp[r] - jp[r - 1] - system.inverse_slope(i) for r in range(1, n + 1)])
    system.breaks = breaks
    return system


def sms_odd_odd(n: int, t: int) -> SignedGrid:
    system = odd_partition_rows(odd_partition_columns(n, t))
    col_of = {v: c for c, cls in enumerate(system.column_classes, start=1) for v in cls}
    cells = {}
    for r, cls in enumerate(system.row_classes, start=1):
        for v in cls:
            cells[(r, col_of[v])] = v
    return _grid1(n, cells)


# ====================================================================
# bands of diagonals and the +4 step
# ====================================================================


def sms4_diagonal(n: int) -> SignedGrid:
    """Shiftable SMS(n;4) on the diagonals ``j - i ≡ 0..3``."""
    if n < 4:
        raise _bad(n, 4, "needs n >= 4")
    cells: dict[tuple[int, int], int] = {}
    for i in range(1, n):
        cells[(i, i)] = i
    cells[(n, n)] = -n
    for j in range(2, n):
        cells[(j - 1, j)] = -(j - 1)
    cells[(n - 1, n)] = n + 1
    for j in range(3, n + 1):
        cells[(j - 2, j)] = 2 * n - (j - 2)
    for j in range(4, n + 1):
        cells[(j - 3, j)] = -(2 * n - (j - 3))
    cells[(n - 2, 1)] = -(n + 2)
    cells[(n - 1, 1)] = -(n - 1)
    cells[(n, 1)] = 2 * n
    cells[(n - 1, 2)] = -(n + 1)
    cells[(n, 2)] = n
    cells[(n, 3)] = -2 * n
    return _grid1(n, cells)


def add_four(grid: SignedGrid) -> SignedGrid:
    """Fill the four empty diagonals just past the band of ``grid`` with a
    shifted copy of :func:`sms4_diagonal`."""
    n = grid.n
    start, width = diagonal_band(grid)
    if width > n - 4:
        raise CompositionError(f"band of width {width} leaves fewer than four empty diagonals in {n}x{n}")
    fill = grid.row_fill()
    t = fill[0]
    if any(k != t for k in fill) or any(v == 0 for v in grid.values()):
        raise CompositionError("add_four needs a zero-free grid with equal row fill")
    if (t * n) % 2:
        raise CompositionError("add_four needs t or n even")
    band = shift_magnitudes(sms4_diagonal(n), t * n // 2)
    return paste(grid, permute_columns_cyclic(band, start + width))


def sms6_odd(n: int) -> SignedGrid:
    """Shiftable 6-diagonal SMS(n;6) for odd ``n >= 7`` from a tight 3 x n array."""
    if n % 2 == 0 or n < 7:
        raise _bad(n, 6, "needs odd n >= 7")
    from .tight import construct_tight

    base = construct_tight(3, n)
    lift = (3 * n + 1) // 2
    cells = {}
    for (r, c), v in base.cells.items():
        i, j = r + 1, c + 1
        row = (2 * i - 1 + j - 1 - 1) % n + 1
        cells[(row, j)] = v + lift
        cells[(row, j + 1)] = -(v + lift)
    return _grid1(n, cells).with_meta(provider_key=base.meta.get("provider_key"))


def sms_even_t_odd_n(n: int, t: int) -> SignedGrid:
    if n % 2 == 0 or t % 2 or not (3 < t < n):
        raise _bad(n, t, "needs odd n > even t > 3")
    if t == 4:
        return sms4_diagonal(n)
    if t == 6:
        return sms6_odd(n)
    return add_four(sms_even_t_odd_n(n, t - 4))


# ====================================================================
# even n, even t
# ====================================================================

HEFFTER_CEILING = 60  # largest tight Heffter array (cells) searched on the square path


def sms_via_heffter(n: int, t: int, heffter: SignedGrid | None = None, layout: str = "band") -> SignedGrid:
    """SMS(n;t) from a tight ``n/2 x t`` integer Heffter array: each Heffter row
    and its negation become two rows of the square.

    ``layout="band"`` puts Heffter row ``i`` in columns ``2i-1 .. 2i+t-2``
    (mod ``n``); ``layout="halves"`` sends the left half of each Heffter row
    to columns ``1..n/2`` and the right half to ``n/2+1..n`` by the cyclic
    congruence on ``i - j``.
    """
    if n % 2 or t % 2 or t > n or t < 4 or n < 6:
        raise _bad(n, t, "needs even 6 <= n, even 4 <= t <= n")
    h, w = n // 2, t
    key = None
    if heffter is None:
        from .providers import tight_heffter

        found = tight_heffter(h, w)
        heffter, key = found.grid, found.key
    if (heffter.m, heffter.n) != (h, w):
        raise CompositionError(f"need a {h}x{w} Heffter array, got {heffter.m}x{heffter.n}")
    cells = {}
    for (r, c), v in heffter.cells.items():
        i, j = r + 1, c + 1
        if layout == "band":
            col = 2 * i - 1 + j - 1
        elif layout == "halves":
            if j <= t // 2:
                col = (i - j) % h + 1
            else:
                col = (i - j + t // 2 + h) % h + 1 + h
        else:
            raise ValueError(f"unknown layout {layout!r}")
        cells[(2 * i - 1, col)] = v
        cells[(2 * i, col)] = -v
    return _grid1(n, cells).with_meta(provider_key=key)


@dataclass
class PairedPartition:
    n: int
    classes: dict[int, list[int]]  # label i -> (P_i1, P_i2, P_i3)
    pairs: list[tuple[int, int]]  # (upper, lower) labels per column pair
    kind: dict[int, int]  # label -> 1 (first class) or 2 (second class)

    def sums(self) -> dict[int, int]:
        return {i: sum(v) for i, v in self.classes.items()}


def paired_partition(n: int, pairing: list[tuple[int, int]] | None = None) -> PairedPartition:
    """Triples of ``[1, 3n]`` labelled so that ``i`` lies in class ``i``, with a pairing."""
    if n % 4 != 2 or n < 10:
        raise _bad(n, 6, "needs n ≡ 2 (mod 4), n >= 10")
    m = n - 1
    base = _system_t3(m)
    _fill_columns(base)
    lift = (3 * m - 1) // 2 + 1

    def p(x: int) -> int:
        return x + 1 if x < (3 * n - 2) // 2 else x + 2

    classes: dict[int, list[int]] = {1: [1, 3 * n // 2, 3 * n]}
    for cls in base.column_classes:
        members = [p(v + lift) for v in cls]
        label = next(v for v in members if v <= n)
        classes[label] = members
    first_sum = (9 * n + 2) // 2
    kind = {i: 1 if sum(v) == first_sum else 2 for i, v in classes.items()}
    forced = {1: (2, 1), 2: (2, 2), n: (1, n)}
    for label, members in classes.items():
        rest = sorted(members)
        slots: list[int | None] = [None, None, None]
        if label == 1:
            slots[1] = 1
        elif label == 2:
            slots[1] = 2
        elif label == n:
            slots[0], slots[1] = n, n + 1
        for v in slots:
            if v is not None:
                rest.remove(v)
        classes[label] = [v if v is not None else rest.pop(0) for v in slots]
    if pairing is None:
        pairing = _default_pairing(n, kind)
    return PairedPartition(n, dict(sorted(classes.items())), list(pairing), kind)


def _default_pairing(n: int, kind: dict[int, int]) -> list[tuple[int, int]]:
    free = sorted(set(kind) - {1, 2, n})
    partner = next(i for i in free if kind[i] == kind[n])
    free.remove(partner)
    pairs = [(2, 1), (n, partner)]
    for k in (1, 2):
        same = [i for i in free if kind[i] == k]
        pairs += [(same[q + 1], same[q]) for q in range(0, len(same), 2)]
    return pairs[:2] + sorted(pairs[2:], key=lambda pr: min(pr))


def sms6_2mod4(n: int, pairing: list[tuple[int, int]] | None = None) -> SignedGrid:
    """Shiftable 7-diagonal SMS(n;6) for ``n ≡ 2 (mod 4)``, ``n >= 10``."""
    part = paired_partition(n, pairing)
    sums = part.sums()
    if part.pairs[0] != (2, 1) or part.pairs[1][0] != n:
        raise CompositionError("pairing must start with (P2, P1) then (Pn, ·)")
    for upper, lower in part.pairs[1:]:
        if sums[upper] != sums[lower]:
            raise CompositionError(f"paired classes P{upper}, P{lower} have different sums")
    a: dict[tuple[int, int], int] = {}
    for j, (upper, lower) in enumerate(part.pairs, start=1):
        for k in range(1, 4):
            top = part.classes[upper][k - 1]
            bottom = part.classes[lower][k - 1]
            a[(2 * j + 2 * k - 3, 2 * j - 1)] = top
            a[(2 * j + 2 * k - 3, 2 * j)] = -top
            a[(2 * j + 2 * k - 2, 2 * j - 1)] = -bottom
            a[(2 * j + 2 * k - 2, 2 * j)] = bottom
    a = {((r - 1) % n + 1, (c - 1) % n + 1): v for (r, c), v in a.items()}
    swapped = dict(a)
    for dst, src in (((3, 1), (4, 2)), ((4, 2), (3, 1)), ((3, 3), (5, 3)), ((4, 3), (3, 3)),
                     ((5, 3), (4, 3)), ((4, 4), (5, 4)), ((5, 4), (4, 4))):
        swapped[dst] = a[src]
    return _grid1(n, swapped)


def even_even_method(n: int, t: int) -> str:
    if t == n:
        return "square.tight"
    if t % 4 == 0 or n % 4 == 0:
        if heffter_path_available(n, t):
            return "square.even_even.heffter"
        return "square.even_even.band"
    return "square.even_even.band7"


def heffter_path_available(n: int, t: int) -> bool:
    """Heffter path is used on a catalog hit or when the search stays small;
    otherwise ``t ≡ 0 (mod 4)`` falls back to the shiftable band."""
    from .providers import catalog_get, key_tight_heffter

    if t % 4 != 0:
        return True
    h = n // 2
    if (h * t) <= HEFFTER_CEILING:
        return True
    return catalog_get(key_tight_heffter(h, t)) is not None or catalog_get(key_tight_heffter(t, h)) is not None


def sms_band_multiple_of_four(n: int, t: int) -> SignedGrid:
    """Diagonal shiftable SMS(n;t) for ``t ≡ 0 (mod 4)``, ``t < n``."""
    grid = sms4_diagonal(n)
    for _ in range(4, t, 4):
        grid = add_four(grid)
    return grid


def sms_even_even(n: int, t: int) -> SignedGrid:
    if n % 2 or t % 2 or not (3 < t <= n):
        raise _bad(n, t, "needs even n >= t > 3")
    method = even_even_method(n, t)
    if method == "square.tight":
        from .tight import construct_even_even

        return construct_even_even(n, n)
    if method == "square.even_even.heffter":
        return sms_via_heffter(n, t)
    if method == "square.even_even.band":
        return sms_band_multiple_of_four(n, t)
    if t == 6:
        return sms6_2mod4(n)
    return add_four(sms_even_even(n, t - 4))


# ====================================================================
# even n, odd t
# ====================================================================


def sms3_even(n: int) -> SignedGrid:
    """SMS(n;3): columns are the columns of a tight 3 x n array, rows their negations."""
    if n % 2 or n < 4:
        raise _bad(n, 3, "needs even n >= 4")
    from .tight import construct_3xeven

    base = construct_3xeven(n)
    col_of = {v: c for (r, c), v in base.cells.items()}
    cells = {}
    for (_, c), v in base.cells.items():
        # -v sits in row c of the square and in the column that holds -v in the base
        cells[(c + 1, col_of[-v] + 1)] = -v
    return _grid1(n, cells)


@dataclass
class DiagonalSequences:
    """Sequences indexed ``1..n`` whose entries fill consecutive diagonals."""

    n: int
    t: int
    seqs: list[list[int]]  # seqs[q][i-1]

    def at(self, q: int, i: int) -> int:
        return self.seqs[q][(i - 1) % self.n]

    def values(self) -> list[int]:
        return [v for s in self.seqs for v in s]

    def window_sums(self) -> tuple[list[int], list[int]]:
        """Column sums ``S_i`` and row sums ``S'_i`` of the band layout."""
        n, t = self.n, self.t
        h = t // 2
        S, Sp = [], []
        for i in range(1, n + 1):
            # sequence q (0-based) lies on diagonal h - q: upper ones offset right, lower ones down
            S.append(sum(self.at(q, i - (h - q)) if q < h else self.at(q, i) for q in range(t)))
            Sp.append(sum(self.at(q, i) if q <= h else self.at(q, i - (q - h)) for q in range(t)))
        return S, Sp

    def grid(self) -> SignedGrid:
        """Place sequence ``q`` on diagonal ``h - q``: above the main diagonal
        rows carry the index, below it columns do."""
        n, t = self.n, self.t
        h = t // 2
        cells = {}
        for q in range(t):
            d = h - q
            for i in range(1, n + 1):
                v = self.at(q, i)
                if d >= 0:
                    cells[(i, i + d)] = v
                else:
                    cells[(i - d, i)] = v
        return _grid1(n, cells)


def sequences3(n: int) -> DiagonalSequences:
    if n % 4 or n < 4:
        raise _bad(n, 3, "needs n ≡ 0 (mod 4)")
    k = n // 4
    a, b = [], []
    for i in range(1, n + 1):
        if i % 2:
            a.append(-2 - 3 * k - 3 * (i - 1) // 2 if i < 2 * k else -2 + 9 * k - 3 * (i - 1) // 2)
        else:
            a.append(-2 + 3 * k - 3 * i // 2 if i < 4 * k else -2 + 3 * k)
        if i <= 2 * k:
            b.append(3 * i)
        elif i < 4 * k:
            b.append(-12 * k + 3 * i)
        else:
            b.append(-6 * k)
    c = [v + 1 for v in a]
    return DiagonalSequences(n, 3, [a, b, c])


def sms3_diag(n: int) -> SignedGrid:
    """Diagonal SMS(n;3) for ``n ≡ 0 (mod 4)``: row ``i`` holds ``c_{i-1}``,
    ``b_i``, ``a_i`` in columns ``i-1, i, i+1``."""
    return sequences3(n).grid()


def sequences5(n: int) -> DiagonalSequences:
    if n % 4 or n < 8:
        raise _bad(n, 5, "needs n ≡ 0 (mod 4), n >= 8")
    k = n // 4
    a, b, c = [], [], []
    for i in range(1, n + 1):
        j, r = divmod(i - 1, 4)
        r += 1
        if i == 4 * k - 3:
            a.append(-8)
        elif i == 4 * k - 2:
            a.append(-3)
        elif i == 4 * k:
            a.append(10 * k - 8)
        elif r == 1:
            a.append(-10 * j - 18)
        elif r == 2:
            a.append(-10 * j - 13)
        elif r == 3:
            a.append(10 * k - 10 * j - 3)
        else:
            a.append(10 * k - 10 * j - 18)
        if i == 4 * k - 3:
            b.append(-5 * k + 6)
        elif i == 4 * k - 1:
            b.append(-5 * k + 1)
        elif i % 2:
            jj = (i - 1) // 2
            b.append(-5 * k - 5 * jj - 4 if jj < k else 15 * k - 5 * jj - 4)
        else:
            jj = (i - 2) // 2
            b.append(-5 * k + 5 * jj + 11)
        if i <= 2 * k:
            c.append(5 * i)
        elif i < 4 * k:
            c.append(-20 * k + 5 * i)
        else:
            c.append(-10 * k)
    d = [v + 3 for v in b]
    e = [v + 1 for v in a]
    return DiagonalSequences(n, 5, [a, b, c, d, e])


def sms5_diag_0mod4(n: int) -> SignedGrid:
    return sequences5(n).grid()


def sms5_diag_2mod4(n: int) -> SignedGrid:
    """Diagonal SMS(n;5) for ``n ≡ 2 (mod 4)`` from a direct cell formula."""
    if n % 4 != 2 or n < 6:
        raise _bad(n, 5, "needs n ≡ 2 (mod 4), n >= 6")
    k = (n - 2) // 4
    cells: dict[tuple[int, int], int] = {}
    for i in range(1, n + 1):
        if i <= n // 2:
            main = 5 * i
        elif i < n:
            main = -5 * (n - i)
        else:
            main = -5 * n // 2
        cells[(i, i)] = main
        cells[(i, i + 2)] = -3 - 5 * (i - 1) if i <= n // 2 else 5 * (n - i) + 2
        if i == n:
            up = (5 * n - 26) // 4
        elif i % 2:
            up = -9 - 5 * k + 5 * (i - 1) // 2
        elif i < 2 * k + 4:
            up = 5 * k + 1 + 5 * (i - 2) // 2
        else:
            up = 5 * k + 1 + 5 * (i - 2) // 2 - 5 * n
        cells[(i, i + 1)] = up

    cells = {((r - 1) % n + 1, (c - 1) % n + 1): v for (r, c), v in cells.items()}

    def at(r: int, c: int) -> int:
        return cells[((r - 1) % n + 1, (c - 1) % n + 1)]

    for i in range(1, n + 1):
        cells[(i, i - 1)] = at(i - 1, i) + 3
        cells[(i, i - 2)] = at(i - 2, i) + 1
    return _grid1(n, cells)


def sequences7(n: int) -> DiagonalSequences:
    if n % 4 != 2 or n < 10:
        raise _bad(n, 7, "needs n ≡ 2 (mod 4), n >= 10")
    k = (n - 2) // 4
    a, b, c, d = [], [], [], []
    for i in range(1, n + 1):
        a.append(-7 * i + 3 if i <= 2 * k + 1 else 28 * k - 7 * i + 17)
        b.append(7 * i - 12 if i <= 2 * k + 2 else -28 * k + 7 * i - 26)
        if i == 4 * k + 2:
            c.append(7 * k + 1)
        elif i % 2 == 0:
            c.append(7 * k - 7 * (i // 2) + 1)
        elif i <= 2 * k + 1:
            c.append(-7 * k - 7 * ((i - 1) // 2) - 6)
        else:
            c.append(21 * k - 7 * ((i - 1) // 2) + 8)
        if i <= 2 * k + 1:
            d.append(7 * i)
        elif i < 4 * k + 2:
            d.append(-28 * k + 7 * i - 14)
        else:
            d.append(-14 * k - 7)
    e = [v + 5 for v in c]
    f = [v + 3 for v in b]
    g = [v + 1 for v in a]
    return DiagonalSequences(n, 7, [a, b, c, d, e, f, g])


def sms7_diag_2mod4(n: int) -> SignedGrid:
    return sequences7(n).grid()


def sms_odd_t_even_n(n: int, t: int) -> SignedGrid:
    if n % 2 or t % 2 == 0 or not (2 < t < n):
        raise _bad(n, t, "needs even n > odd t > 2")
    if t == 3:
        return sms3_diag(n) if n % 4 == 0 else sms3_even(n)
    if t == 5:
        return sms5_diag_0mod4(n) if n % 4 == 0 else sms5_diag_2mod4(n)
    if t == 7 and n % 4 == 2:
        return sms7_diag_2mod4(n)
    return add_four(sms_odd_t_even_n(n, t - 4))


# ====================================================================
# dispatcher
# ====================================================================


def construct_sms(n: int, t: int) -> SignedGrid:
    from .decide import decide_square

    decision = decide_square(n, t)
    if not decision.exists:
        raise _bad(n, t, decision.reason or "excluded")
    method = decision.method or ""
    if method == "square.trivial":
        grid = SignedGrid.from_rows([[0]])
    elif method == "square.tight":
        from .tight import construct_tight

        grid = construct_tight(n, n)
    elif method == "square.odd_odd":
        grid = sms_odd_odd(n, t)
    elif method == "square.even_in_odd":
        grid = sms_even_t_odd_n(n, t)
    elif method == "square.odd_in_even":
        grid = sms_odd_t_even_n(n, t)
    else:
        grid = sms_even_even(n, t)
    return grid.with_meta(method=method)


__all__ = [
    "DiagonalSequences",
    "PairedPartition",
    "PartitionSystem",
    "add_four",
    "construct_sms",
    "odd_partition_columns",
    "odd_partition_rows",
    "paired_partition",
    "sms3_diag",
    "sms3_even",
    "sms4_diagonal",
    "sms5_diag_0mod4",
    "sms5_diag_2mod4",
    "sms6_2mod4",
    "sms6_odd",
    "sms7_diag_2mod4",
    "sms_band_multiple_of_four",
    "sms_even_even",
    "sms_even_t_odd_n",
    "sms_odd_odd",
    "sms_odd_t_even_n",
    "sms_via_heffter",
    "transpose",
]

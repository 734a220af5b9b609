"""Ingredient providers: magic rectangles and integer Heffter arrays.

Each provider consults the catalog first (builtin seeds, then files under
``$SMA_CATALOG_DIR``), then a direct construction where one is known, then a
canonical backtracking search with a node budget, and finally a CP-SAT model
with a deterministic time budget. Every grid is verified before it is returned.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterator

from .core import (
    ArgumentError,
    CompositionError,
    ProviderTimeout,
    SignedGrid,
    SignedMagicError,
    UnsupportedParameters,
    paste,
    permute_columns_cyclic,
    shift_magnitudes,
    transpose,
)


class CatalogIntegrityError(SignedMagicError):
    def __init__(self, key: str, detail: str):
        super().__init__(f"catalog entry {key!r} is corrupt: {detail}")
        self.key = key


@dataclass(frozen=True)
class SearchLimits:
    max_filled_cells: int = 14
    time_budget: float = 60.0
    node_budget: int = 200_000

    def __post_init__(self) -> None:
        if self.max_filled_cells <= 0 or self.time_budget <= 0 or self.node_budget <= 0:
            raise ArgumentError("search limits must be positive")


DEFAULT_LIMITS = SearchLimits()


# ---------------------------------------------------------------- families


@dataclass(frozen=True)
class MagicRectangle:
    m: int
    n: int
    rows: tuple[tuple[int, ...], ...]
    key: str = ""
    provenance: str = "constructed"

    @property
    def row_sum(self) -> int:
        return self.n * (self.m * self.n - 1) // 2

    @property
    def col_sum(self) -> int:
        return self.m * (self.m * self.n - 1) // 2

    @property
    def w(self) -> int:
        return (self.m * self.n - 1) // 2

    def as_grid(self) -> SignedGrid:
        return SignedGrid.from_rows([list(r) for r in self.rows])

    def is_valid(self) -> bool:
        return is_magic_rectangle(self.rows)


def is_magic_rectangle(rows) -> bool:
    m, n = len(rows), len(rows[0])
    if sorted(v for r in rows for v in r) != list(range(m * n)):
        return False
    rs = n * (m * n - 1) // 2
    cs = m * (m * n - 1) // 2
    return all(sum(r) == rs for r in rows) and all(sum(r[j] for r in rows) == cs for j in range(n))


@dataclass(frozen=True)
class HeffterGrid:
    """Integer Heffter array: ``s`` cells per row, ``t`` per column, magnitudes
    ``1..m*s`` each used once with some sign, zero integer row and column sums."""

    grid: SignedGrid
    s: int
    t: int
    key: str = ""
    provenance: str = "searched"

    @property
    def m(self) -> int:
        return self.grid.m

    @property
    def n(self) -> int:
        return self.grid.n

    def is_valid(self) -> bool:
        return is_heffter(self.grid, self.s, self.t)


def is_heffter(grid: SignedGrid, s: int, t: int, shiftable: bool = False) -> bool:
    if any(k != s for k in grid.row_fill()) or any(k != t for k in grid.col_fill()):
        return False
    mags = sorted(abs(v) for v in grid.values())
    if mags != list(range(1, grid.m * s + 1)):
        return False
    rows = [0] * grid.m
    cols = [0] * grid.n
    rbal = [0] * grid.m
    cbal = [0] * grid.n
    for (r, c), v in grid.cells.items():
        rows[r] += v
        cols[c] += v
        rbal[r] += 1 if v > 0 else -1
        cbal[c] += 1 if v > 0 else -1
    if any(rows) or any(cols):
        return False
    return not shiftable or (not any(rbal) and not any(cbal))


# ---------------------------------------------------------------- catalog


def catalog_dir() -> Path:
    return Path(os.environ.get("SMA_CATALOG_DIR", "./catalog"))


def key_magic_rectangle(m: int, n: int) -> str:
    return f"magic_rectangle-{m}x{n}"


def key_tight_heffter(m: int, n: int) -> str:
    return f"tight_heffter-{m}x{n}"


def key_square_heffter(n: int, k: int) -> str:
    return f"square_heffter-{n}-{k}"


def key_shiftable_band(n: int) -> str:
    return f"shiftable_heffter_band-{n}-4"


def key_shiftable_tight_heffter(m: int, n: int) -> str:
    return f"shiftable_tight_heffter-{m}x{n}"


def grid_digest(grid: SignedGrid) -> str:
    payload = json.dumps([grid.m, grid.n, sorted([r, c, v] for (r, c), v in grid.cells.items())])
    return hashlib.sha256(payload.encode()).hexdigest()


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    grid: SignedGrid
    s: int
    t: int
    provenance: str = "searched"
    digest: str = field(default="")

    def __post_init__(self) -> None:
        if not self.digest:
            object.__setattr__(self, "digest", grid_digest(self.grid))

    @property
    def family(self) -> str:
        return self.key.split("-", 1)[0]

    def to_json(self) -> dict:
        from .cli import grid_to_json

        doc = grid_to_json(self.grid, self.s, self.t)
        doc["meta"].update(
            {"provider_key": self.key, "family": self.family, "provenance": self.provenance, "digest": self.digest}
        )
        return doc


def entry_is_valid(entry: CatalogEntry) -> bool:
    family = entry.family
    g = entry.grid
    try:
        _, params = entry.key.split("-", 1)
    except ValueError:
        return False
    if family == "magic_rectangle":
        rows = g.to_rows()
        if any(v is None for r in rows for v in r):
            return False
        return params == f"{g.m}x{g.n}" and is_magic_rectangle(rows)
    if family == "tight_heffter":
        return params == f"{g.m}x{g.n}" and entry.s == g.n and entry.t == g.m and is_heffter(g, g.n, g.m)
    if family == "square_heffter":
        return params == f"{g.n}-{entry.s}" and g.m == g.n and entry.s == entry.t and is_heffter(g, entry.s, entry.t)
    if family == "shiftable_tight_heffter":
        return params == f"{g.m}x{g.n}" and entry.s == g.n and entry.t == g.m and is_heffter(g, g.n, g.m, shiftable=True)
    if family == "shiftable_heffter_band":
        return params == f"{g.n}-4" and is_heffter(g, 4, 4, shiftable=True)
    return False


def _builtin_entries() -> dict[str, CatalogEntry]:
    mr37 = SignedGrid.from_rows(
        [[0, 19, 8, 13, 4, 9, 17], [18, 10, 2, 14, 15, 5, 6], [12, 1, 20, 3, 11, 16, 7]]
    )
    th34 = SignedGrid.from_rows([[1, 2, 3, -6], [8, -12, -7, 11], [-9, 10, 4, -5]])
    sh43 = SignedGrid.from_rows(
        [[4, 8, None, -12], [-9, 3, 6, None], [None, -11, 1, 10], [5, None, -7, 2]]
    )
    entries = [
        CatalogEntry(key_magic_rectangle(3, 7), mr37, 7, 3, "builtin"),
        CatalogEntry(key_tight_heffter(3, 4), th34, 4, 3, "builtin"),
        CatalogEntry(key_square_heffter(4, 3), sh43, 3, 3, "builtin"),
    ]
    return {e.key: e for e in entries}


BUILTINS = _builtin_entries()
_catalog_lock = threading.Lock()


def _entry_path(key: str) -> Path:
    return catalog_dir() / f"{key}.json"


def _entry_from_json(key: str, doc: dict) -> CatalogEntry:
    from .cli import grid_from_json

    grid, s, t = grid_from_json(doc)
    meta = doc.get("meta") or {}
    return CatalogEntry(key, grid, s, t, meta.get("provenance", "user-supplied"), meta.get("digest", ""))


def catalog_get(key: str) -> CatalogEntry | None:
    if key in BUILTINS:
        return BUILTINS[key]
    path = _entry_path(key)
    with _catalog_lock:
        if not path.is_file():
            return None
        try:
            doc = json.loads(path.read_text())
            entry = _entry_from_json(key, doc)
        except (ValueError, KeyError, TypeError, SignedMagicError) as exc:
            raise CatalogIntegrityError(key, f"unreadable ({exc})") from exc
    stored = (doc.get("meta") or {}).get("digest")
    if stored and stored != grid_digest(entry.grid):
        raise CatalogIntegrityError(key, "digest mismatch")
    if not entry_is_valid(entry):
        raise CatalogIntegrityError(key, "grid fails its family invariants")
    return entry


def catalog_put(entry: CatalogEntry) -> CatalogEntry:
    """Store a verified entry; a second put of identical content is a no-op."""
    if not entry_is_valid(entry):
        raise ArgumentError(f"refusing to store {entry.key!r}: grid fails its family invariants")
    if entry.key in BUILTINS:
        return BUILTINS[entry.key]
    existing = catalog_get(entry.key)
    if existing is not None:
        return existing
    path = _entry_path(entry.key)
    with _catalog_lock:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(f".tmp{os.getpid()}")
            tmp.write_text(json.dumps(entry.to_json(), indent=1) + "\n")
            os.replace(tmp, path)
        except OSError:
            pass  # a read-only catalog still serves builtins and in-process results
    return entry


def catalog_list() -> list[str]:
    keys = set(BUILTINS)
    d = catalog_dir()
    if d.is_dir():
        keys.update(p.stem for p in d.glob("*.json"))
    return sorted(keys)


def catalog_gc() -> list[str]:
    """Remove unreadable or invalid files; return the removed keys."""
    removed = []
    d = catalog_dir()
    if not d.is_dir():
        return removed
    for p in sorted(d.glob("*.json")):
        try:
            catalog_get(p.stem)
        except CatalogIntegrityError:
            p.unlink()
            removed.append(p.stem)
    for p in d.glob("*.tmp*"):
        p.unlink()
    return removed


# user-registered constructions, consulted after the catalog
_registry: dict[str, Callable[[], SignedGrid]] = {}


def register_provider(key: str, build: Callable[[], SignedGrid]) -> None:
    _registry[key] = build


# ---------------------------------------------------------------- magic rectangles


def siamese(n: int) -> list[list[int]]:
    """Odd-order magic square on ``0..n*n-1`` by the staircase method."""
    sq = [[-1] * n for _ in range(n)]
    r, c = 0, n // 2
    for v in range(n * n):
        sq[r][c] = v
        nr, nc = (r - 1) % n, (c + 1) % n
        if sq[nr][nc] != -1:
            nr, nc = (r + 1) % n, c
        r, c = nr, nc
    return sq


def _skolem_pairs(order: int, hooked: bool) -> dict[int, tuple[int, int]] | None:
    """Skolem (or hooked Skolem) pairs of the given order with the pair of 1s
    pinned at the right end; positions are 1-based."""
    length = 2 * order + 1 if hooked else 2 * order
    pos = [0] * (length + 2)
    if hooked:
        pos[2 * order] = -1
    one = 2 * order - 2 if hooked else 2 * order - 1
    pos[one] = pos[one + 1] = 1
    pairs = {1: (one, one + 1)}

    def place(d: int) -> bool:
        if d == 1:
            return True
        for p in range(1, length + 1 - d):
            if pos[p] == 0 and pos[p + d] == 0:
                pos[p] = pos[p + d] = d
                pairs[d] = (p, p + d)
                if place(d - 1):
                    return True
                pos[p] = pos[p + d] = 0
        return False

    return pairs if place(order) else None


def _small_triples(core: set[int], top: int, count: int) -> list[tuple[int, int, int]] | None:
    """Partition ``[1, top]`` minus ``core`` into ``count`` triples x+y=z."""
    free = sorted(set(range(1, top + 1)) - core)
    if len(free) != 3 * count:
        return None
    out: list[tuple[int, int, int]] = []

    def rec(avail: list[int]) -> bool:
        if not avail:
            return True
        x = avail[0]
        rest = avail[1:]
        for i, y in enumerate(rest):
            z = x + y
            if z in rest[i + 1 :]:
                nxt = [v for v in rest if v not in (y, z)]
                out.append((x, y, z))
                if rec(nxt):
                    return True
                out.pop()
        return False

    return out if rec(free) else None


def _core_and_triples(count: int) -> tuple[tuple[int, int], list[tuple[int, int, int]]] | None:
    """Split ``[1, 3*count+4]`` into a core ``{a, b, a+b, 2a+b}`` and ``count``
    triples of the form ``{x, y, x+y}``."""
    order = count + 1
    if order >= 4:
        hooked = order % 4 in (2, 3)
        pairs = _skolem_pairs(order, hooked)
        if pairs is not None:
            a, b = (1, 3 * count + 1) if hooked else (1, 3 * count + 2)
            triples = [
                (i, p + order, q + order) for i, (p, q) in sorted(pairs.items()) if i != 1
            ]
            return (a, b), triples
    top = 3 * count + 4
    for b in range(2, top):
        a = 1
        core = {a, b, a + b, 2 * a + b}
        if len(core) < 4 or max(core) > top:
            continue
        triples = _small_triples(core, top, count)
        if triples is not None:
            return (a, b), triples
    return None


def _pair_strip(triples, horizontal: bool) -> SignedGrid:
    """Signed 3-row strip (or 3-column strip) from triples: each triple gives two
    lines ``(x, y, -(x+y))`` and their negation."""
    cols = []
    for x, y, z in triples:
        cols.append([x, y, -z])
        cols.append([-x, -y, z])
    rows = [[col[i] for col in cols] for i in range(3)]
    grid = SignedGrid.from_rows(rows)
    return grid if horizontal else transpose(grid)


def _zero_signing(mags: list[int]) -> list[int] | None:
    """Signs making ``sum(sign*mag) == 0``; subset-sum by dynamic programming."""
    total = sum(mags)
    if total % 2:
        return None
    target = total // 2
    reach: dict[int, tuple[int, int] | None] = {0: None}
    for i, v in enumerate(mags):
        for s in sorted(reach, reverse=True):
            if s + v <= target and s + v not in reach:
                reach[s + v] = (i, s)
    if target not in reach:
        return None
    chosen = set()
    s = target
    while reach[s] is not None:
        i, prev = reach[s]
        chosen.add(i)
        s = prev
    return [v if i in chosen else -v for i, v in enumerate(mags)]


def _tight_odd_odd_blocks(m: int, n: int) -> SignedGrid | None:
    """Tight signed magic ``m x n`` array (odd ``3 <= m <= n``) from a 3x3 core,
    two strips of signed triples, and a shiftable even block; ``None`` when the
    block layout does not apply."""
    from .tight import construct_2xn, construct_even_even

    if m == 5 and n % 4 == 1 and n >= 9:
        upper = _tight_odd_odd_blocks(3, n)
        if upper is None:
            return None
        lo = (3 * n + 1) // 2
        signs = _zero_signing(list(range(lo, lo + n)))
        if signs is None:
            return None
        lower = SignedGrid.from_rows([signs, [-v for v in signs]])
        grid = paste(SignedGrid.empty(5, n), upper)
        return paste(grid, lower, 3, 0)
    count = (m + n - 6) // 2
    split = _core_and_triples(count)
    if split is None:
        return None
    (a, b), triples = split
    d = 2 * a + b
    grid = SignedGrid.empty(m, n)
    core = SignedGrid.from_rows([[-(a + b), b, a], [d, 0, -d], [-a, -b, a + b]])
    grid = paste(grid, core)
    across = (n - 3) // 2
    if across:
        grid = paste(grid, _pair_strip(triples[:across], True), 0, 3)
    if m > 3:
        grid = paste(grid, _pair_strip(triples[across:], False), 3, 0)
        shift = 3 * count + 4
        if m - 3 == 2:
            if (n - 3) % 4:
                return None
            block = construct_2xn(n - 3)
        else:
            block = construct_even_even(m - 3, n - 3)
        grid = paste(grid, shift_magnitudes(block, shift), 3, 3)
    return grid


def _search_magic_rectangle(m: int, n: int, limits: SearchLimits) -> list[list[int]]:
    """Canonical backtracking: row-major cells, ascending values, line-sum bounds."""
    total = m * n
    rs = n * (total - 1) // 2
    cs = m * (total - 1) // 2
    grid = [[-1] * n for _ in range(m)]
    used = [False] * total
    rsum = [0] * m
    csum = [0] * n
    nodes = 0

    def bounds_ok(need: int, k: int) -> bool:
        if k == 0:
            return need == 0
        lo = hi = 0
        got = 0
        for v in range(total):
            if not used[v]:
                lo += v
                got += 1
                if got == k:
                    break
        if got < k:
            return False
        got = 0
        for v in range(total - 1, -1, -1):
            if not used[v]:
                hi += v
                got += 1
                if got == k:
                    break
        return lo <= need <= hi

    def rec(idx: int) -> bool:
        nonlocal nodes
        if idx == total:
            return True
        r, c = divmod(idx, n)
        if c == n - 1:
            candidates = [rs - rsum[r]]
        elif r == m - 1:
            candidates = [cs - csum[c]]
        else:
            candidates = range(total)
        for v in candidates:
            if not (0 <= v < total) or used[v]:
                continue
            if r == m - 1 and csum[c] + v != cs:
                continue
            nodes += 1
            if nodes > limits.node_budget:
                raise ProviderTimeout(f"magic rectangle {m}x{n}: node budget exhausted", key_magic_rectangle(m, n))
            used[v] = True
            rsum[r] += v
            csum[c] += v
            grid[r][c] = v
            if bounds_ok(rs - rsum[r], n - 1 - c) and bounds_ok(cs - csum[c], m - 1 - r):
                if rec(idx + 1):
                    return True
            used[v] = False
            rsum[r] -= v
            csum[c] -= v
        return False

    if not rec(0):
        raise UnsupportedParameters(f"no {m}x{n} magic rectangle exists")
    return grid


@lru_cache(maxsize=None)
def _magic_rectangle_oriented(m: int, n: int, limits: SearchLimits) -> MagicRectangle:
    key = key_magic_rectangle(m, n)
    entry = catalog_get(key)
    if entry is not None:
        return MagicRectangle(m, n, tuple(tuple(r) for r in entry.grid.to_rows()), key, entry.provenance)
    if key in _registry:
        rows = _registry[key]().to_rows()
        rect = MagicRectangle(m, n, tuple(tuple(r) for r in rows), key, "user-supplied")
        if not rect.is_valid():
            raise ArgumentError(f"registered provider for {key} returned an invalid grid")
        return rect
    if m == n:
        rows = siamese(n)
        provenance = "constructed"
    else:
        signed = _tight_odd_odd_blocks(m, n)
        if signed is not None:
            w = (m * n - 1) // 2
            rows = [[v + w for v in row] for row in signed.to_rows()]
            provenance = "constructed"
        else:
            rows = _search_magic_rectangle(m, n, limits)
            provenance = "searched"
    rect = MagicRectangle(m, n, tuple(tuple(r) for r in rows), key, provenance)
    if not rect.is_valid():
        raise CompositionError(f"internal error: {m}x{n} magic rectangle failed verification")
    if provenance == "searched":
        catalog_put(CatalogEntry(key, rect.as_grid(), n, m, provenance))
    return rect


def magic_rectangle(m: int, n: int, limits: SearchLimits = DEFAULT_LIMITS) -> MagicRectangle:
    """Magic rectangle on ``0..mn-1`` for odd ``m, n > 1``."""
    if m < 3 or n < 3 or m % 2 == 0 or n % 2 == 0:
        raise UnsupportedParameters(f"magic rectangles are provided for odd sides > 1 only, got {m}x{n}")
    if m <= n:
        return _magic_rectangle_oriented(m, n, limits)
    rect = _magic_rectangle_oriented(n, m, limits)
    rows = tuple(zip(*rect.rows))
    return MagicRectangle(m, n, rows, rect.key, rect.provenance)


# ---------------------------------------------------------------- Heffter search


def band_pattern(n: int, k: int, first: int = 0) -> list[tuple[int, int]]:
    return sorted((i, (i + d) % n) for i in range(n) for d in range(first, first + k))


def _heffter_dfs(m: int, n: int, cells: list[tuple[int, int]], limits: SearchLimits) -> SignedGrid:
    """Canonical depth-first search over signed magnitudes on a fixed pattern.

    Cells are visited in row-major order; magnitudes ascend with the positive
    sign tried first; the first cell is positive; the last cell of a line is
    forced; a line is pruned once its partial sum exceeds what its remaining
    cells could cancel.
    """
    cells = sorted(cells)
    top = len(cells)
    row_left = [0] * m
    col_left = [0] * n
    for r, c in cells:
        row_left[r] += 1
        col_left[c] += 1
    row_sum = [0] * m
    col_sum = [0] * n
    used = [False] * (top + 1)
    values = [0] * top
    nodes = 0

    def reach(k: int) -> int:
        got = total = 0
        v = top
        while got < k and v > 0:
            if not used[v]:
                total += v
                got += 1
            v -= 1
        return total

    def rec(idx: int) -> bool:
        nonlocal nodes
        if idx == top:
            return True
        r, c = cells[idx]
        if row_left[r] == 1:
            cand = [-row_sum[r]]
        elif col_left[c] == 1:
            cand = [-col_sum[c]]
        elif idx == 0:
            cand = list(range(1, top + 1))
        else:
            cand = [s * v for v in range(1, top + 1) for s in (1, -1)]
        for v in cand:
            a = abs(v)
            if a == 0 or a > top or used[a]:
                continue
            if col_left[c] == 1 and col_sum[c] + v != 0:
                continue
            nodes += 1
            if nodes > limits.node_budget:
                raise ProviderTimeout("node budget exhausted")
            used[a] = True
            row_sum[r] += v
            col_sum[c] += v
            row_left[r] -= 1
            col_left[c] -= 1
            values[idx] = v
            ok = abs(row_sum[r]) <= reach(row_left[r]) and abs(col_sum[c]) <= reach(col_left[c])
            if ok and rec(idx + 1):
                return True
            used[a] = False
            row_sum[r] -= v
            col_sum[c] -= v
            row_left[r] += 1
            col_left[c] += 1
        return False

    if not rec(0):
        raise UnsupportedParameters("no Heffter array on this pattern")
    return SignedGrid(m, n, dict(zip(cells, values)))


def _heffter_cpsat(m: int, n: int, cells: list[tuple[int, int]], limits: SearchLimits, shiftable: bool) -> SignedGrid:
    try:
        from ortools.sat.python import cp_model
    except ImportError as exc:  # pragma: no cover - dependency is declared
        raise ProviderTimeout("CP-SAT backend unavailable") from exc
    cells = sorted(cells)
    top = len(cells)
    model = cp_model.CpModel()
    mag = [model.NewIntVar(1, top, f"m{i}") for i in range(top)]
    pos = [model.NewBoolVar(f"p{i}") for i in range(top)]
    val = [model.NewIntVar(-top, top, f"v{i}") for i in range(top)]
    for i in range(top):
        model.Add(val[i] == mag[i]).OnlyEnforceIf(pos[i])
        model.Add(val[i] == -mag[i]).OnlyEnforceIf(pos[i].Not())
    model.AddAllDifferent(mag)
    model.Add(pos[0] == 1)
    lines: dict[tuple[str, int], list[int]] = {}
    for i, (r, c) in enumerate(cells):
        lines.setdefault(("r", r), []).append(i)
        lines.setdefault(("c", c), []).append(i)
    for idx in lines.values():
        model.Add(sum(val[i] for i in idx) == 0)
        if shiftable:
            model.Add(2 * sum(pos[i] for i in idx) == len(idx))
    solver = cp_model.CpSolver()
    solver.parameters.num_workers = 1
    solver.parameters.random_seed = 0
    solver.parameters.max_deterministic_time = limits.time_budget
    solver.parameters.max_time_in_seconds = 4 * limits.time_budget
    status = solver.Solve(model)
    if status not in (cp_model.OPTIMAL, cp_model.FEASIBLE):
        if status == cp_model.INFEASIBLE:
            raise UnsupportedParameters("no Heffter array on this pattern")
        raise ProviderTimeout("CP-SAT budget exhausted")
    return SignedGrid(m, n, {cell: int(solver.Value(val[i])) for i, cell in enumerate(cells)})


def _search_heffter(
    m: int, n: int, cells: list[tuple[int, int]], limits: SearchLimits, key: str, shiftable: bool = False
) -> SignedGrid:
    if not shiftable:
        try:
            return _heffter_dfs(m, n, cells, limits)
        except ProviderTimeout:
            pass
    try:
        return _heffter_cpsat(m, n, cells, limits, shiftable)
    except ProviderTimeout as exc:
        raise ProviderTimeout(f"{key}: search budget exhausted", key) from exc


def _from_catalog_or_registry(key: str, s: int, t: int) -> HeffterGrid | None:
    entry = catalog_get(key)
    if entry is not None:
        return HeffterGrid(entry.grid, entry.s, entry.t, key, entry.provenance)
    if key in _registry:
        h = HeffterGrid(_registry[key](), s, t, key, "user-supplied")
        if not h.is_valid():
            raise ArgumentError(f"registered provider for {key} returned an invalid grid")
        return h
    return None


def _finish(h: HeffterGrid, shiftable: bool = False) -> HeffterGrid:
    if not is_heffter(h.grid, h.s, h.t, shiftable):
        raise CompositionError(f"internal error: {h.key} failed verification")
    if h.provenance == "searched":
        catalog_put(CatalogEntry(h.key, h.grid, h.s, h.t, h.provenance))
    return h


@lru_cache(maxsize=None)
def tight_heffter(m: int, n: int, limits: SearchLimits = DEFAULT_LIMITS) -> HeffterGrid:
    if m < 3 or n < 3 or (m * n) % 4 not in (0, 3):
        raise UnsupportedParameters(f"tight {m}x{n} Heffter arrays need m,n >= 3 and mn ≡ 0,3 (mod 4)")
    key = key_tight_heffter(m, n)
    hit = _from_catalog_or_registry(key, n, m)
    if hit is None:
        flipped = _from_catalog_or_registry(key_tight_heffter(n, m), m, n)
        if flipped is not None:
            hit = HeffterGrid(transpose(flipped.grid), n, m, flipped.key, flipped.provenance)
    if hit is not None:
        return hit
    cells = [(r, c) for r in range(m) for c in range(n)]
    grid = _search_heffter(m, n, cells, limits, key)
    return _finish(HeffterGrid(grid, n, m, key, "searched"))


@lru_cache(maxsize=None)
def shiftable_heffter_band(n: int, limits: SearchLimits = DEFAULT_LIMITS) -> HeffterGrid:
    """Shiftable ``n x n`` Heffter array on the four diagonals ``0..3``."""
    key = key_shiftable_band(n)
    hit = _from_catalog_or_registry(key, 4, 4)
    if hit is not None:
        return hit
    grid = _search_heffter(n, n, band_pattern(n, 4), limits, key, shiftable=True)
    return _finish(HeffterGrid(grid, 4, 4, key, "searched"), shiftable=True)


@lru_cache(maxsize=None)
def shiftable_tight_heffter(m: int, n: int, limits: SearchLimits = DEFAULT_LIMITS) -> HeffterGrid:
    """Tight ``m x n`` Heffter array with as many positive as negative entries
    in every row and column (``m`` and ``n`` even)."""
    if m % 2 or n % 2 or m < 4 or n < 4:
        raise UnsupportedParameters(f"shiftable tight {m}x{n} Heffter arrays need even m, n >= 4")
    key = key_shiftable_tight_heffter(m, n)
    hit = _from_catalog_or_registry(key, n, m)
    if hit is not None:
        return hit
    cells = [(r, c) for r in range(m) for c in range(n)]
    grid = _search_heffter(m, n, cells, limits, key, shiftable=True)
    return _finish(HeffterGrid(grid, n, m, key, "searched"), shiftable=True)


def square_heffter_cached(n: int, k: int) -> bool:
    """True when H(n;k) is available without searching."""
    key = key_square_heffter(n, k)
    return key in _registry or catalog_get(key) is not None


@lru_cache(maxsize=None)
def square_heffter(n: int, k: int, limits: SearchLimits = DEFAULT_LIMITS) -> HeffterGrid:
    """``n x n`` integer Heffter array with ``k`` filled cells per row and column."""
    if not (3 <= k <= n) or (n * k) % 4 not in (0, 3):
        raise UnsupportedParameters(f"H({n};{k}) needs 3 <= k <= n and nk ≡ 0,3 (mod 4)")
    key = key_square_heffter(n, k)
    hit = _from_catalog_or_registry(key, k, k)
    if hit is not None:
        return hit
    if k == n:
        t = tight_heffter(n, n, limits)
        return HeffterGrid(t.grid, k, k, key, t.provenance)
    if k >= 7:
        # a (k-4)-band array plus a sign-balanced 4-band on the next diagonals,
        # its magnitudes moved past the inner array's
        inner = square_heffter(n, k - 4, limits)
        start, width = _band_of(inner.grid)
        if width == k - 4:
            outer = shiftable_heffter_band(n, limits)
            outer_grid = permute_columns_cyclic(shift_magnitudes(outer.grid, n * (k - 4)), start + width)
            grid = paste(inner.grid, outer_grid)
            return _finish(HeffterGrid(grid, k, k, key, "searched"))
    grid = _search_heffter(n, n, band_pattern(n, k), limits, key)
    return _finish(HeffterGrid(grid, k, k, key, "searched"))


def _band_of(grid: SignedGrid) -> tuple[int, int]:
    from .core import diagonal_band

    return diagonal_band(grid)


def iter_builtin_keys() -> Iterator[str]:
    return iter(sorted(BUILTINS))


def clear_caches() -> None:
    """Forget in-process provider results (the on-disk catalog is untouched)."""
    _magic_rectangle_oriented.cache_clear()
    tight_heffter.cache_clear()
    shiftable_heffter_band.cache_clear()
    shiftable_tight_heffter.cache_clear()
    square_heffter.cache_clear()

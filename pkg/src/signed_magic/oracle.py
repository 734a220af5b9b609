"""Exhaustive backtracking over all signed magic arrays of a given spec.

The search is independent of every construction in the package and serves as
ground truth on small instances. Cells are visited row-major; each cell takes
an unused symbol (ascending magnitude, positive before negative) or stays
empty, the latter tried last. A line whose last slot comes up is forced to
cancel its running sum, and a line is abandoned once its running sum lies
outside what its remaining slots could still cancel. Negating a solution
gives another, so the first nonzero entry is fixed positive and counts are
doubled back.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .core import ArraySpec, SignedGrid, SignedMagicError, symbol_set
from .providers import SearchLimits

ORACLE_LIMITS = SearchLimits(max_filled_cells=14, time_budget=60.0, node_budget=50_000_000)


class Inconclusive(SignedMagicError):
    """Budget ran out before the search space was exhausted."""


@dataclass(frozen=True)
class OracleResult:
    grid: SignedGrid | None
    count: int | None
    nodes: int

    @property
    def exists(self) -> bool:
        return self.grid is not None or bool(self.count)


class _Search:
    def __init__(self, spec: ArraySpec, limits: SearchLimits):
        filled = spec.m * spec.s
        if filled > limits.max_filled_cells:
            raise Inconclusive(f"{filled} filled cells exceeds the cap of {limits.max_filled_cells}")
        self.spec = spec
        self.limits = limits
        symbols = symbol_set(spec).values()
        self.order = sorted(symbols, key=lambda v: (abs(v), v < 0))
        self.avail = {v: True for v in symbols}
        self.m, self.n, self.s, self.t = spec.m, spec.n, spec.s, spec.t
        self.row_sum = [0] * self.m
        self.col_sum = [0] * self.n
        self.row_fill = [0] * self.m
        self.col_fill = [0] * self.n
        self.cells: dict[tuple[int, int], int] = {}
        self.nodes = 0
        self.deadline = time.monotonic() + limits.time_budget
        self.signed = False  # a nonzero entry has been placed

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.limits.node_budget:
            raise Inconclusive(f"node budget {self.limits.node_budget} exhausted")
        if self.nodes & 0xFFF == 0 and time.monotonic() > self.deadline:
            raise Inconclusive(f"time budget {self.limits.time_budget}s exhausted")

    def _reachable(self, total: int, k: int) -> bool:
        """Whether ``-total`` can be a sum of ``k`` distinct unused symbols (loose bound)."""
        if k == 0:
            return total == 0
        if k == 1:
            return bool(self.avail.get(-total))
        free = [v for v in self.order if self.avail[v]]
        if len(free) < k:
            return False
        free.sort()
        return sum(free[:k]) <= -total <= sum(free[-k:])

    def _candidates(self, r: int, c: int) -> list[int | None]:
        row_left = self.s - self.row_fill[r]
        col_left = self.t - self.col_fill[c]
        cells_left_row = self.n - c
        rows_left_col = self.m - r
        out: list[int | None] = []
        if row_left and col_left:
            if row_left == 1:
                need = -self.row_sum[r]
                vals = [need] if self.avail.get(need) else []
            elif col_left == 1:
                need = -self.col_sum[c]
                vals = [need] if self.avail.get(need) else []
            else:
                vals = [v for v in self.order if self.avail[v]]
            if col_left == 1:
                vals = [v for v in vals if self.col_sum[c] + v == 0]
            if not self.signed:
                vals = [v for v in vals if v >= 0]
            out.extend(vals)
        # leaving the cell empty must keep both lines completable
        if row_left < cells_left_row and col_left < rows_left_col:
            out.append(None)
        return out

    def run(self, stop_at_first: bool):
        self.found: SignedGrid | None = None
        self.count = 0
        self.stop = stop_at_first
        self._rec(0)

    def _rec(self, idx: int) -> bool:
        if idx == self.m * self.n:
            if any(self.col_fill[c] != self.t for c in range(self.n)):
                return False
            self.count += 1
            if self.found is None:
                self.found = SignedGrid(self.m, self.n, dict(self.cells))
            return self.stop
        r, c = divmod(idx, self.n)
        for v in self._candidates(r, c):
            self._tick()
            if v is None:
                if self._rec(idx + 1):
                    return True
                continue
            was_signed = self.signed
            self.avail[v] = False
            self.cells[(r, c)] = v
            self.row_sum[r] += v
            self.col_sum[c] += v
            self.row_fill[r] += 1
            self.col_fill[c] += 1
            self.signed = was_signed or v != 0
            if self._reachable(self.row_sum[r], self.s - self.row_fill[r]) and self._reachable(
                self.col_sum[c], self.t - self.col_fill[c]
            ):
                if self._rec(idx + 1):
                    return True
            self.signed = was_signed
            self.avail[v] = True
            del self.cells[(r, c)]
            self.row_sum[r] -= v
            self.col_sum[c] -= v
            self.row_fill[r] -= 1
            self.col_fill[c] -= 1
        return False


def search_one(spec: ArraySpec, limits: SearchLimits = ORACLE_LIMITS) -> OracleResult:
    """First solution in canonical order, or ``grid=None`` once the space is exhausted."""
    search = _Search(spec, limits)
    search.run(stop_at_first=True)
    return OracleResult(search.found, None, search.nodes)


def count_all(spec: ArraySpec, limits: SearchLimits = ORACLE_LIMITS) -> OracleResult:
    """Exact number of signed magic arrays with this spec."""
    search = _Search(spec, limits)
    search.run(stop_at_first=False)
    # every solution with a nonzero entry was counted for one sign only
    only_zero = spec.m * spec.s == 1
    total = search.count if only_zero else 2 * search.count
    return OracleResult(search.found, total, search.nodes)


def verdict(spec: ArraySpec, limits: SearchLimits = ORACLE_LIMITS) -> str:
    """``"exists"``, ``"none (exhaustive)"`` or ``"inconclusive"``."""
    try:
        result = search_one(spec, limits)
    except Inconclusive:
        return "inconclusive"
    return "exists" if result.grid is not None else "none (exhaustive)"


__all__ = ["Inconclusive", "ORACLE_LIMITS", "OracleResult", "count_all", "search_one", "verdict"]

"""Existence decisions for the three characterized families.

Every ``Exists`` verdict carries a method tag naming the construction path, and
the construction dispatchers consult these same functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .core import ArgumentError


class Verdict(str, Enum):
    EXISTS = "Exists"
    NOT_EXISTS = "NotExists"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    method: str | None = None
    reason: str | None = None

    @property
    def exists(self) -> bool:
        return self.verdict is Verdict.EXISTS

    def __str__(self) -> str:
        tail = self.method or self.reason
        return f"{self.verdict.value} ({tail})" if tail else self.verdict.value


def _yes(method: str) -> Decision:
    return Decision(Verdict.EXISTS, method=method)


def _no(reason: str) -> Decision:
    return Decision(Verdict.NOT_EXISTS, reason=reason)


def transpose_method(method: str) -> str:
    """Tag of the same construction applied to the transposed shape."""
    return method[:-2] if method.endswith(".T") else method + ".T"


def decide_tight(m: int, n: int) -> Decision:
    if m < 1 or n < 1:
        raise ArgumentError("dimensions must be positive")
    if m == 1 or n == 1:
        return _yes("tight.trivial") if m == n == 1 else _no("single row or column other than 1x1")
    if m == 2 and n == 2:
        return _no("two-row arrays need n ≡ 0,3 (mod 4)")
    if m == 2:
        return _yes("tight.two_row") if n % 4 in (0, 3) else _no("two-row arrays need n ≡ 0,3 (mod 4)")
    if n == 2:
        return _yes("tight.two_row.T") if m % 4 in (0, 3) else _no("two-column arrays need m ≡ 0,3 (mod 4)")
    if m % 2 == 0 and n % 2 == 0:
        return _yes("tight.even_even")
    if m % 2 and n % 2:
        return _yes("tight.odd_odd")
    return _yes("tight.odd_even" if m % 2 else "tight.odd_even.T")


def decide_square(n: int, t: int) -> Decision:
    if n < 1 or t < 1:
        raise ArgumentError("n and t must be positive")
    if t > n:
        return _no("more filled cells per row than columns")
    if n == t == 1:
        return _yes("square.trivial")
    if t < 3:
        return _no("no signed magic square has fewer than 3 entries per row")
    if t == n:
        return _yes("square.tight")
    if n % 2 and t % 2:
        return _yes("square.odd_odd")
    if n % 2:
        return _yes("square.even_in_odd")
    if t % 2:
        return _yes("square.odd_in_even")
    from .squares import even_even_method

    return _yes(even_even_method(n, t))


UNKNOWN_DOUBLE = {(1, 1), (1, 2), (3, 2), (3, 3)}  # (t mod 4, m mod 4)


def heffter_applies(m: int, t: int) -> bool:
    return (m * t) % 4 in (0, 3)


def decide_double_rectangle(m: int, t: int) -> Decision:
    if t < 3 or m < t:
        raise ArgumentError(f"need m >= t >= 3, got m={m}, t={t}")
    heffter = heffter_applies(m, t)
    shiftable = t % 2 == 0
    if heffter and shiftable:
        from .providers import square_heffter_cached

        if square_heffter_cached(m, t):
            return _yes("double.heffter")
        return _yes("double.shiftable")
    if heffter:
        return _yes("double.heffter")
    if shiftable:
        return _yes("double.shiftable")
    return Decision(Verdict.UNKNOWN, reason=f"open case t≡{t % 4}, m≡{m % 4} (mod 4)")

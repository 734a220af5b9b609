"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (the lines are repeated in the terminal summary) or directly
with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import contextlib
import hashlib
import os
import sys
import tempfile
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

import figures as F
import report
from signed_magic import providers
from signed_magic import squares as S
from signed_magic.cli import dump_grid
from signed_magic.core import ArraySpec, SignedGrid, diagonal_width, is_shiftable, verify
from signed_magic.decide import decide_double_rectangle, decide_square, decide_tight
from signed_magic.oracle import search_one, verdict
from signed_magic.rectangles import construct_double_rectangle, shiftable_sms
from signed_magic.tight import construct_tight

HEFFTER_SQUARE_CAP = 12


@contextlib.contextmanager
def clean_catalog():
    """Point the catalog at an empty directory and drop in-process caches."""
    old = os.environ.get("SMA_CATALOG_DIR")
    with tempfile.TemporaryDirectory(prefix="sma-accept-") as d:
        os.environ["SMA_CATALOG_DIR"] = d
        providers.clear_caches()
        try:
            yield
        finally:
            providers.clear_caches()
            if old is None:
                os.environ.pop("SMA_CATALOG_DIR", None)
            else:
                os.environ["SMA_CATALOG_DIR"] = old


# serialized sweep outputs of the first clean run, reused by the determinism check
_FIRST_RUN: dict[str, str] = {}


def _record(name: str, parts: list[str]) -> str:
    blob = "".join(parts)
    _FIRST_RUN.setdefault(name, blob)
    return blob


# ---------------------------------------------------------------- 1


def _figure_cases():
    heffter = SignedGrid.from_rows(F.HEFFTER_3_4)

    def partition_table():
        system = S.odd_partition_columns(7, 5)
        return [[system.element(i, system.position_in_block(i, c)) for c in range(1, 8)] for i in range(1, 6)]

    return [
        ("2x4", lambda: construct_tight(2, 4).to_rows(), F.SMA_2_4),
        ("4x4", lambda: construct_tight(4, 4).to_rows(), F.SMA_4_4),
        ("4x6", lambda: construct_tight(4, 6).to_rows(), F.SMA_4_6),
        ("6x6", lambda: construct_tight(6, 6).to_rows(), F.SMA_6_6),
        ("3x10", lambda: construct_tight(3, 10).to_rows(), F.SMA_3_10),
        ("5x4", lambda: construct_tight(5, 4).to_rows(), F.SMA_5_4),
        ("5x6", lambda: construct_tight(5, 6).to_rows(), F.SMA_5_6),
        ("sms 8;4 band", lambda: S.sms4_diagonal(8).to_rows(), F.SMS_8_4),
        ("partition 7;5", partition_table, F.PARTITION_7_5),
        ("sms 7;5", lambda: S.construct_sms(7, 5).to_rows(), F.SMS_7_5),
        ("sms 7;6", lambda: S.construct_sms(7, 6).to_rows(), F.SMS_7_6),
        ("sms 10;6 paired", lambda: S.sms6_2mod4(10, F.PAIRING_10).to_rows(), F.SMS_10_6),
        ("sms 6;3", lambda: S.construct_sms(6, 3).to_rows(), F.SMS_6_3),
        ("sms 8;3", lambda: S.construct_sms(8, 3).to_rows(), F.SMS_8_3),
        ("sms 8;5", lambda: S.construct_sms(8, 5).to_rows(), F.SMS_8_5),
        ("sms 10;5", lambda: S.construct_sms(10, 5).to_rows(), F.SMS_10_5),
        ("sms 10;7", lambda: S.construct_sms(10, 7).to_rows(), F.SMS_10_7),
        ("sms 6;4 from heffter", lambda: S.construct_sms(6, 4).to_rows(), F.SMS_6_4),
        ("sms 6;4 given array", lambda: S.sms_via_heffter(6, 4, heffter).to_rows(), F.SMS_6_4),
        ("sma 4x8", lambda: construct_double_rectangle(4, 3).to_rows(), F.SH_4_3),
        ("sma 7x14", lambda: construct_double_rectangle(7, 6).to_rows(), F.SMA_7_14),
    ]


def criterion_1():
    failures = []
    with clean_catalog():
        for name, build, expected in _figure_cases():
            t0 = time.perf_counter()
            got = build()
            dt = time.perf_counter() - t0
            if got != expected:
                failures.append(f"{name} differs")
            elif dt >= 1.0:
                failures.append(f"{name} took {dt:.2f}s")
    total = len(_figure_cases())
    return not failures, f"{total - len(failures)}/{total} exact" + (f"; {', '.join(failures)}" if failures else "")


# ---------------------------------------------------------------- 2


def tight_sweep() -> tuple[list[str], list[str]]:
    problems, parts = [], []
    for m in range(1, 21):
        for n in range(1, 21):
            exists = decide_tight(m, n).exists
            try:
                g = construct_tight(m, n)
            except ValueError:
                if exists:
                    problems.append(f"{m}x{n} refused")
                continue
            if not exists:
                problems.append(f"{m}x{n} built but decided NotExists")
            elif not verify(g, ArraySpec.tight(m, n)).is_valid_sma:
                problems.append(f"{m}x{n} invalid")
            parts.append(dump_grid(g, n, m, "json"))
    return problems, parts


def criterion_2():
    with clean_catalog():
        t0 = time.perf_counter()
        problems, parts = tight_sweep()
        dt = time.perf_counter() - t0
    _record("tight", parts)
    ok = not problems and dt < 10
    return ok, f"{len(parts)} arrays in {dt:.1f}s" + (f"; {problems[:5]}" if problems else "")


# ---------------------------------------------------------------- 3


def _square_side_conditions(n: int, t: int, g: SignedGrid, method: str) -> list[str]:
    out = []
    width = diagonal_width(g)
    if method == "square.even_in_odd":
        if width > t:
            out.append(f"{n};{t} width {width}")
        if not is_shiftable(g):
            out.append(f"{n};{t} not shiftable")
    elif method == "square.odd_in_even" and (t > 3 or n % 4 == 0):
        if width > t:
            out.append(f"{n};{t} width {width}")
    elif method == "square.even_even.band7":
        if width > t + 1:
            out.append(f"{n};{t} width {width}")
        if not is_shiftable(g):
            out.append(f"{n};{t} not shiftable")
    return out


def square_sweep() -> tuple[list[str], list[str]]:
    problems, parts = [], []
    for n in range(3, 17):
        for t in range(3, n + 1):
            method = decide_square(n, t).method or ""
            if method == "square.even_even.heffter" and n > HEFFTER_SQUARE_CAP:
                continue
            try:
                g = S.construct_sms(n, t)
            except ValueError as exc:
                problems.append(f"{n};{t} failed: {exc}")
                continue
            if not verify(g, ArraySpec.square(n, t)).is_valid_sma:
                problems.append(f"{n};{t} invalid")
            problems += _square_side_conditions(n, t, g, method)
            parts.append(dump_grid(g, t, t, "json"))
    # shiftability claims of the band building blocks
    for n in range(4, 17):
        if not is_shiftable(S.sms4_diagonal(n)):
            problems.append(f"4-band {n} not shiftable")
    for n in range(7, 17, 2):
        if not is_shiftable(S.sms6_odd(n)):
            problems.append(f"6-band {n} not shiftable")
    for n in (10, 14):
        if not is_shiftable(S.sms6_2mod4(n)):
            problems.append(f"7-band {n} not shiftable")
    for m in range(4, 17):
        for t in range(4, m + 1, 2):
            if m % 4 == 0 and t % 4 == 2 and t < m and m > HEFFTER_SQUARE_CAP:
                continue
            g = shiftable_sms(m, t)
            if not (is_shiftable(g) and verify(g, ArraySpec.square(m, t)).is_valid_sma):
                problems.append(f"shiftable {m};{t} failed")
            parts.append(dump_grid(g, t, t, "json"))
    return problems, parts


def criterion_3():
    with clean_catalog():
        t0 = time.perf_counter()
        problems, parts = square_sweep()
        dt = time.perf_counter() - t0
    _record("square", parts)
    ok = not problems and dt < 60
    return ok, f"{len(parts)} squares in {dt:.1f}s" + (f"; {problems[:5]}" if problems else "")


# ---------------------------------------------------------------- 4


def rectangle_sweep() -> tuple[list[str], list[str]]:
    problems, parts = [], []
    for m in range(3, 10):
        for t in range(3, m + 1):
            decision = decide_double_rectangle(m, t)
            if not decision.exists:
                continue
            g = construct_double_rectangle(m, t)
            if not verify(g, ArraySpec.double(m, t)).is_valid_sma:
                problems.append(f"{m};{t} invalid")
            left = {(r, c): v for (r, c), v in g.cells.items() if c < m}
            right = {(r, c - m): v for (r, c), v in g.cells.items() if c >= m}
            k = m * t // 2
            if decision.method == "double.heffter":
                expected = {key: -v for key, v in left.items()}
            else:
                expected = {key: v + k if v > 0 else v - k for key, v in left.items()}
            if right != expected:
                problems.append(f"{m};{t} right half is not the declared image")
            parts.append(dump_grid(g, 2 * t, t, "json"))
    return problems, parts


def criterion_4():
    with clean_catalog():
        t0 = time.perf_counter()
        problems, parts = rectangle_sweep()
        dt = time.perf_counter() - t0
    _record("rectangle", parts)
    ok = not problems and dt < 30
    return ok, f"{len(parts)} rectangles in {dt:.1f}s" + (f"; {problems[:5]}" if problems else "")


# ---------------------------------------------------------------- 5

NONEXISTENT = [
    (1, 2, 2, 1),
    (1, 3, 3, 1),
    (2, 2, 2, 2),
    (2, 5, 5, 2),
    (2, 6, 6, 2),
    (2, 2, 2, 2),
    (3, 3, 2, 2),
    (4, 4, 2, 2),
    (2, 2, 1, 1),
    (3, 3, 1, 1),
]


def criterion_5():
    bad = []
    slowest = 0.0
    for spec in NONEXISTENT:
        t0 = time.perf_counter()
        v = verdict(ArraySpec(*spec))
        dt = time.perf_counter() - t0
        slowest = max(slowest, dt)
        if v != "none (exhaustive)" or dt >= 60:
            bad.append(f"{spec}: {v} in {dt:.1f}s")
    return not bad, f"{len(NONEXISTENT)} specs, slowest {slowest:.2f}s" + (f"; {bad}" if bad else "")


# ---------------------------------------------------------------- 6


def small_family_specs(cap: int = 14):
    for m in range(1, cap + 1):
        for n in range(1, cap + 1):
            if m * n <= cap:
                yield "tight", ArraySpec.tight(m, n), decide_tight(m, n)
    for n in range(1, cap + 1):
        for t in range(1, n + 1):
            if n * t <= cap:
                yield "square", ArraySpec.square(n, t), decide_square(n, t)
    for m in range(3, cap + 1):
        for t in range(3, m + 1):
            if 2 * m * t <= cap:
                yield "double", ArraySpec.double(m, t), decide_double_rectangle(m, t)


def criterion_6():
    bad, checked = [], 0
    for family, spec, decision in small_family_specs():
        if decision.verdict.value == "Unknown":
            continue
        result = search_one(spec)
        checked += 1
        if (result.grid is not None) != decision.exists:
            bad.append(f"{family} {spec}")
    return not bad, f"{checked} specs agree" + (f"; disagreements {bad}" if bad else "")


# ---------------------------------------------------------------- 7


def _partition_problems(n: int, t: int) -> list[str]:
    system = S.odd_partition_rows(S.odd_partition_columns(n, t))
    blocks = [set(b) for b in system.blocks()]
    half = (n * t - 1) // 2
    universe = set(range(-half, half + 1))
    out = []
    if set().union(*blocks) != universe or sum(len(b) for b in blocks) != len(universe):
        out.append("blocks")
    for name, classes in (("columns", system.column_classes), ("rows", system.row_classes)):
        if len(classes) != n or sorted(v for c in classes for v in c) != sorted(universe):
            out.append(f"{name} not a partition")
        for cls in classes:
            if len(cls) != t or sum(cls) or any(len(set(cls) & b) != 1 for b in blocks):
                out.append(f"{name} class {sorted(cls)}")
    for r in range(n):
        if sum(system.breaks[i][r] for i in range(t)):
            out.append(f"breaks row {r + 1}")
    return [f"{n};{t} {p}" for p in out]


def criterion_7():
    t0 = time.perf_counter()
    bad = []
    for n in range(3, 16, 2):
        for t in range(3, n + 1, 2):
            bad += _partition_problems(n, t)
    sequences = 0
    for n in range(4, 51, 2):
        for build, ok in (
            (S.sequences3, n % 4 == 0),
            (S.sequences5, n % 4 == 0 and n >= 8),
            (S.sequences7, n % 4 == 2 and n >= 10),
        ):
            if not ok:
                continue
            seq = build(n)
            sequences += 1
            col, row = seq.window_sums()
            half = seq.t * n // 2
            if any(col) or any(row):
                bad.append(f"{build.__name__}({n}) window sums")
            if sorted(seq.values()) != [v for v in range(-half, half + 1) if v]:
                bad.append(f"{build.__name__}({n}) coverage")
    dt = time.perf_counter() - t0
    return not bad and dt < 10, f"28 partition systems, {sequences} sequence sets in {dt:.2f}s" + (
        f"; {bad[:5]}" if bad else ""
    )


# ---------------------------------------------------------------- 8


def full_sweep() -> dict[str, str]:
    out = {}
    for name, sweep in (("tight", tight_sweep), ("square", square_sweep), ("rectangle", rectangle_sweep)):
        with clean_catalog():
            out[name] = "".join(sweep()[1])
    return out


def criterion_8():
    first = dict(_FIRST_RUN) if len(_FIRST_RUN) == 3 else full_sweep()
    second = full_sweep()
    digests = {k: hashlib.sha256(v.encode()).hexdigest()[:12] for k, v in second.items()}
    same = all(first[k] == second[k] for k in second)
    return same, ", ".join(f"{k} {d}" for k, d in digests.items()) + ("" if same else "; outputs differ")


CRITERIA = [
    (1, "figure reproduction", criterion_1),
    (2, "tight sweep", criterion_2),
    (3, "square sweep", criterion_3),
    (4, "rectangle sweep", criterion_4),
    (5, "oracle nonexistence", criterion_5),
    (6, "oracle/decide agreement", criterion_6),
    (7, "partition and sequence properties", criterion_7),
    (8, "determinism", criterion_8),
]


def run_criterion(number: int, title: str, check) -> tuple[bool, str]:
    ok, detail = check()
    line = f"criterion {number} ({title}): {'PASS' if ok else 'FAIL'} - {detail}"
    report.LINES.append(line)
    print(line)
    return ok, line


@pytest.mark.parametrize("number, title, check", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, check):
    ok, line = run_criterion(number, title, check)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(*c)[0] for c in CRITERIA]
    sys.exit(0 if all(results) else 1)

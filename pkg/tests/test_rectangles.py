import pytest

import figures as F
from signed_magic.core import ArraySpec, SignedGrid, UnsupportedParameters, is_shiftable, verify
from signed_magic.rectangles import (
    construct_double_rectangle,
    move_outward,
    shiftable_sms,
    sma_double_via_heffter,
    sma_double_via_shiftable,
)


def halves(g: SignedGrid):
    m = g.m
    left = {(r, c): v for (r, c), v in g.cells.items() if c < m}
    right = {(r, c - m): v for (r, c), v in g.cells.items() if c >= m}
    return left, right


@pytest.mark.parametrize(
    "m, t, rows",
    [(7, 6, F.SMS_7_6), (8, 4, F.SMS_8_4)],
)
def test_shiftable_sms_reuses_reference_squares(m, t, rows):
    assert shiftable_sms(m, t).to_rows() == rows


@pytest.mark.parametrize("m, t", [(4, 4), (6, 6), (8, 6), (9, 6), (10, 6), (12, 10), (11, 8)])
def test_shiftable_sms(m, t):
    g = shiftable_sms(m, t)
    assert verify(g, ArraySpec.square(m, t)).is_valid_sma
    assert is_shiftable(g)


@pytest.mark.parametrize("m, t", [(6, 3), (5, 2), (4, 5)])
def test_shiftable_sms_refuses(m, t):
    with pytest.raises(UnsupportedParameters):
        shiftable_sms(m, t)


def test_heffter_route_reproduces_reference():
    assert sma_double_via_heffter(4, 3).to_rows() == F.SH_4_3


def test_shiftable_route_reproduces_reference():
    assert sma_double_via_shiftable(7, 6).to_rows() == F.SMA_7_14


@pytest.mark.parametrize("m, t", [(4, 4), (5, 4)])
def test_heffter_route_right_half_is_negation(fresh_catalog, m, t):
    g = sma_double_via_heffter(m, t)
    assert verify(g, ArraySpec.double(m, t)).is_valid_sma
    left, right = halves(g)
    assert right == {k: -v for k, v in left.items()}


@pytest.mark.parametrize("m, t", [(8, 4), (9, 6)])
def test_shiftable_route_right_half_moves_outward(m, t):
    g = sma_double_via_shiftable(m, t)
    assert verify(g, ArraySpec.double(m, t)).is_valid_sma
    left, right = halves(g)
    k = m * t // 2
    assert right == {key: v + k if v > 0 else v - k for key, v in left.items()}
    assert sorted(right.values()) == [v for v in range(-2 * k, 2 * k + 1) if abs(v) > k]


def test_move_outward():
    g = move_outward(SignedGrid.from_rows([[1, -2]]), 5)
    assert g.to_rows() == [[6, -7]]


def test_dispatch_records_method():
    assert construct_double_rectangle(4, 3).meta["method"] == "double.heffter"
    assert construct_double_rectangle(7, 6).meta["method"] == "double.shiftable"


@pytest.mark.parametrize("m, t", [(5, 5), (3, 3), (2, 2)])
def test_dispatch_refuses(m, t):
    with pytest.raises(UnsupportedParameters):
        construct_double_rectangle(m, t)

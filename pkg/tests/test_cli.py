import json

import pytest

import figures as F
from signed_magic.cli import (
    GridParseError,
    classify,
    grid_from_json,
    grid_from_text,
    grid_to_json,
    grid_to_text,
    load_grid,
    main,
)
from signed_magic.core import SignedGrid


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_construct_text_renders_reference(capsys):
    code, out, _ = run(capsys, "construct", "square", "--n", "7", "--t", "5", "--format", "text")
    assert code == 0
    grid, s, t = grid_from_text(out)
    assert (s, t) == (5, 5)
    assert grid.to_rows() == F.SMS_7_5
    assert out.splitlines()[0] == "# 7 7 5 5"


def test_construct_json_round_trip(capsys, tmp_path):
    out_file = tmp_path / "g.json"
    assert run(capsys, "construct", "double", "--m", "7", "--t", "6", "--out", str(out_file))[0] == 0
    doc = json.loads(out_file.read_text())
    assert doc["meta"]["method"] == "double.shiftable"
    assert doc["cells"][0] == {"r": 1, "c": 1, "v": 1}
    code, out, _ = run(capsys, "verify", str(out_file))
    assert code == 0 and json.loads(out)["is_valid_sma"]


def test_construct_trivial(capsys):
    code, out, _ = run(capsys, "construct", "tight", "--rows", "1", "--cols", "1", "--format", "text")
    assert code == 0 and out.splitlines()[1].strip() == "0"


def test_construct_unsupported(capsys):
    code, _, err = run(capsys, "construct", "tight", "--rows", "2", "--cols", "5")
    assert code == 2 and "mod 4" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["construct", "tight", "--rows", "x"])
    assert exc.value.code == 64


@pytest.mark.parametrize("rows, shiftable", [(F.SMA_2_4, True), (F.SMA_3_4, False)])
def test_verify_reports_shiftable(capsys, tmp_path, rows, shiftable):
    g = SignedGrid.from_rows(rows)
    path = tmp_path / "g.txt"
    path.write_text(grid_to_text(g, g.n, g.m))
    code, out, _ = run(capsys, "verify", str(path))
    report = json.loads(out)
    assert code == 0 and report["is_shiftable"] is shiftable


def test_verify_names_failures(capsys, tmp_path):
    rows = [list(r) for r in F.SMA_3_4]
    rows[0][0] = 0
    path = tmp_path / "bad.txt"
    path.write_text(grid_to_text(SignedGrid.from_rows(rows), 4, 3))
    code, out, _ = run(capsys, "verify", str(path))
    report = json.loads(out)
    assert code == 1
    assert report["failing_rows"] == [1] and report["failing_cols"] == [1]


@pytest.mark.parametrize("text", ["nonsense", "# 2 2 2\n1 -1\n", "{not json", '{"m": 1}', "# 1 2 2 1\n1\n"])
def test_verify_parse_errors(capsys, tmp_path, text):
    path = tmp_path / "x"
    path.write_text(text)
    assert run(capsys, "verify", str(path))[0] == 65


@pytest.mark.parametrize(
    "argv, expected",
    [
        (("5", "5", "1", "1"), "NotExists"),
        (("5", "10", "10", "5"), "Unknown"),
        (("4", "8", "6", "3"), "Exists (double.heffter)"),
        (("3", "4", "4", "3"), "Exists (tight.odd_even)"),
    ],
)
def test_decide(capsys, argv, expected):
    code, out, _ = run(capsys, "decide", *argv)
    assert code == 0 and out.startswith(expected)


def test_decide_uncharacterized(capsys):
    code, _, err = run(capsys, "decide", "2", "4", "2", "1")
    assert code == 2 and "not characterized" in err


def test_classify_order():
    assert classify(5, 10, 10, 5)[0] == "double"
    assert classify(4, 4, 3, 3)[0] == "square"
    assert classify(3, 4, 4, 3)[0] == "tight"


def test_oracle_commands(capsys):
    code, out, _ = run(capsys, "oracle", "--spec", "2,5,5,2")
    assert code == 0 and out.startswith("none (exhaustive)")
    code, out, _ = run(capsys, "oracle", "--spec", "2,3,3,2")
    assert code == 0 and out.startswith("exists")
    code, out, _ = run(capsys, "oracle", "--spec", "6,6,6,6", "--max-cells", "14")
    assert code == 3 and out.startswith("inconclusive")
    code, out, _ = run(capsys, "oracle", "--spec", "2,3,3,2", "--count")
    assert out.splitlines()[0] == "count 12"


def test_catalog_add_and_list(capsys, tmp_path, fresh_catalog):
    from signed_magic.providers import tight_heffter

    h = tight_heffter.__wrapped__(4, 4)
    path = tmp_path / "h.json"
    path.write_text(json.dumps(grid_to_json(h.grid, 4, 4)))
    (fresh_catalog / "tight_heffter-4x4.json").unlink()
    code, out, _ = run(capsys, "catalog", "add", str(path))
    assert code == 0 and out.strip() == "stored tight_heffter-4x4"
    assert "tight_heffter-4x4" in run(capsys, "catalog", "list")[1].split()
    assert run(capsys, "catalog", "gc")[0] == 0


def test_catalog_add_rejects_invalid(capsys, tmp_path, fresh_catalog):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(grid_to_json(SignedGrid.from_rows([[1, 2], [3, 4]]), 2, 2)))
    assert run(capsys, "catalog", "add", str(path), "--key", "tight_heffter-2x2")[0] == 1


def test_seed_flag_accepted(capsys):
    assert run(capsys, "--seed", "7", "decide", "3", "3", "3", "3")[0] == 0


def test_json_format_helpers():
    g = SignedGrid.from_rows(F.SMS_6_3).with_meta(method="m")
    doc = grid_to_json(g, 3, 3)
    back, s, t = grid_from_json(doc)
    assert back == g and (s, t) == (3, 3) and back.meta["method"] == "m"
    assert load_grid(json.dumps(doc))[0] == g
    with pytest.raises(GridParseError):
        grid_from_json({**doc, "cells": doc["cells"] + doc["cells"][:1]})


def test_text_is_stable():
    g = SignedGrid.from_rows(F.SMS_6_3)
    assert grid_to_text(g, 3, 3) == grid_to_text(grid_from_text(grid_to_text(g, 3, 3))[0], 3, 3)

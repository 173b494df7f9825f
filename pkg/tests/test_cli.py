import json

import pytest

from trisym import (
    labelled_isomorphic,
    load_three_way_map,
    parse_tree,
    save_three_way_map,
    three_way_from_rooted,
    tree_to_text,
)
from trisym.cli import main
from trisym.maps import KIND_MULTISET, KIND_SYMBOL


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def rooted_tree_file(tmp_path, five_leaf_rooted):
    p = tmp_path / "rooted.tree"
    p.write_text(tree_to_text(five_leaf_rooted))
    return str(p)


@pytest.fixture
def unrooted_tree_file(tmp_path, five_leaf_unrooted):
    p = tmp_path / "unrooted.tree"
    p.write_text(tree_to_text(five_leaf_unrooted))
    return str(p)


@pytest.fixture
def bad_map_file(tmp_path, locally_consistent_map):
    p = tmp_path / "bad.tsv"
    p.write_text(save_three_way_map(locally_consistent_map))
    return str(p)


def test_map_from_tree_roundtrip(capsys, tmp_path, rooted_tree_file, five_leaf_rooted):
    out_path = tmp_path / "map.tsv"
    code, _, _ = run(capsys, "map-from-tree", rooted_tree_file, "-o", str(out_path))
    assert code == 0
    d = load_three_way_map(out_path.read_text(), KIND_MULTISET)
    assert d == three_way_from_rooted(five_leaf_rooted)


def test_map_from_tree_then_reconstruct(capsys, tmp_path, rooted_tree_file,
                                        five_leaf_rooted):
    map_path = tmp_path / "map.tsv"
    run(capsys, "map-from-tree", rooted_tree_file, "-o", str(map_path))
    tree_out = tmp_path / "back.txt"
    code, _, _ = run(capsys, "reconstruct", str(map_path),
                     "--codomain", "multiset", "-o", str(tree_out))
    assert code == 0
    text = tree_out.read_text()
    assert text.startswith("verdict: representable")
    rebuilt = parse_tree("\n".join(text.splitlines()[-2:]))
    assert labelled_isomorphic(rebuilt, five_leaf_rooted)


def test_reconstruct_negative_exit(capsys, tmp_path, bad_map_file):
    code, out, _ = run(capsys, "reconstruct", bad_map_file, "--codomain", "multiset")
    assert code == 1
    assert "not-representable" in out


def test_check_clean_and_violations(capsys, tmp_path, rooted_tree_file, bad_map_file):
    map_path = tmp_path / "map.tsv"
    run(capsys, "map-from-tree", rooted_tree_file, "-o", str(map_path))
    code, out, _ = run(capsys, "check", str(map_path), "--conditions", "P")
    assert code == 0 and out.strip() == "clean"
    code, out, _ = run(capsys, "check", bad_map_file, "--conditions", "P")
    assert code == 1
    assert "P1" in out


def test_check_lists_violations_on_block_map(capsys, tmp_path, block_value_map):
    p = tmp_path / "block.tsv"
    p.write_text(save_three_way_map(block_value_map))
    code, out, _ = run(capsys, "check", str(p), "--conditions", "P")
    assert code == 1
    assert any(line.startswith("P1") for line in out.splitlines())


def test_check_json_report(capsys, bad_map_file):
    code, out, _ = run(capsys, "check", bad_map_file, "--conditions", "P",
                       "--format", "json")
    assert code == 1
    payload = json.loads(out)
    assert payload["conditions"] == "P"
    assert payload["violations"][0]["kind"] == "P1"
    assert payload["violations"][0]["witness"] == ["1", "2", "3", "4", "5"]


def test_check_m_on_plain_map(capsys, tmp_path, unrooted_tree_file):
    map_path = tmp_path / "plain.tsv"
    run(capsys, "map-from-tree", unrooted_tree_file, "-o", str(map_path))
    code, out, _ = run(capsys, "check", str(map_path), "--conditions", "M")
    assert code == 0 and out.strip() == "clean"


def test_farris_on_tree(capsys, tmp_path, unrooted_tree_file):
    out_path = tmp_path / "rooted.tree"
    code, _, _ = run(capsys, "farris", unrooted_tree_file, "--leaf", "1",
                     "-o", str(out_path))
    assert code == 0
    rooted = parse_tree(out_path.read_text())
    assert rooted.flavor == "rooted"
    assert set(rooted.leaf_order) == {"2", "3", "4", "5"}


def test_farris_on_map(capsys, tmp_path, unrooted_tree_file):
    map_path = tmp_path / "plain.tsv"
    run(capsys, "map-from-tree", unrooted_tree_file, "-o", str(map_path))
    code, out, _ = run(capsys, "farris", str(map_path), "--leaf", "5")
    assert code == 0
    assert out.splitlines()[0] == "x y value"
    assert "1 2 B" in out


def test_census_output(capsys):
    code, out, _ = run(capsys, "census", "--leaves", "4", "--symbols", "2",
                       "--flavor", "rooted")
    assert code == 0
    assert "shapes: 26" in out
    assert "labelled: 52" in out


def test_census_json(capsys):
    code, out, _ = run(capsys, "census", "--leaves", "4", "--symbols", "2",
                       "--flavor", "unrooted", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["shapes"] == 4


def test_cross_validate_agreement(capsys, tmp_path, rooted_tree_file, bad_map_file):
    map_path = tmp_path / "map.tsv"
    run(capsys, "map-from-tree", rooted_tree_file, "-o", str(map_path))
    code, out, _ = run(capsys, "cross-validate", str(map_path),
                       "--codomain", "multiset")
    assert code == 0 and "agree" in out
    code, out, _ = run(capsys, "cross-validate", bad_map_file,
                       "--codomain", "multiset")
    assert code == 0  # all three agree the map is not representable
    assert "not-representable" in out


def test_parse_error_exit_code(capsys, tmp_path):
    p = tmp_path / "broken.tsv"
    p.write_text("x y z value\n1 2 3 3A\n")
    code, _, err = run(capsys, "check", str(p), "--conditions", "P")
    assert code == 2
    assert "error" in err


def test_missing_file_exit_code(capsys):
    code, _, err = run(capsys, "check", "/nonexistent/file.tsv", "--conditions", "P")
    assert code == 2


def test_reports_are_deterministic(capsys, bad_map_file):
    _, first, _ = run(capsys, "check", bad_map_file, "--conditions", "P")
    _, second, _ = run(capsys, "check", bad_map_file, "--conditions", "P")
    assert first == second

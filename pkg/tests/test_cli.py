"""Command-line interface: output formats, exit codes, determinism."""

import json
from fractions import Fraction as F

import pytest

from flatklein import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def test_distance_text(capsys):
    code, out = run(capsys, "distance", "--P", "1/4,0", "--Q", "1/4,5/8",
                    "--format", "text")
    assert code == 0
    assert out == "d^2 = 25/64\nd   = 0.625000000000\n"


def test_distance_json_and_digits(capsys):
    code, out = run(capsys, "distance", "--P", "0,0", "--Q", "1/4,1/2")
    assert code == 0
    data = json.loads(out)
    assert data == {"d_squared": "5/16", "d": "0.559016994374"}

    _, out = run(capsys, "distance", "--P", "0,0", "--Q", "1/4,1/2",
                 "--digits", "4", "--format", "text")
    assert "d   = 0.5590\n" in out


def test_geodesics_text(capsys):
    code, out = run(capsys, "geodesics", "--P", "1/4,0", "--Q", "1/4,5/8",
                    "--format", "text")
    assert code == 0
    assert out == ("3 minimal geodesic(s) from (1/4, 0):\n"
                   "  -> (-1/4, -3/8)\n"
                   "  -> (1/4, 5/8)\n"
                   "  -> (3/4, -3/8)\n")


def test_polytope_text_and_json(capsys):
    code, out = run(capsys, "polytope", "--P", "1/4,0", "--format", "text")
    assert code == 0
    assert out == ("cell at P = (1/4, 0)\n"
                   "  halfspaces: 8\n"
                   "  vertices:   6 (StandardMinus 3, StandardPlus 3)\n"
                   "  faces:      dim 0: 6, dim 1: 6, dim 2: 1\n")

    code, out = run(capsys, "polytope", "--P", "1/4,0")
    data = json.loads(out)
    assert data["n"] == 2
    assert len(data["vertices"]) == 6


def test_strata_classify_text(capsys):
    code, out = run(capsys, "strata", "--P", "1/4,1/4,1/4,1/4,1/4,1/4,1/3",
                    "--format", "text")
    assert code == 0
    assert "domain  iiiiii|i" in out
    assert "dim     1" in out
    assert "negs    [[0, 1, 2, 3, 4, 5]]" in out
    assert "coincidence stratum" in out


def test_strata_catalog_table(capsys):
    code, out = run(capsys, "strata", "--catalog", "2", "--format", "text")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "4 strata for n = 2"
    assert lines[2].startswith("i|i       2")
    assert lines[5].startswith("p|.       0")


def test_plan_text(capsys):
    code, out = run(capsys, "plan", "--P", "1/4,0", "--Q", "1/4,5/8",
                    "--format", "text", "--samples", "3")
    assert code == 0
    assert out == ("index    1 (stratum 1 + face 0)\n"
                   "face     ['s+0', 's+1']\n"
                   "lift     (1/4, 5/8)\n"
                   "  sample (1/4, 0)\n"
                   "  sample (1/4, 5/16)\n"
                   "  sample (1/4, 5/8)\n")


def test_figure_svg_labels(capsys):
    code, out = run(capsys, "figure", "--kind", "hexagon")
    assert code == 0
    assert out.startswith("<svg ")
    assert out.endswith("</svg>\n")
    for label in ("V+", "V-", "C--", "C-+", "C+-", "C++", ">P<"):
        assert label in out


def test_figure_mesh_off(capsys):
    code, out = run(capsys, "figure", "--kind", "mesh")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "OFF"
    assert lines[1] == "18 12 28"
    # every facet row references valid vertex ids and closes a polygon
    for row in lines[2 + 18:]:
        k, *ids = row.split()
        assert int(k) == len(ids) >= 3
        assert all(0 <= int(i) < 18 for i in ids)


def test_outputs_are_deterministic(capsys):
    _, first = run(capsys, "figure", "--kind", "hexagon")
    _, second = run(capsys, "figure", "--kind", "hexagon")
    assert first == second
    _, v1 = run(capsys, "verify", "--n", "2", "--samples", "2", "--seed", "3")
    _, v2 = run(capsys, "verify", "--n", "2", "--samples", "2", "--seed", "3")
    assert v1 == v2


def test_out_file(tmp_path, capsys):
    target = tmp_path / "cell.svg"
    code, out = run(capsys, "polytope", "--P", "1/4,0", "--format", "svg",
                    "--out", str(target))
    assert code == 0
    assert out == ""
    assert target.read_text().startswith("<svg ")


def test_verify_passes(capsys):
    code, out = run(capsys, "verify", "--n", "3", "--samples", "3", "--seed", "7")
    assert code == 0
    assert out.rstrip().endswith("pass")
    assert out.count("trial") == 3
    assert "FAIL" not in out


def test_verify_reports_failure(monkeypatch, capsys):
    monkeypatch.setattr(cli, "brute_distance", lambda y, z: F(999))
    code, out = run(capsys, "verify", "--n", "2", "--samples", "1", "--seed", "0")
    assert code == 1
    assert "FAIL" in out
    assert "distance mismatch" in out


def test_malformed_point_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["distance", "--P", "1/4,nope", "--Q", "0,0"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_dimension_mismatch_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["polytope", "--P", "1/4,0", "--n", "3"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_value_error_exits_2(capsys):
    code = cli.main(["polytope", "--P", "1/4,0", "--format", "off"])
    assert code == 2
    err = capsys.readouterr().err
    assert "error:" in err


def test_strata_requires_exactly_one_mode(capsys):
    with pytest.raises(SystemExit):
        cli.main(["strata", "--format", "text"])
    with pytest.raises(SystemExit):
        cli.main(["strata", "--P", "1/4,0", "--catalog", "2"])
    capsys.readouterr()

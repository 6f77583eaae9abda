"""Batch front-end: determinism, golden files, exit codes, SVG output."""

import json
import os
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from plugflow import cli
from plugflow.plug import plug_from_json

FIXTURES = Path(__file__).parent / "fixtures"


def run(argv):
    return cli.main([str(a) for a in argv])


# -- plug --------------------------------------------------------------------------

def test_cmd_plug_roundtrip(tmp_path):
    out = tmp_path / "plug.json"
    assert run(["plug", "--n", 1, "--out", out]) == 0
    doc = json.loads(out.read_text())
    assert doc["n"] == 1
    assert len(doc["tori"]) == 8
    spec = plug_from_json(out.read_text())
    assert spec.n == 1


def test_cmd_plug_n2_annulus_counts(tmp_path):
    out = tmp_path / "plug2.json"
    assert run(["plug", "--n", 2, "--out", out]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["tori"]) == 16
    counts = sorted({len(t["annuli"]) for t in doc["tori"]})
    assert counts == [2 * i + 2 for i in range(1, 9)]


# -- invariants ---------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2])
def test_invariants_golden(tmp_path, n):
    out = tmp_path / "inv.json"
    assert run(["invariants", "--n", n, "--k", 7, "--out", out]) == 0
    golden = (FIXTURES / f"golden_invariants_n{n}_k7.json").read_bytes()
    assert out.read_bytes() == golden


def test_invariants_example_row(tmp_path):
    out = tmp_path / "inv.json"
    run(["invariants", "--n", 1, "--k", 7, "--out", out])
    doc = json.loads(out.read_text())
    assert doc["rows"][0]["handedness_by_m"] == ["R", "L", "L"]
    assert [r["cluster_size"] for r in doc["rows"]] == [7, 11, 15, 19]


def test_invariants_rows_single_step(tmp_path):
    out = tmp_path / "inv.json"
    run(["invariants", "--n", 2, "--k", 7, "--out", out])
    for row in json.loads(out.read_text())["rows"]:
        h = row["handedness_by_m"]
        assert sum(1 for a, b in zip(h, h[1:]) if a != b) == 1


def test_invariants_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["invariants", "--n", 2, "--k", 7, "--out", a])
    run(["invariants", "--n", 2, "--k", 7, "--out", b])
    assert a.read_bytes() == b.read_bytes()


def test_invariants_rejects_zero_k(tmp_path):
    assert run(["invariants", "--n", 1, "--k", 0,
                "--out", tmp_path / "x.json"]) == cli.EXIT_USAGE


# -- distinguish -----------------------------------------------------------------------

def test_distinguish_writes_certificates(tmp_path):
    out = tmp_path / "certs"
    assert run(["distinguish", "--n", 2, "--k", 7, "--out", out]) == 0
    files = sorted(os.listdir(out))
    assert files == ["certificate_m1_m2.json", "certificate_m1_m3.json",
                     "certificate_m2_m3.json"]
    for f in files:
        doc = json.loads((out / f).read_text())
        assert doc["verdict"] == "Inequivalent"


def test_distinguish_pair_count_n3(tmp_path):
    out = tmp_path / "certs"
    assert run(["distinguish", "--n", 3, "--k", -7, "--out", out]) == 0
    assert len(os.listdir(out)) == 10


def test_distinguish_single_pair(tmp_path):
    out = tmp_path / "certs"
    assert run(["distinguish", "--n", 2, "--k", 7, "--m1", 1, "--m2", 2,
                "--out", out]) == 0
    assert os.listdir(out) == ["certificate_m1_m2.json"]


def test_distinguish_empty_pair_list_is_noop(tmp_path):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"n": 2, "k": 7, "pairs": [],
                                   "out": str(tmp_path / "certs")}))
    assert run(["--config", cfgfile, "distinguish"]) == 0
    assert not (tmp_path / "certs").exists()


def test_distinguish_inconclusive_pair_sets_exit_code(tmp_path):
    cfgfile = tmp_path / "cfg.json"
    # the pair (1, 2n) is outside the proven range yet inside [1, 2n-1]? no:
    # m2 = 2n is outside, so it is not expected Inequivalent; use an explicit
    # in-range request against a family where it cannot conclude
    cfgfile.write_text(json.dumps({"n": 1, "k": 7, "pairs": [[0, 1]],
                                   "out": str(tmp_path / "certs")}))
    assert run(["--config", cfgfile, "distinguish"]) == 0
    doc = json.loads((tmp_path / "certs" / "certificate_m0_m1.json").read_text())
    assert doc["verdict"] == "Inconclusive"


def test_usage_error_exit_code():
    assert run(["distinguish", "--n", 2, "--k", 7, "--m1", 1]) == cli.EXIT_USAGE


def test_unknown_command_usage():
    assert run(["frobnicate"]) == cli.EXIT_USAGE


# -- plot -------------------------------------------------------------------------------

def test_plot_svg_parses_and_counts_compact_leaves(tmp_path):
    out = tmp_path / "plot.svg"
    assert run(["plot", "--i", 1, "--out", out]) == 0
    root = ET.fromstring(out.read_text())
    ns = "{http://www.w3.org/2000/svg}"
    lines = [e for e in root.iter(f"{ns}line")]
    for fol in ("s", "u"):
        compact = [e for e in lines if e.get("class") == f"compact-{fol}"]
        assert len(compact) == 4


def test_plot_wrap_continuity(tmp_path):
    out = tmp_path / "plot.svg"
    run(["plot", "--i", 1, "--out", out])
    root = ET.fromstring(out.read_text())
    ns = "{http://www.w3.org/2000/svg}"
    polys = [e for e in root.iter(f"{ns}polyline")
             if e.get("class") == "leaf-s"]
    assert polys
    tops = 0
    for e in polys:
        pts = [tuple(map(float, p.split(","))) for p in e.get("points").split()]
        ys = [y for _, y in pts]
        # wrapped segments begin or end within 1e-6 * scale of the border
        if abs(ys[0]) < 1e-4 or abs(ys[0] - cli.SVG_Y_SCALE) < 1e-4:
            tops += 1
    assert tops > 0


def test_plot_rejects_bad_index(tmp_path):
    assert run(["plot", "--i", 0, "--out", tmp_path / "x.svg"]) == cli.EXIT_USAGE


def test_plot_no_seam_jumps(tmp_path):
    # leaves in the annulus straddling the chart seam must be split, never
    # drawn as a long horizontal jump across the canvas
    out = tmp_path / "plot.svg"
    run(["plot", "--i", 1, "--out", out])
    root = ET.fromstring(out.read_text())
    ns = "{http://www.w3.org/2000/svg}"
    width = 4 * cli.SVG_X_SCALE
    for e in root.iter(f"{ns}polyline"):
        pts = [tuple(map(float, p.split(","))) for p in e.get("points").split()]
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            assert abs(x1 - x0) < width / 2


# -- orbit-space ----------------------------------------------------------------------------

def test_orbit_space_json(tmp_path):
    out = tmp_path / "os.json"
    assert run(["orbit-space", "--n", 1, "--i", 1, "--out", out]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["lozenges"]) == 7
    assert doc["classification"] == {"tag": "C_i", "i": 1, "lozenges": 7}


def test_orbit_space_extended(tmp_path):
    out = tmp_path / "os.json"
    assert run(["orbit-space", "--n", 1, "--i", 1, "--extend", "us",
                "--out", out]) == 0
    doc = json.loads(out.read_text())
    assert doc["classification"]["tag"] == "C_i^us"
    assert len(doc["lozenges"]) == 9


def test_config_overrides(tmp_path):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"n": 2, "k": 7, "i": 3,
                                   "out": str(tmp_path / "os.json")}))
    assert run(["--config", cfgfile, "orbit-space"]) == 0
    doc = json.loads((tmp_path / "os.json").read_text())
    assert len(doc["lozenges"]) == 15


def test_crossing_model_config(tmp_path):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"n": 1, "k": 7, "mu": 4.0,
                                   "out": str(tmp_path / "certs")}))
    assert run(["--config", cfgfile, "distinguish"]) == 0


def test_invalid_crossing_model_is_internal_failure(tmp_path):
    assert run(["distinguish", "--n", 2, "--k", 7, "--mu", 1.05,
                "--out", tmp_path / "certs"]) == cli.EXIT_INTERNAL


def test_verdict_mismatch_exit_code(tmp_path, monkeypatch):
    from plugflow import distinguisher

    def fake(m1, m2, n, k):
        return distinguisher.DistinguishVerdict(
            distinguisher.INCONCLUSIVE, m1, m2, n, k, reason="stubbed")

    monkeypatch.setattr(distinguisher, "distinguish", fake)
    code = run(["distinguish", "--n", 2, "--k", 7, "--m1", 1, "--m2", 2,
                "--out", tmp_path / "certs"])
    assert code == cli.EXIT_VERDICT_MISMATCH

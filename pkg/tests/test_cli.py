import json

from ess import cli
from ess.builtins import builtin_names


def run(args, capsys):
    code = cli.main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_every_builtin(capsys):
    for name in ("circle", "wedge2", "torus2", "torus3", "trefoil", "figure8",
                 "zxf2", "torsfree", "minimal-check", "lyndon:6", "comm-p:3"):
        code, out, _ = run(["validate", "--builtin", name], capsys)
        assert code == 0, name
        assert "valid" in out


def test_unknown_builtin_is_input_error(capsys):
    code, _, err = run(["validate", "--builtin", "nope"], capsys)
    assert code == cli.EXIT_INPUT
    assert "unknown built-in" in err


def test_twisted_trefoil_d6(capsys):
    code, out, _ = run(["twisted", "--builtin", "trefoil", "--d", "6", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["twisted_betti"][1] == 1


def test_bounds_comm_p3(capsys):
    code, out, _ = run(["bounds", "--builtin", "comm-p:3", "--p", "3", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    row1 = [r for r in doc["rows"] if r["q"] == 1][0]
    assert (row1["b_twisted"], row1["beta_fp"], row1["b_fp"]) == (0, 1, 2)


def test_bounds_strict_exit_code(capsys):
    code, _, _ = run(["bounds", "--builtin", "torsfree", "--p", "2", "--strict"], capsys)
    assert code == cli.EXIT_STRICT
    code2, _, _ = run(["bounds", "--builtin", "torus2", "--p", "2", "--strict"], capsys)
    assert code2 == 0


def test_pages_circle_mod3(capsys):
    code, out, _ = run(
        ["pages", "--builtin", "circle", "--group-quotient", "Zmod:3",
         "--field", "Fp:3", "--R", "3", "--S", "3", "--json"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["window_collapse_page"] <= 3
    assert doc["homology_dims"] == [1, 1]
    last = [p for p in doc["pages"] if p["page"] == 3][0]
    survivors = {(e["s"], e["q"]): e["dim"] for e in last["entries"] if e["dim"]}
    assert survivors[(2, 1)] == 1 and (1, 1) not in survivors


def test_pages_needs_field(capsys):
    code, _, err = run(["pages", "--builtin", "trefoil"], capsys)
    assert code == cli.EXIT_INPUT
    assert "--field" in err


def test_decompose_zxf2(capsys):
    code, out, _ = run(
        ["decompose", "--builtin", "zxf2", "--field", "Q", "--q-range", "1:1", "--json"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    row = doc["decompositions"][0]
    assert row["t_minus_1_blocks"] == [1, 1]
    assert row["other_primary"] == [{"poly": "1 + t", "exp": 1, "mult": 1}]
    assert row["separated"] is False


def test_monodromy_torus2(capsys):
    code, out, _ = run(
        ["monodromy", "--builtin", "torus2", "--field", "Q",
         "--group-quotient", "Z", "--json"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["trivial_through_degree"] == [True, True, True]


def test_aomoto_and_universal(capsys):
    code, out, _ = run(
        ["aomoto", "--builtin", "torus2", "--field", "Q", "--group-quotient", "Z", "--json"],
        capsys,
    )
    assert code == 0
    assert json.loads(out)["beta"] == [0, 0, 0]
    code2, out2, _ = run(
        ["universal-aomoto", "--builtin", "torus2", "--field", "Q",
         "--spec-at", "1,1", "--json"],
        capsys,
    )
    assert code2 == 0
    doc2 = json.loads(out2)
    assert doc2["differentials"][0] == [["e1"], ["e2"]]
    assert doc2["specialization"]["beta"] == [0, 0, 0]


def test_universal_aomoto_refuses_nonminimal(capsys):
    code, _, err = run(
        ["universal-aomoto", "--builtin", "minimal-check", "--field", "Q"], capsys
    )
    assert code == cli.EXIT_INPUT
    assert "not minimal" in err


def test_alexander_text(capsys):
    code, out, _ = run(["alexander", "--builtin", "figure8"], capsys)
    assert code == 0
    assert "t^2 - 3*t + 1" in out


def test_json_roundtrip_byte_identical(capsys):
    for args in (
        ["twisted", "--builtin", "trefoil", "--d", "6", "--json"],
        ["decompose", "--builtin", "zxf2", "--field", "Q", "--json"],
        ["bounds", "--builtin", "torus2", "--p", "3", "--json"],
        ["validate", "--builtin", "torsfree", "--json"],
    ):
        code, out, _ = run(args, capsys)
        assert code == 0
        assert cli.emit_json(json.loads(out)) == out


def test_nu_inline_images(capsys):
    code, out, _ = run(
        ["betti", "--builtin", "zxf2", "--field", "Fp:2", "--json"], capsys
    )
    assert code == 0
    assert json.loads(out)["betti"] == [1, 3, 2]
    code2, out2, _ = run(
        ["twisted", "--builtin", "torus2", "--group-quotient", "Z",
         "--nu", "a=1,b=2", "--d", "4", "--json"],
        capsys,
    )
    assert code2 == 0


def test_input_file_path(tmp_path, capsys):
    doc = {"field": "Q", "group": "Z",
           "presentation": {"generators": ["x"], "relators": [], "nu": {"x": 1}}}
    path = tmp_path / "space.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(["betti", str(path), "--json"], capsys)
    assert code == 0
    assert json.loads(out)["betti"] == [1, 1]


def test_selftest_wiring(monkeypatch, capsys):
    from ess import selftest

    monkeypatch.setattr(selftest, "CRITERIA", [("ok", lambda: "fine")])
    code, _, _ = run(["selftest"], capsys)
    assert code == 0

    def boom():
        raise AssertionError("broken")

    monkeypatch.setattr(selftest, "CRITERIA", [("bad", boom)])
    code2, _, _ = run(["selftest"], capsys)
    assert code2 == cli.EXIT_CROSSCHECK


def test_builtin_names_listing():
    names = builtin_names()
    assert "torus2" in names and "lyndon:<d>" in names


def test_shipped_samples_match_generators():
    # the frozen instances in data/ document exactly what the generators emit
    from importlib import resources

    from ess.builtins import comm_p_document, lyndon_document

    for fname, doc in (("lyndon-6.json", lyndon_document(6)),
                       ("comm-p-3.json", comm_p_document(3))):
        shipped = json.loads(resources.files("ess.data").joinpath(fname).read_text())
        assert shipped == doc, fname

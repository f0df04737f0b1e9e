import json

import pytest

from hibi_lattices.cli import EXIT_ERROR, EXIT_FALSE, EXIT_OK, EXIT_USAGE, main

B3 = json.dumps({"elements": ["p1", "p2", "p3"], "covers": []})
DIAMOND = json.dumps({"elements": ["p1", "p2"], "covers": []})
BOWTIE = json.dumps({"elements": list("abcd"), "covers": [["a", "c"], ["a", "d"], ["b", "c"], ["b", "d"]]})


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_b3_marks_dispensable(capsys):
    code, out, _ = run(capsys, "classify", "--poset-json", B3)
    assert code == EXIT_FALSE
    assert "dispensable" in out


def test_classify_json_is_stable(capsys):
    code, out, _ = run(capsys, "classify", "--poset-json", DIAMOND, "--json")
    data = json.loads(out)
    assert code == EXIT_OK
    assert list(data) == ["poset", "lattice_size", "theorems", "witnesses", "counterexamples", "problems", "flags"]
    assert data["theorems"]["urc"] == {"a": True, "b": True, "c": True}


def test_classify_from_file(tmp_path, capsys):
    f = tmp_path / "p.json"
    f.write_text(BOWTIE)
    code, out, _ = run(capsys, "classify", "--poset", str(f), "--json")
    assert code == EXIT_FALSE
    assert set(json.loads(out)["theorems"]["hot"].values()) == {True}


def test_gb_b3_revlex(capsys):
    code, out, _ = run(capsys, "gb", "--poset-json", B3, "--order", "rank-revlex", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["size"] == 9


def test_gb_rank_lex_text(capsys):
    code, out, _ = run(capsys, "gb", "--poset-json", DIAMOND, "--order", "rank-lex")
    assert code == EXIT_OK and out.startswith("1 binomials")


def test_fiber(capsys):
    code, out, _ = run(capsys, "fiber", "--poset-json", B3, "--pair", "{},p1+p2+p3", "--json")
    assert code == EXIT_OK
    assert len(json.loads(out)["monomials"]) == 4
    code, out, _ = run(capsys, "fiber", "--poset-json", B3, "--pair", "1,2", "--json")
    assert code == EXIT_OK


def test_indispensable_exit_codes(capsys):
    assert run(capsys, "indispensable", "--poset-json", B3)[0] == EXIT_FALSE
    assert run(capsys, "indispensable", "--poset-json", BOWTIE)[0] == EXIT_OK


def test_rees(capsys):
    code, out, _ = run(capsys, "rees", "--poset-json", DIAMOND, "--json")
    data = json.loads(out)
    assert code == EXIT_OK and data["ok"]
    assert (len(data["hibi"]), len(data["special_linear"])) == (1, 4)
    assert run(capsys, "rees", "--poset-json", BOWTIE)[0] == EXIT_FALSE


def test_verify_small(capsys):
    code, out, _ = run(capsys, "verify", "--max-n", "2", "--lattice-max", "4")
    assert code == EXIT_OK
    assert "0 counterexamples / 4 posets" in out


def test_verify_reports_rees_failures(capsys):
    code, out, _ = run(capsys, "verify", "--max-n", "3", "--lattice-max", "0", "--json")
    data = json.loads(out)
    assert code == EXIT_FALSE
    assert {c["theorem"] for c in data["counterexamples"]} == {"rees"}


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "3")
    assert code == EXIT_OK and len(out.splitlines()) == 19
    code, out, _ = run(capsys, "enumerate", "--n", "4", "--iso")
    assert len(out.splitlines()) == 16


def test_errors_exit_2(capsys):
    code, _, err = run(capsys, "classify", "--poset-json", '{"elements": ["a"], "covers": [["a", "b"]]}')
    assert code == EXIT_ERROR and "UnknownLabel" in err
    assert run(capsys, "classify", "--poset-json", "{not json")[0] == EXIT_ERROR
    assert run(capsys, "classify", "--poset", "/nonexistent/p.json")[0] == EXIT_ERROR
    assert run(capsys, "enumerate", "--n", "9")[0] == EXIT_ERROR


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["classify"],
        ["classify", "--poset", "a.json", "--poset-json", "{}"],
        ["gb", "--poset-json", B3, "--order", "lex"],
        ["fiber", "--poset-json", B3],
    ],
)
def test_usage_errors_exit_64(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == EXIT_USAGE


def test_bad_pair_is_usage_error(capsys):
    assert run(capsys, "fiber", "--poset-json", B3, "--pair", "1")[0] == EXIT_USAGE


def test_degree_cap_env(monkeypatch, capsys):
    monkeypatch.setenv("HIBI_DEGREE_CAP", "nope")
    assert run(capsys, "gb", "--poset-json", DIAMOND)[0] == EXIT_USAGE
    monkeypatch.setenv("HIBI_DEGREE_CAP", "4")
    assert run(capsys, "gb", "--poset-json", B3)[0] == EXIT_OK

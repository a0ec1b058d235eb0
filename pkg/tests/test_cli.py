import json

import pytest
from pydantic import ValidationError

import main
from cli.cache import CacheStore
from cli.emit import render
from cli.models import CacheRecord, JobConfig, OutputFormat, Table
from coxeter.models import CoxeterSystem, Kind
from exceptions import CacheCorruptionError
from soergel.tools import p_canonical


def run(capsys, *argv):
    code = main.main(list(argv))
    return code, capsys.readouterr().out


def records(out):
    return [json.loads(line) for line in out.splitlines()]


def test_pcan_records_and_cache(tmp_path, capsys):
    argv = ["pcan", "--rank", "3", "--max-length", "3", "--cache-dir", str(tmp_path)]
    code, first = run(capsys, *argv)
    assert code == 0
    rows = records(first)
    assert len(rows) == 6
    assert rows[0] == {"p": "rational", "word": [], "expansion": [[[], [[1, 0]]]]}
    assert rows[1]["expansion"] == [[[], [[1, 1]]], [[1], [[1, 0]]]]
    assert len(list(tmp_path.glob("*.json"))) == 6
    code, second = run(capsys, *argv)
    assert code == 0 and second == first


def test_pcan_affine_table(capsys):
    code, out = run(capsys, "pcan", "--kind", "affine", "--rank", "2", "--p", "2", "--max-length", "6", "--no-cache")
    assert code == 0
    rows = records(out)
    assert len(rows) == 13
    assert all(row["p"] == "2" for row in rows)
    assert max(len(row["word"]) for row in rows) == 6


def test_empty_length_bound(capsys):
    code, out = run(capsys, "pcan", "--rank", "2", "--max-length", "0", "--no-cache")
    assert code == 0
    assert records(out) == [{"p": "rational", "word": [], "expansion": [[[], [[1, 0]]]]}]


def test_klpoly_matches_rational_pcan(capsys):
    _, kl = run(capsys, "klpoly", "--rank", "3", "--max-length", "3")
    _, pcan = run(capsys, "pcan", "--rank", "3", "--max-length", "3", "--p", "rational", "--no-cache")
    assert kl == pcan


def test_csv_and_latex(capsys):
    code, out = run(capsys, "pcan", "--rank", "2", "--max-length", "1", "--no-cache", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["p,word,target,coeff,v_power", "rational,e,e,1,0", "rational,s1,e,1,1",
                                "rational,s1,s1,1,0"]
    _, out = run(capsys, "pcan", "--rank", "2", "--max-length", "1", "--no-cache", "--format", "latex")
    assert out.startswith("\\begin{tabular}{lllll}")
    assert "rational & s1 & e & 1 & 1 \\\\" in out
    _, out = run(capsys, "pcan", "--rank", "2", "--max-length", "0", "--no-cache", "--format", "yaml")
    assert records(out)[0]["word"] == []


def test_latex_escapes_multipartitions():
    table = Table(["lambda"], rows=[["2,2|3,1"]])
    assert "2,2$|$3,1 \\\\" in render(table, OutputFormat.LATEX)


@pytest.mark.parametrize("argv", [
    ["pcan"],
    ["pcan", "--rank", "3", "--p", "4"],
    ["pcan", "--rank", "3", "--p", "zero"],
    ["mult-schur", "--e", "2", "--charges", "1", "--m-vector", "3", "--lambda", "2", "--mu", "1,2"],
    ["mult-schur", "--e", "2", "--charges", "1", "--m-vector", "3"],
    ["weights", "--e", "3", "--weight", "1,2,2,3,3"],
    ["crystal", "--e", "2", "--charges", "11,0"],
])
def test_invalid_configs(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 2 and out == ""


def test_job_config_parsing():
    config = JobConfig(command="mult-schur", e=2, charges=[1], m_vector=[3], lam="2", mu="1,1",
                       primes=["2", "rational", "2"])
    assert config.primes == [2, None]
    assert str(config.lam) == "2" and config.mu.level == 1
    with pytest.raises(ValidationError):
        JobConfig(command="pcan", kind="affine", rank=1)
    with pytest.raises(ValidationError):
        JobConfig(command="sing")


def test_cache_store_round_trip(tmp_path):
    system = CoxeterSystem(Kind.AFFINE, 2)
    w = system.from_word([0, 1, 0])
    entry = p_canonical(system, w, 2)
    store = CacheStore(str(tmp_path))
    assert store.get(w, 2) is None
    path = store.put(entry)
    loaded = store.get(w, 2)
    assert loaded.element == w and loaded.prime == 2 and loaded.expansion == entry.expansion
    assert store.get(w, 3) is None
    assert store.verify() == (1, [])
    record = CacheRecord.model_validate_json(path.read_text())
    assert record.checksum == record.compute_checksum()


def test_cache_corruption_is_rejected(tmp_path):
    system = CoxeterSystem(Kind.FINITE, 3)
    w = system.from_word([1, 2])
    store = CacheStore(str(tmp_path))
    path = store.put(p_canonical(system, w, None))
    text = path.read_text()
    path.write_text(text.replace("[[1,0]]", "[[2,0]]", 1))
    with pytest.raises(CacheCorruptionError):
        store.get(w, None)
    assert store.verify() == (1, [path.name])
    path.write_text(text[: len(text) // 2])
    with pytest.raises(CacheCorruptionError):
        store.get(w, None)
    path.write_text(text)
    assert store.get(w, None).expansion == p_canonical(system, w, None).expansion
    other = system.from_word([2, 1])
    path.rename(store.path_for(other, None))
    with pytest.raises(CacheCorruptionError):
        store.get(other, None)


def test_corrupt_cache_exit_code(tmp_path, capsys):
    argv = ["pcan", "--rank", "2", "--max-length", "1", "--cache-dir", str(tmp_path)]
    assert run(capsys, *argv)[0] == 0
    for path in tmp_path.glob("*.json"):
        path.write_text("not json")
    code, out = run(capsys, *argv)
    assert code == 3 and out == ""


def test_mult_empty_multipartition(capsys):
    code, out = run(capsys, "mult-schur", "--e", "2", "--charges", "0", "--m-vector", "2", "--n", "0", "--p", "2")
    assert code == 0
    (row,) = records(out)
    assert row["value"] == 1 and row["lambda"] == "" and row["orbit"] == "same"


def test_mult_schur_matrix(capsys):
    code, out = run(capsys, "mult-schur", "--e", "2", "--charges", "1", "--m-vector", "3", "--n", "2",
                    "--p", "2", "--p", "rational")
    assert code == 0
    values = {(r["p"], r["lambda"], r["mu"]): r["value"] for r in records(out)}
    for p in ("2", "rational"):
        assert values[(p, "2", "2")] == values[(p, "1,1", "1,1")] == 1
        assert values[(p, "2", "1,1")] == 1
        assert values[(p, "1,1", "2")] == 0


def test_mult_orbit_gate_and_hecke(capsys):
    code, out = run(capsys, "mult-schur", "--e", "2", "--charges", "0", "--m-vector", "4",
                    "--lambda", "3", "--mu", "2,1")
    (row,) = records(out)
    assert code == 0 and row["value"] == 0 and row["orbit"] == "different" and row["alpha"] is None
    code, out = run(capsys, "mult-hecke", "--e", "2", "--charges", "1", "--m-vector", "3", "--n", "2")
    assert code == 0
    defined = {r["mu"] for r in records(out) if r["value"] is not None}
    assert defined == {"1,1"}


def test_mult_constraint_violation(capsys):
    code, out = run(capsys, "mult-schur", "--e", "2", "--charges", "1", "--m-vector", "4", "--n", "2")
    assert code == 2 and out == ""


def test_crystal_worked_example(capsys):
    code, out = run(capsys, "crystal", "--e", "2", "--charges", "11,0", "--lambda", "2,2|3,1,1,1")
    assert code == 0
    zero, one = records(out)
    assert zero == {"residue": 0, "signature": "-++", "reduced": "+", "f": "2,2|3,1,1,1,1", "e": None,
                    "f*": "2,2|3,2,1,1", "e*": "2,2|2,1,1,1", "sigma": "2,2|3,1,1,1,1"}
    assert one == {"residue": 1, "signature": "+-++-", "reduced": "++-", "f": "2,2|4,1,1,1", "e": "2,2|3,1,1",
                   "f*": "2,2,1|3,1,1,1", "e*": None, "sigma": None}


def test_crystal_word(capsys):
    code, out = run(capsys, "crystal", "--e", "2", "--charges", "0", "--lambda", "3", "--word", "1")
    assert code == 0
    assert records(out)[-1] == {"word": [1], "sigma": "4,1"}
    code, _ = run(capsys, "crystal", "--e", "2", "--charges", "0", "--lambda", "3", "--word", "0")
    assert code == 2


def test_weights_chain(capsys):
    code, out = run(capsys, "weights", "--kind", "affine", "--e", "3", "--weight", "0,0,0,2,3,3", "--color", "0")
    assert code == 0
    rows = records(out)
    assert [r["weight"] for r in rows] == ["(000233)", "(001233)", "(011233)", "(111233)", "(111234)", "(111244)"]
    assert rows[-1]["dot"] is None and rows[0]["dot"] is not None
    code, out = run(capsys, "weights", "--e", "3", "--weight", "1,2,2,3,3", "--word", "2,2")
    assert [r["weight"] for r in records(out)] == ["(12233)", "(12333)", "(13333)"]
    code, _ = run(capsys, "weights", "--e", "3", "--weight", "1,2,2,3,3", "--word", "2,2,2")
    assert code == 2


def test_verify(tmp_path, capsys):
    code, out = run(capsys, "verify", "--cache-dir", str(tmp_path))
    assert code == 0
    rows = records(out)
    assert {r["suite"] for r in rows} == {"hom-formula", "kl-oracle", "dot-families", "bubbles",
                                          "wedge-intertwiner", "coset-intervals", "cache"}
    assert all(r["passed"] for r in rows)
    (tmp_path / "bogus.json").write_text("{}")
    code, out = run(capsys, "verify", "--cache-dir", str(tmp_path))
    assert code == 3
    assert [r["suite"] for r in records(out) if not r["passed"]] == ["cache"]

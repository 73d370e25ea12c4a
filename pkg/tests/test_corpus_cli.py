import json

import pytest

from tailforge.algebra import LaurentPoly
from tailforge.cache import ResultCache, cache_key, default_dir
from tailforge.cli import main
from tailforge.corpus import corpus_text, default_corpus, parse_corpus
from tailforge.jones import kauffman_bracket

SMALL = "unknot: U\ntrefoil: BRAID s:2 -1 -1 -1\nhopf: BRAID s:2 -1 -1\n"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def records(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


# -- corpus -------------------------------------------------------------------------------

def test_default_corpus_shape():
    c = default_corpus()
    names = [e.name for e in c]
    assert len(names) == len(set(names))
    assert {"unknot", "trefoil_left", "trefoil_right", "figure_eight", "hopf_neg"} <= set(names)
    assert max(e.diagram.n for e in c) <= 8
    assert any("negative_braid" in e.tags for e in c)
    assert any("doubled" in e.tags for e in c)


def test_corpus_text_roundtrip():
    c = default_corpus()
    back, errors = parse_corpus(corpus_text(c))
    assert not errors
    assert [e.diagram for e in back] == [e.diagram for e in c]


def test_corpus_errors_collected():
    entries, errors = parse_corpus("a: U\n# comment\n\nb: X[1,2\nnocolon\nc: BRAID s:2 -1\n")
    assert [e.name for e in entries] == ["a", "c"]
    assert [e.lineno for e in errors] == [4, 5]
    assert errors[0].line == "b: X[1,2"


# -- cache --------------------------------------------------------------------------------

def test_cache_roundtrip(tmp_path):
    cache = ResultCache(tmp_path)
    key = cache_key("abc", "jones", {"N": 2})
    assert cache.get(key) is None
    cache.put(key, {"v": [1, 2]})
    assert cache.get(key) == {"v": [1, 2]}
    assert cache_key("abc", "jones", {"N": 3}) != key
    assert not list(tmp_path.rglob("*.tmp"))


def test_cache_env(monkeypatch, tmp_path):
    monkeypatch.setenv("TAILFORGE_CACHE", str(tmp_path))
    assert default_dir() == tmp_path


def test_cache_corrupt_file_ignored(tmp_path):
    cache = ResultCache(tmp_path)
    key = cache_key("k", "c", {})
    cache.put(key, 1)
    next(tmp_path.rglob("*.json")).write_text("{broken")
    assert cache.get(key) is None


# -- cli ----------------------------------------------------------------------------------

def test_jones_corpus_matches_module(capsys, tmp_path):
    f = tmp_path / "c.txt"
    f.write_text(SMALL)
    code, out, _ = run(capsys, "jones", "--corpus", str(f), "--json")
    assert code == 0
    recs = records(out)
    assert [r["name"] for r in recs] == ["unknot", "trefoil", "hopf"]
    entries, _ = parse_corpus(SMALL)
    for r, e in zip(recs, entries):
        assert LaurentPoly.from_json(r["result"]["bracket"]) == kauffman_bracket(e.diagram)


def test_empty_corpus(capsys, tmp_path):
    f = tmp_path / "e.txt"
    f.write_text("# nothing\n")
    code, out, _ = run(capsys, "jones", "--corpus", str(f), "--json")
    assert code == 0 and out == ""


def test_bad_line_reported_and_others_processed(capsys, tmp_path):
    f = tmp_path / "c.txt"
    f.write_text("unknot: U\nbad: X[1,2,3\nhopf: BRAID s:2 -1 -1\n")
    code, out, err = run(capsys, "jones", "--corpus", str(f), "--json")
    assert code != 0
    assert "X[1,2,3" in err and "line 2" in err
    assert [r["name"] for r in records(out)] == ["unknot", "hopf"]


def test_deterministic_and_parallel_order(capsys, tmp_path):
    f = tmp_path / "c.txt"
    f.write_text(SMALL)
    _, a, _ = run(capsys, "cjones", "--corpus", str(f), "--color", "2", "--json")
    _, b, _ = run(capsys, "cjones", "--corpus", str(f), "--color", "2", "--json", "--jobs", "2")
    assert a == b


def test_cache_hit_does_not_change_output(capsys, tmp_path):
    f = tmp_path / "c.txt"
    f.write_text(SMALL)
    cache = tmp_path / "cache"
    _, plain, _ = run(capsys, "tail", "--corpus", str(f), "--nmax", "4", "--json")
    _, first, _ = run(capsys, "tail", "--corpus", str(f), "--nmax", "4", "--json", "--cache", str(cache))
    files = sorted(cache.rglob("*.json"))
    assert len(files) == 3
    stamps = [p.stat().st_mtime_ns for p in files]
    _, second, _ = run(capsys, "tail", "--corpus", str(f), "--nmax", "4", "--json", "--cache", str(cache))
    assert plain == first == second
    assert [p.stat().st_mtime_ns for p in files] == stamps


def test_env_cache_used(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("TAILFORGE_CACHE", str(tmp_path / "env"))
    run(capsys, "jones", "unknot", "--json")
    assert list((tmp_path / "env").rglob("*.json"))


def test_single_diagram_forms(capsys):
    _, a, _ = run(capsys, "parse", "trefoil_left", "--json")
    _, b, _ = run(capsys, "parse", "BRAID", "s:2", "-1", "-1", "-1", "--json")
    _, c, _ = run(capsys, "parse", "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]", "--json")
    ra, rb, rc = (records(x)[0]["result"] for x in (a, b, c))
    assert ra == rb
    assert rc["n"] == 3 and rc["components"] == 1


def test_bstate_command(capsys):
    code, out, _ = run(capsys, "bstate", "trefoil_left", "--json")
    res = records(out)[0]["result"]
    assert code == 0
    assert (res["g"], res["n"], res["n_i"], res["adequate"]) == (2, 3, 0, True)
    assert res["reduced"] == {"circles": 1, "struts": 0}


def test_tail_nmax_one_degenerates(capsys):
    _, out, _ = run(capsys, "tail", "unknot", "--nmax", "1", "--json")
    res = records(out)[0]["result"]
    assert res["certified_degree"] == "1/2"


def test_cap_exceeded_is_skip(capsys):
    code, out, _ = run(capsys, "cjones", "unknot", "--color", "7", "--json")
    assert code == 0 and "skipped" in records(out)[0]


def test_kh_with_bounds(capsys):
    code, out, _ = run(capsys, "kh", "unknot", "--color", "2", "--twists", "2", "--verify-bounds", "--json")
    res = records(out)[0]["result"]
    assert code == 0
    assert res["front"] == 8 and res["bounds"]["pass"]
    assert [0, 0, 1] in res["table"]


def test_text_output(capsys):
    code, out, _ = run(capsys, "kh", "trefoil_left", "--color", "1")
    assert code == 0 and out.startswith("trefoil_left: shifts")


def test_bad_flags(capsys):
    assert run(capsys, "tail", "unknot", "--nmax", "0")[0] == 2
    with pytest.raises(SystemExit):
        main(["nonsense"])


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--only", "1", "--only", "2", "--json")
    s = json.loads(out)
    assert code == 0 and s["pass"]
    assert [r["status"] for r in s["results"]] == ["PASS", "PASS"]


def test_verify_inadequate_corpus_skips(capsys, tmp_path):
    f = tmp_path / "c.txt"
    f.write_text("kinked: X[1,1,2,2]\n")
    code, out, _ = run(capsys, "verify", "--corpus", str(f), "--only", "6", "--only", "7", "--json")
    s = json.loads(out)
    assert code == 0
    assert {r["status"] for r in s["results"]} == {"SKIPPED"}

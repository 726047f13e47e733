import json
import random
import subprocess
import sys

import pytest

from helpers import EX_ROWS, random_chain, random_ergodic
from syncwalk.cli import main
from syncwalk.formats import chain_to_json, graph_from_json, law_from_json, read_json
from syncwalk.mapping import verify_mapping_law
from syncwalk.sync import is_sync


def write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def ex_chain(tmp_path):
    return write(tmp_path / "chain.json", {"states": ["1", "2", "3"], "rows": EX_ROWS})


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_analyze_example(capsys, ex_chain):
    rep = run_json(capsys, "analyze", ex_chain, "--exact-min")
    assert rep["stationary"] == {"1": "1/3", "2": "2/9", "3": "4/9"}
    assert rep["entropy_rate"] == pytest.approx(2 / 3, abs=1e-9)
    assert rep["primitivity_index"] == 4 and rep["ergodic"] and rep["p_uniform"] is None
    bounds = rep["redundancy"]["bounds"]
    assert bounds["r_min"] == pytest.approx(1 / 3, abs=1e-6)
    assert bounds["R_max"] == pytest.approx(2 / 3, abs=1e-6)
    assert rep["redundancy"]["methods"]["r_min"] == "exact"
    assert rep["seed"] == 0


def test_analyze_heuristic_tag(capsys, ex_chain):
    rep = run_json(capsys, "analyze", ex_chain)
    assert rep["redundancy"]["methods"]["r_min"] == "heuristic"


def test_analyze_single_state(capsys, tmp_path):
    path = write(tmp_path / "one.json", {"states": ["a"], "rows": [["1"]]})
    rep = run_json(capsys, "analyze", path)
    assert rep["redundancy"]["bounds"] is None and "deterministic" in rep["redundancy"]["reason"]


def test_analyze_bad_row_sum(capsys, tmp_path):
    path = write(
        tmp_path / "bad.json", {"states": ["1", "2"], "rows": [["1/2", "1/2"], ["1/3", "1/3"]]}
    )
    code, _, err = run(capsys, "analyze", path)
    assert code == 2 and "RowSumNotOne" in err and "row 2" in err


def test_malformed_json_reports_line(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"states": ["1"],\n "rows": [[1]\n}')
    code, _, err = run(capsys, "analyze", str(path))
    assert code == 2 and "line 3" in err


def test_strict_requires_seed(capsys, ex_chain):
    code, _, err = run(capsys, "--strict", "analyze", ex_chain)
    assert code == 2 and "--seed" in err
    assert run_json(capsys, "--strict", "analyze", ex_chain, "--seed", "4")["seed"] == 4


def test_unknown_flag_rejected(ex_chain):
    with pytest.raises(SystemExit) as info:
        main(["analyze", ex_chain, "--bogus"])
    assert info.value.code == 2


def test_synclaw_round_trip(capsys, tmp_path, ex_chain):
    out = str(tmp_path / "law.json")
    assert run(capsys, "synclaw", ex_chain, "--x0", "2", "--out", out)[0] == 0
    data = read_json(out)
    assert data["target"] == "2"
    law, word = law_from_json(data)
    assert word is not None and is_sync(law)
    rep = run_json(capsys, "checksync", out)
    assert rep["sync"] and rep["stored_word_valid"]


def test_synclaw_periodic(capsys, tmp_path):
    path = write(tmp_path / "cyc.json", {"states": ["1", "2"], "rows": [[0, 1], [1, 0]]})
    assert run(capsys, "synclaw", path)[0] == 3


def test_checksync_non_sync(capsys, tmp_path):
    path = write(
        tmp_path / "perm.json", {"states": ["1", "2"], "support": [[2, 1]], "probs": ["1"]}
    )
    code, out, _ = run(capsys, "checksync", path)
    assert code == 4 and json.loads(out)["sync"] is False


def test_checksync_reports_shortest(capsys, tmp_path):
    law = {"states": ["1", "2", "3"], "support": [[3, 3, 1], [3, 1, 2]], "probs": ["1/2", "1/2"]}
    rep = run_json(capsys, "checksync", write(tmp_path / "l.json", law))
    assert rep["shortest_length"] == 4


def test_bad_stored_word(capsys, tmp_path):
    law = {
        "states": ["1", "2", "3"],
        "support": [[3, 3, 1], [3, 1, 2]],
        "probs": ["1/2", "1/2"],
        "sync_word": [1],
        "target": "3",
    }
    assert run(capsys, "checksync", write(tmp_path / "l.json", law))[0] == 2


def test_sample(capsys, tmp_path, ex_chain):
    law = str(tmp_path / "law.json")
    run(capsys, "synclaw", ex_chain, "--out", law)
    rep = run_json(capsys, "sample", law, "--n", "20000", "--seed", "3")
    assert sum(rep["counts"].values()) == 20000 and rep["tv_to_stationary"] < 0.02
    again = run_json(capsys, "sample", law, "--n", "20000", "--seed", "3")
    assert again == rep
    pattern = run_json(capsys, "sample", law, "--n", "2000", "--mode", "pattern")
    assert pattern["mode"] == "pattern"


def test_sample_zero_and_non_sync(capsys, tmp_path):
    ok = {"states": ["1", "2"], "support": [[1, 1], [2, 2]], "probs": ["1/2", "1/2"]}
    rep = run_json(capsys, "sample", write(tmp_path / "ok.json", ok), "--n", "0")
    assert rep["counts"] == {"1": 0, "2": 0}
    perm = {"states": ["1", "2"], "support": [[2, 1]], "probs": ["1"]}
    assert run(capsys, "sample", write(tmp_path / "p.json", perm))[0] == 4


def test_pattern_needs_word(capsys, tmp_path):
    law = {"states": ["1", "2"], "support": [[1, 1], [2, 2]], "probs": ["1/2", "1/2"]}
    assert run(capsys, "sample", write(tmp_path / "l.json", law), "--mode", "pattern")[0] == 2


def test_target_redundancy(capsys, tmp_path, ex_chain):
    out = str(tmp_path / "t.json")
    assert (
        run(capsys, "target-redundancy", ex_chain, "--r", "0.5", "--require-sync", "--out", out)[0]
        == 0
    )
    law, word = law_from_json(read_json(out))
    assert word is not None and is_sync(law)
    code, _, err = run(capsys, "target-redundancy", ex_chain, "--r", "0.9")
    assert code == 3 and "TargetOutOfRange" in err


def test_decompose_and_lift(capsys, tmp_path, ex_chain):
    out = str(tmp_path / "d.json")
    assert run(capsys, "decompose", ex_chain, "--strategy", "max-eps", "--out", out)[0] == 0
    lifted = run_json(capsys, "lift", out)
    assert lifted["entropy_rate"] == pytest.approx(lifted["law_entropy"], abs=1e-9)


def test_graph_and_dot(capsys, tmp_path):
    law = {"states": ["1", "2", "3"], "support": [[3, 3, 1], [3, 1, 2]], "probs": ["1/2", "1/2"]}
    path = write(tmp_path / "l.json", law)
    g = run_json(capsys, "graph", path)
    assert [r["id"] for r in g["roads"]][:2] == ["a^(1,1)", "a^(2,1)"]
    assert g["properties"] == {
        "constant_outdegree": True,
        "strongly_connected": True,
        "aperiodic": True,
    }
    assert g["sync_word"] is not None
    gpath = write(tmp_path / "g.json", g)
    uncolored = {
        "sites": g["sites"],
        "roads": [{k: v for k, v in r.items() if k != "color"} for r in g["roads"]],
    }
    found = run_json(capsys, "graph", write(tmp_path / "u.json", uncolored), "--search-coloring")
    assert found["sync_word"] is not None
    code, dot, _ = run(capsys, "export-dot", gpath)
    assert code == 0 and dot.count("->") == 6
    assert run(capsys, "export-dot", path)[1] == dot


def test_round_trip_fuzz(capsys, tmp_path):
    rng = random.Random(67)
    for i in range(25):
        Q = (
            random_ergodic(rng, rng.randint(1, 4))
            if i % 2
            else random_chain(rng, rng.randint(1, 4))
        )
        cpath = write(tmp_path / f"c{i}.json", chain_to_json(Q))
        lpath = str(tmp_path / f"l{i}.json")
        assert run(capsys, "decompose", cpath, "--out", lpath)[0] == 0
        law, _ = law_from_json(read_json(lpath))
        assert verify_mapping_law(law, Q)
        gpath = str(tmp_path / f"g{i}.json")
        assert run(capsys, "graph", lpath, "--out", gpath)[0] == 0
        graph_from_json(read_json(gpath))
        g2 = str(tmp_path / f"g2_{i}.json")
        assert run(capsys, "graph", gpath, "--out", g2)[0] == 0
        assert read_json(g2)["roads"] == read_json(gpath)["roads"]
        if i % 2:
            spath = str(tmp_path / f"s{i}.json")
            assert run(capsys, "synclaw", cpath, "--out", spath)[0] == 0
            assert law_from_json(read_json(spath))[1] is not None


def test_stdin_and_entry_point(ex_chain):
    text = open(ex_chain).read()
    res = subprocess.run(
        [sys.executable, "-m", "syncwalk", "analyze", "-"],
        input=text,
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(res.stdout)["stationary"]["2"] == "2/9"


def test_resource_cap_exit_code(capsys, tmp_path):
    law = {"states": ["1", "2", "3"], "support": [[3, 3, 1], [3, 1, 2]], "probs": ["1/2", "1/2"]}
    path = write(tmp_path / "l.json", law)
    code, _, err = run(capsys, "graph", path, "--search-coloring", "--cap", "2")
    assert code == 5 and "SearchSpaceTooLarge" in err

import json

import pytest

from diocurves.cli import (
    EXIT_INVALID_INPUT,
    EXIT_OK,
    EXIT_USAGE,
    Config,
    _read_config_file,
    main,
)
from diocurves.verify import RANK_DISCLAIMER


def run(argv):
    return main(list(argv))


def test_induce_happy_path(capsys):
    assert run(["induce", "{1,3,8}", "--N", "200"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out.strip())
    assert payload["version"] == 1
    assert payload["kind"] == "search"
    assert payload["triple"] == ["1", "3", "8"]
    assert payload["torsion"]["exact"] is True
    assert payload["score"]["N"] == 200
    assert payload["rank"]["lower_bound"] >= 1
    assert payload["quadruple_extension"]["values"] == ["0", "120"]


def test_induce_rejects_non_diophantine(capsys):
    assert run(["induce", "{1,2,3}"]) == EXIT_INVALID_INPUT
    assert run(["induce", "{1,2"]) == EXIT_INVALID_INPUT
    assert run(["induce", "{1,3,0}"]) == EXIT_INVALID_INPUT


def test_unknown_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == EXIT_USAGE


def test_verify_unknown_scope(capsys):
    assert run(["verify", "bogus-scope"]) == EXIT_USAGE


def test_dataset_unknown_id(capsys):
    assert run(["dataset", "no-such-record"]) == EXIT_USAGE


def test_dataset_dump_shape(capsys):
    assert run(["dataset"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 59
    rows = [json.loads(line) for line in lines]
    assert all(row["version"] == 1 for row in rows)
    ids = {row["id"] for row in rows}
    assert "s3-rank9" in ids and "s6-big" in ids


def test_dataset_single_record_full(capsys):
    assert run(["dataset", "s4-rank7"]) == EXIT_OK
    row = json.loads(capsys.readouterr().out.strip())
    assert row["claimed_rank"] == 7
    assert row["torsion_shape"] == [2, 4]
    assert len(row["points"]) == 7
    assert row["triple"] == ["22552/5129", "-5129/22552", "52463190/14458651"]


def test_verify_record_scope_passes(capsys):
    assert run(["verify", "s6-connell"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out
    assert RANK_DISCLAIMER.splitlines()[0] in out


def test_verify_section_symbol_alias(capsys):
    assert run(["verify", "§5-rank4"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "record-s5-rank4" in out


def test_sieve_small_grid_deterministic(tmp_path):
    out1 = tmp_path / "a.jsonl"
    out2 = tmp_path / "b.jsonl"
    args = ["sieve", "K_PLUSMINUS", "--numerators", "1:6",
            "--denominators", "1:2", "--keep", "1.0", "--N", "150"]
    assert run(args + ["--out", str(out1)]) == EXIT_OK
    assert run(args + ["--out", str(out2), "--jobs", "2"]) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()

    rows = [json.loads(line) for line in out1.read_text().splitlines()]
    skips = [r for r in rows if r["kind"] == "skip"]
    searches = [r for r in rows if r["kind"] == "search"]
    assert skips and searches
    # skips precede results; results sorted by descending score
    assert rows[:len(skips)] == skips
    scores = [r["score"]["value"] for r in searches]
    assert scores == sorted(scores, reverse=True)
    assert ["1", "3", "120"] in [r["triple"] for r in searches]


def test_sieve_bad_range():
    assert main(["sieve", "K_4K", "--numerators", "5",
                 "--denominators", "1:2"]) == EXIT_USAGE


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("N = 150\n# comment line\nheight-bound = 3.0\n")
    assert run(["induce", "1,3,8", "--config", str(cfg)]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["score"]["N"] == 150

    assert run(["induce", "1,3,8", "--config", str(cfg),
                "--N", "220"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["score"]["N"] == 220


def test_config_file_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("waffles = 7\n")
    assert run(["induce", "1,3,8", "--config", str(cfg)]) == EXIT_USAGE


def test_read_config_file_parsing(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# leading comment\nN=400\nkeep = 0.25\njobs=3\n\n")
    values = _read_config_file(str(cfg))
    # raw strings here; coercion happens when the Config is assembled
    assert values == {"N": "400", "keep": "0.25", "jobs": "3"}


def test_config_validation():
    with pytest.raises(ValueError):
        Config(N=0).validated()
    with pytest.raises(ValueError):
        Config(keep=0.0).validated()
    with pytest.raises(ValueError):
        Config(jobs=-1).validated()
    assert Config().validated().N == 1000

import json

import pytest

from rulebench.cli import main
from rulebench.corpus import Corpus, write_jsonl
from rulebench.evaluation import report_from_dict, evaluate_ruleset
from rulebench.index import build_index
from rulebench.corpus import Part
from rulebench.query import parse_query
from rulebench.ruleset import load_project, save_project


@pytest.fixture
def corpus_path(tmp_path):
    corpus = Corpus.from_records(
        [(f"a{i}", f"alpha common{i % 3}", ["Pos"]) for i in range(10)]
        + [(f"b{i}", f"beta common{i % 3}", ["Neg"]) for i in range(10)]
    )
    path = tmp_path / "corpus.jsonl"
    with open(path, "w", encoding="utf-8") as fh:
        write_jsonl(corpus, fh)
    return path


@pytest.fixture
def project_path(tmp_path, corpus_path, capsys):
    ppath = tmp_path / "p.json"
    assert main(["ingest", "--corpus", str(corpus_path), "--out", str(ppath)]) == 0
    assert main(["split", "--project", str(ppath), "--ratios", "0.5,0.2,0.3", "--seed", "1"]) == 0
    capsys.readouterr()
    return ppath


def _add_rule(ppath, class_name, query):
    project = load_project(ppath)
    project.ruleset.add_rule(class_name, parse_query(query))
    save_project(project, ppath)


class TestIngestSplit:
    def test_ingest_reports_counts(self, tmp_path, corpus_path, capsys):
        ppath = tmp_path / "p.json"
        assert main(["ingest", "--corpus", str(corpus_path), "--out", str(ppath)]) == 0
        out = capsys.readouterr().out
        assert "20 documents" in out and "2 classes" in out

    def test_split_reports_sizes(self, tmp_path, corpus_path, capsys):
        ppath = tmp_path / "p.json"
        main(["ingest", "--corpus", str(corpus_path), "--out", str(ppath)])
        capsys.readouterr()
        assert main(["split", "--project", str(ppath)]) == 0
        out = capsys.readouterr().out.strip()
        assert out == "train=4 validation=2 test=14"

    def test_default_split_on_1000_docs(self, tmp_path, capsys):
        corpus = Corpus.from_records(
            [(f"d{i}", f"tok{i}", ["L" + str(i % 4)]) for i in range(1000)]
        )
        cpath = tmp_path / "big.jsonl"
        with open(cpath, "w", encoding="utf-8") as fh:
            write_jsonl(corpus, fh)
        ppath = tmp_path / "big.json"
        main(["ingest", "--corpus", str(cpath), "--out", str(ppath)])
        capsys.readouterr()
        assert main(["split", "--project", str(ppath)]) == 0
        assert capsys.readouterr().out.strip() == "train=200 validation=100 test=700"

    def test_missing_corpus_is_data_error(self, tmp_path, capsys):
        assert main(["ingest", "--corpus", str(tmp_path / "no.jsonl"), "--out", str(tmp_path / "p.json")]) == 2

    def test_bad_ratios_usage_error(self, project_path, capsys):
        assert main(["split", "--project", str(project_path), "--ratios", "0.5,0.5"]) == 1
        assert main(["split", "--project", str(project_path), "--ratios", "0.9,0.9,0.9"]) == 1


class TestStats:
    def test_tsv_shape_and_determinism(self, project_path, capsys):
        args = ["stats", "--project", str(project_path), "--class", "Pos",
                "--part", "train", "--sort", "f1", "--limit", "5", "--min-df", "1"]
        assert main(args) == 0
        first = capsys.readouterr().out
        assert main(args) == 0
        second = capsys.readouterr().out
        assert first == second
        header, *rows = first.strip().splitlines()
        assert header.split("\t") == [
            "ngram", "df_in", "df_out", "class_size", "universe_size",
            "term_precision", "term_recall", "term_f1", "lift",
        ]
        assert rows and all(len(r.split("\t")) == 9 for r in rows)

    def test_unknown_class_eval_error(self, project_path, capsys):
        assert main(["stats", "--project", str(project_path), "--class", "Nope"]) == 3


class TestEvalQuery:
    def test_json_output(self, project_path, capsys):
        assert main([
            "eval-query", "--project", str(project_path),
            "--query", "alpha", "--class", "Pos", "--part", "train",
        ]) == 0
        body = json.loads(capsys.readouterr().out)
        assert body["precision"] == 1.0
        assert body["recall"] == 1.0
        assert body["query"] == "alpha"

    def test_dangling_operator_exit_1_with_position(self, project_path, capsys):
        assert main([
            "eval-query", "--project", str(project_path),
            "--query", "a AND", "--class", "Pos",
        ]) == 1
        err = capsys.readouterr().err
        assert "position 5" in err


class TestEvalRuleset:
    def test_planted_rules_all_ones(self, project_path, capsys):
        _add_rule(project_path, "Pos", "alpha")
        _add_rule(project_path, "Neg", "beta")
        assert main(["eval-ruleset", "--project", str(project_path), "--part", "test"]) == 0
        out = capsys.readouterr().out
        assert "overall" in out and "1.000" in out

    def test_json_round_trips_to_report(self, project_path, capsys):
        _add_rule(project_path, "Pos", "alpha")
        assert main(["eval-ruleset", "--project", str(project_path),
                     "--part", "validation", "--json"]) == 0
        body = json.loads(capsys.readouterr().out)
        report = report_from_dict(body)
        project = load_project(project_path)
        want = evaluate_ruleset(
            project.ruleset, project.corpus, build_index(project.corpus),
            project.split, Part.VALIDATION,
        )
        assert report == want

    def test_no_rules_is_eval_error(self, project_path, capsys):
        assert main(["eval-ruleset", "--project", str(project_path)]) == 3

    def test_no_split_is_eval_error(self, tmp_path, corpus_path, capsys):
        ppath = tmp_path / "nosplit.json"
        main(["ingest", "--corpus", str(corpus_path), "--out", str(ppath)])
        _add_rule(ppath, "Pos", "alpha")
        assert main(["eval-ruleset", "--project", str(ppath)]) == 3

    def test_corrupt_project_is_data_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["eval-ruleset", "--project", str(bad)]) == 2


class TestInduct:
    def test_preview_and_accept(self, project_path, capsys):
        args = ["induct", "--project", str(project_path), "--class", "Pos",
                "--min-df", "1", "--n-trees", "5", "--min-leaf", "1",
                "--min-precision", "0", "--min-recall", "0", "--seed", "3"]
        assert main(args) == 0
        preview = capsys.readouterr().out
        lines = preview.strip().splitlines()
        assert lines[0].split("\t") == ["precision", "recall", "f1", "query"]

        assert main(args + ["--accept"]) == 0
        capsys.readouterr()
        project = load_project(project_path)
        assert project.ruleset.rules
        assert all(r.note == "induced(seed=3)" for r in project.ruleset.rules)

    def test_preview_deterministic(self, project_path, capsys):
        args = ["induct", "--project", str(project_path), "--class", "Pos",
                "--min-df", "1", "--n-trees", "5", "--min-leaf", "1",
                "--min-precision", "0", "--min-recall", "0", "--seed", "9"]
        assert main(args) == 0
        a = capsys.readouterr().out
        assert main(args) == 0
        b = capsys.readouterr().out
        assert a == b


class TestUsage:
    def test_no_command(self, capsys):
        assert main([]) == 1

    def test_unknown_flag(self, project_path, capsys):
        assert main(["split", "--project", str(project_path), "--bogus"]) == 1

    def test_bad_addr_usage_error(self, project_path, capsys):
        assert main(["serve", "--project", str(project_path), "--addr", "nope"]) == 1

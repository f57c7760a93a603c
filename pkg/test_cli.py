#!/usr/bin/env python3
"""
Command-line tests: each subcommand run through main() with captured output
"""

import io
import json

import pytest

from main import main
from services.graph_core import gen_cycle, gen_moon_moser, parse_graph_text, write_edge_list


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def graph_file(tmp_path):
    def write(g, name="graph.txt"):
        path = tmp_path / name
        path.write_text(write_edge_list(g))
        return str(path)

    return write


def test_enumerate_cliques(capsys, graph_file):
    path = graph_file(gen_moon_moser(9))
    code, out, _ = run(capsys, "enumerate", "--class", "cliques", "--input", path)
    report = json.loads(out)
    assert code == 0
    assert report["payload"]["count"] == 27
    assert report["bound_satisfied"] is True
    assert report["command"].startswith("closedgraphs enumerate")
    assert len(report["input_digest"]) == 64


def test_enumerate_reads_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(write_edge_list(gen_cycle(5))))
    code, out, _ = run(capsys, "enumerate", "--class", "plexes", "--d", "1", "--csv")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "size,members"
    assert len(lines) == 6


def test_enumerate_timing(capsys, graph_file):
    path = graph_file(gen_cycle(6))
    _, out, _ = run(capsys, "enumerate", "--class", "independent-sets", "--input", path, "--timing")
    assert json.loads(out)["wall_time_s"] >= 0


def test_oracle_plexes(capsys, graph_file):
    path = graph_file(gen_cycle(5))
    code, out, _ = run(capsys, "oracle", "--predicate", "plex", "--d", "1", "--input", path)
    payload = json.loads(out)["payload"]
    assert code == 0
    assert payload["predicate"] == "plex(2)"
    assert payload["count"] == 5


def test_closure_of_cycle(capsys, graph_file):
    path = graph_file(gen_cycle(5))
    code, out, _ = run(capsys, "closure", "--input", path, "--co-c", "2")
    report = json.loads(out)
    assert code == 0
    assert report["closure"] == 2
    assert report["payload"]["c"] == 2
    assert "co_closed" in report["payload"]


def test_verify_m1_at_five(capsys):
    code, out, _ = run(capsys, "verify-bounds", "--suite", "m1", "--N", "5")
    payload = json.loads(out)["payload"]
    assert code == 0
    assert payload["max_count"] == 10
    assert payload["bound"] == pytest.approx(10)


def test_verify_moon_moser_csv(capsys):
    code, out, _ = run(capsys, "verify-bounds", "--suite", "moon-moser", "--N", "3", "4", "--csv")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].startswith("N,predicate")
    assert [line.split(",")[3] for line in lines[1:]] == ["3", "4"]


def test_verify_example1(capsys):
    code, out, _ = run(capsys, "verify-bounds", "--suite", "example1")
    payload = json.loads(out)["payload"]
    assert code == 0
    assert [entry["count"] for entry in payload["counts"]] == [1, 5, 15]
    assert payload["strictly_increasing"]


def test_verify_kappa_csv(capsys):
    code, out, _ = run(capsys, "verify-bounds", "--suite", "kappa", "--d", "2", "--csv")
    assert code == 0
    assert len(out.splitlines()) == 4


def test_verify_lemmas_on_input(capsys, graph_file):
    path = graph_file(gen_cycle(6))
    code, out, _ = run(capsys, "verify-bounds", "--suite", "lemmas", "--input", path)
    report = json.loads(out)
    assert code == 0
    assert report["payload"]["failure_count"] == 0
    assert report["input_digest"] is not None


def test_bound_violation_exits_two(capsys, monkeypatch):
    monkeypatch.setattr("services.combinatorics.count_maximal", lambda g, p: 0)
    code, out, _ = run(capsys, "verify-bounds", "--suite", "example1", "--n", "5")
    report = json.loads(out)
    assert code == 2
    assert report["bound_satisfied"] is False


def test_generate_round_trip(capsys):
    code, out, _ = run(capsys, "generate", "--family", "moon-moser", "--n", "9")
    assert code == 0
    assert out.startswith("# moon-moser")
    assert parse_graph_text(out) == gen_moon_moser(9)


def test_generate_is_deterministic(capsys):
    argv = ("generate", "--family", "augmented", "--n", "10", "--c", "2", "--seed", "7")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_bench_csv(capsys):
    code, out, _ = run(capsys, "bench", "--class", "cliques", "--c-min", "2", "--c-max", "3", "--n", "8")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].startswith("source,n,m,c,class")
    assert len(lines) == 3


def test_example1_counts_must_increase(capsys, monkeypatch):
    monkeypatch.setattr("commands.verify_bounds.verify_example1", lambda ell, n: 5)
    code, out, _ = run(capsys, "verify-bounds", "--suite", "example1")
    report = json.loads(out)
    assert code == 2
    assert report["bound_satisfied"] is False
    assert report["payload"]["strictly_increasing"] is False


def test_bench_workers_give_the_serial_rows(capsys):
    argv = ("bench", "--class", "cliques", "--c-min", "2", "--c-max", "4", "--n", "8")
    code, serial, _ = run(capsys, *argv)
    assert code == 0
    code, pooled, _ = run(capsys, *argv, "--threads", "2")
    assert code == 0

    def without_time(text):
        return [line.rsplit(",", 1)[0] for line in text.splitlines()]

    assert without_time(pooled) == without_time(serial)
    assert len(serial.splitlines()) == 4


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["enumerate"],
        ["enumerate", "--class", "plexes", "--input", "missing.txt"],
        ["enumerate", "--class", "cliques", "--threads", "2"],
        ["generate", "--family", "moon-moser", "--n", "7"],
        ["verify-bounds", "--suite", "m1", "--N", "9"],
        ["bench", "--class", "cliques", "--c-min", "3", "--c-max", "2"],
    ],
)
def test_usage_errors_exit_one(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err


def test_missing_class_parameter(capsys, graph_file):
    path = graph_file(gen_cycle(5))
    code, _, err = run(capsys, "enumerate", "--class", "plexes", "--input", path)
    assert code == 1
    assert "--d" in err


def test_malformed_input(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3 1\n0 7\n")
    code, _, err = run(capsys, "closure", "--input", str(path))
    assert code == 1
    assert "error:" in err


def test_limit_n(capsys, graph_file):
    path = graph_file(gen_cycle(8))
    code, _, err = run(capsys, "closure", "--input", path, "--limit-n", "5")
    assert code == 1
    assert "--limit-n" in err

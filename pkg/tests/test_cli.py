import io
import json
import subprocess
import sys

import pytest

from lletrec.bisim import iso
from lletrec.cli import main
from lletrec.corpus import SOURCES
from lletrec.syntax import alpha_eq, parse
from lletrec.termgraph import from_json


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, source in SOURCES.items():
        path = tmp_path / f"{name}.lam"
        path.write_text(source + "\n")
        paths[name] = str(path)
    return paths


def run(capsys, *argv, stdin: str | None = None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_maxshare_fix(capsys, files):
    code, out, _ = run(capsys, "maxshare", files["fix_unrolled"])
    assert code == 0 and alpha_eq(parse(out), parse(r"\f. let r = f r in r"))


def test_maxshare_flags(capsys, files):
    code, out, _ = run(capsys, "maxshare", "--unshare-dels", "--no-var-sharing", files["identity"])
    assert code == 0 and out.strip() == r"\x0. x0"


def test_equiv_exit_codes(capsys, files):
    assert run(capsys, "equiv", files["counter_eta"], files["counter"])[0] == 0
    assert run(capsys, "equiv", files["counter"], files["counter_other"])[0] == 1


def test_equiv_error_exit(capsys, tmp_path, files):
    bad = tmp_path / "bad.lam"
    bad.write_text(r"\x. (")
    code, out, err = run(capsys, "equiv", str(bad), files["fix"])
    assert code == 2 and out == "" and "expected" in err


def test_unfold(capsys, files):
    assert run(capsys, "unfold", "--depth", "0", files["fix"])[1] == "cut\n"
    assert run(capsys, "unfold", "--depth", "3", files["fix"])[1] == "lam(app(v0,app(v0,cut)))\n"
    out = run(capsys, "unfold", "--depth", "3", "--strategy", "innermost", files["fix"])[1]
    assert out == "lam(app(v0,app(v0,cut)))\n"


def test_parse_and_productive(capsys, files):
    assert run(capsys, "parse", files["fix"])[1] == r"\f. let r = f r in r" + "\n"
    assert run(capsys, "productive", files["nested_loop"])[1] == "false\n"
    assert run(capsys, "productive", files["counter"])[1] == "true\n"


def test_translate_formats(capsys, files):
    code, out, _ = run(capsys, "translate", "--semantics", "min", "--format", "json", files["fix"])
    assert code == 0 and len(json.loads(out)["vertices"]) == 3
    out = run(capsys, "translate", "--format", "dot", files["fix"])[1]
    assert out.startswith("digraph")


def test_collapse_accepts_terms_and_graphs(capsys, files, tmp_path):
    out = run(capsys, "collapse", files["fix_unrolled"])[1]
    assert len(from_json(out)) == 3
    graph = tmp_path / "g.json"
    graph.write_text(run(capsys, "translate", files["fix_unrolled"])[1])
    assert from_json(run(capsys, "collapse", str(graph))[1]) == from_json(out)


def test_stdin(capsys, monkeypatch):
    code, out, _ = run(capsys, "parse", "-", stdin=r"\x.x", monkeypatch=monkeypatch)
    assert code == 0 and out == "\\x. x\n"


def test_stats(capsys):
    assert run(capsys, "stats", "--family", "quadratic", "--n", "2")[1] == "n=2 term_size=27 graph_size=32\n"
    assert run(capsys, "stats", "--family", "cubic", "--n", "2")[0] == 2


def test_open_term_is_an_error(capsys, tmp_path):
    path = tmp_path / "open.lam"
    path.write_text(r"\x. y")
    code, _, err = run(capsys, "translate", str(path))
    assert code == 2 and "y" in err


def test_missing_file(capsys):
    assert run(capsys, "parse", "/nonexistent.lam")[0] == 2


def test_pipeline_identity(capsys, files, tmp_path):
    for name, path in files.items():
        first = run(capsys, "translate", "--semantics", "max", path)[1]
        graph = tmp_path / "first.json"
        graph.write_text(first)
        term = tmp_path / "back.lam"
        term.write_text(run(capsys, "readback", str(graph))[1])
        second = run(capsys, "translate", "--semantics", "max", str(term))[1]
        assert iso(from_json(first), from_json(second)), name


def test_console_entry_point():
    done = subprocess.run([sys.executable, "-m", "lletrec", "--version"], capture_output=True, text=True)
    assert done.returncode == 0 and done.stdout.startswith("lletrec ")

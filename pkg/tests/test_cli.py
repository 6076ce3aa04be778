from pathlib import Path

from plumbline.cli import main


def run(*argv):
    return main(list(argv))


def test_gen_build_normalize_reconstruct_pipeline(tmp_path):
    arr = tmp_path / "d33.arr"
    raw = tmp_path / "d33.gnsz"
    reduced = tmp_path / "d33.plumb"
    nf = tmp_path / "d33.neu"
    trace = tmp_path / "moves.log"
    report = tmp_path / "report.txt"

    assert run("gen", "--family", "double_pencil", "--a", "3", "--b", "3", "--out", str(arr)) == 0
    assert run("build", "--gnsz", "--in", str(arr), "--out", str(raw)) == 0
    assert run("build", "--g", "--in", str(arr), "--out", str(reduced)) == 0
    assert run("normalize", "--in", str(raw), "--out", str(nf), "--trace", str(trace)) == 0
    assert run("reconstruct", "--in", str(nf), "--out", str(report)) == 0

    assert "m " in raw.read_text()  # multiplicities present on the raw graph
    assert trace.read_text().splitlines()
    text = report.read_text()
    assert "class=DoublePencil" in text and "a=3 b=3" in text


def test_roundtrip_single_family(tmp_path, capsys):
    assert run("roundtrip", "--family", "pencil", "--d", "5") == 0
    out = capsys.readouterr().out
    assert "class=Pencil d=5" in out
    assert "components=16" in out
    assert "iso=n/a" in out


def test_roundtrip_corpus_table_and_figure(tmp_path):
    out = tmp_path / "report.tsv"
    assert run("roundtrip", "--family", "all", "--max-d", "4", "--out", str(out)) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("instance\tclass")
    assert len(lines) == 1 + 1 + 1 + 2 + 3  # header + corpus for d = 1..4
    assert (tmp_path / "report.png").exists()


def test_roundtrip_deterministic_bytes(tmp_path):
    out1 = tmp_path / "a.tsv"
    out2 = tmp_path / "b.tsv"
    run("roundtrip", "--family", "all", "--max-d", "4", "--seed", "3", "--out", str(out1))
    run("roundtrip", "--family", "all", "--max-d", "4", "--seed", "3", "--out", str(out2))
    assert out1.read_bytes() == out2.read_bytes()
    assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()


def test_normalize_empty_graph(tmp_path, capsys):
    src = tmp_path / "empty.plumb"
    src.write_text("plumbing\n")
    assert run("normalize", "--in", str(src)) == 0
    assert capsys.readouterr().out == "plumbing\n"


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.arr"
    bad.write_text("arrangement d=3\npoint: 1 2\n")  # pair axiom fails
    assert run("build", "--gnsz", "--in", str(bad)) == 1
    garbled = tmp_path / "garbled.plumb"
    garbled.write_text("not a graph\n")
    assert run("normalize", "--in", str(garbled)) == 2
    assert run("normalize", "--in", str(tmp_path / "missing.plumb")) == 2


def test_build_from_lines_and_dot(tmp_path):
    lines_file = tmp_path / "tri.lines"
    lines_file.write_text("lines d=3\nline: 1/1 0/1 0/1\nline: 0/1 1/1 0/1\nline: 0/1 0/1 1/1\n")
    out = tmp_path / "tri.plumb"
    assert run("build", "--g", "--in", str(lines_file), "--format", "lines", "--out", str(out)) == 0
    dot = tmp_path / "tri.dot"
    assert run("export-dot", "--in", str(out), "--out", str(dot)) == 0
    assert dot.read_text().startswith("graph G {")


def test_invariants_near_pencil(tmp_path, capsys):
    arr = tmp_path / "np6.arr"
    nfile = tmp_path / "np6.plumb"
    run("gen", "--family", "near_pencil", "--d", "6", "--out", str(arr))
    run("build", "--gnsz", "--in", str(arr), "--out", str(nfile))
    nf = tmp_path / "np6.neu"
    run("normalize", "--in", str(nfile), "--out", str(nf))
    assert run("invariants", "--in", str(nf)) == 0
    out = capsys.readouterr().out
    assert "betti=9" in out  # 2(d-2)+1 for d=6
    assert "normal_form=yes" in out


def test_build_figure(tmp_path):
    arr = tmp_path / "g4.arr"
    fig = tmp_path / "g4.png"
    run("gen", "--family", "generic", "--d", "4", "--out", str(arr))
    assert run("build", "--g", "--in", str(arr), "--out", str(tmp_path / "g4.plumb"), "--fig", str(fig)) == 0
    assert fig.stat().st_size > 0

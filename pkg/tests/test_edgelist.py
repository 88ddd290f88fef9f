import io

import pytest

from percolab import edgelist, generators
from percolab.errors import EdgeListFormatError, GraphBuildError


def test_dumps_layout(triangle):
    assert edgelist.dumps(triangle) == "3 3\n0 1\n0 2\n1 2\n"


def test_loads_dumps(petersen):
    assert edgelist.loads(edgelist.dumps(petersen)) == petersen


def test_file_roundtrip(tmp_path, heawood):
    path = tmp_path / "g.elist"
    edgelist.write(heawood, path)
    assert edgelist.read(path) == heawood
    buf = io.StringIO()
    edgelist.write(heawood, buf)
    assert edgelist.read(io.StringIO(buf.getvalue())) == heawood


def test_empty_graph():
    G = edgelist.loads("4 0\n")
    assert (G.n, G.m) == (4, 0)


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("3\n", 1),
        ("3 1\n1 0\n", 2),
        ("3 1\n0 x\n", 2),
        ("3 2\n0 1\n", None),
    ],
)
def test_format_errors(text, line):
    with pytest.raises(EdgeListFormatError) as err:
        edgelist.loads(text)
    assert err.value.line == line


def test_graph_errors_pass_through():
    with pytest.raises(GraphBuildError):
        edgelist.loads("3 2\n0 1\n0 1\n")
    with pytest.raises(GraphBuildError):
        edgelist.loads("2 1\n0 5\n")


def test_generated_graph_roundtrip():
    G = generators.random_regular(30, 4, 11)
    assert edgelist.loads(edgelist.dumps(G)) == G


def test_self_loop_reported_by_build():
    with pytest.raises(GraphBuildError, match="self-loop") as err:
        edgelist.loads("3 1\n1 1\n")
    assert err.value.pair == (1, 1)


@pytest.mark.parametrize("data, line", [(b"3 1\n0 \xff1\n", 2), (b"3\xc3\xa9 0\n", 1)])
def test_non_ascii_bytes(tmp_path, data, line):
    path = tmp_path / "bad.elist"
    path.write_bytes(data)
    with pytest.raises(EdgeListFormatError) as err:
        edgelist.read(path)
    assert err.value.line == line
    with pytest.raises(EdgeListFormatError):
        edgelist.read(io.BytesIO(data))


def test_non_ascii_digits_rejected():
    # int() would accept these
    with pytest.raises(EdgeListFormatError) as err:
        edgelist.loads("3 1\n0 １\n")
    assert err.value.line == 2

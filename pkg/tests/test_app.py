import pytest

from app import API_MAX_TRIALS, API_MAX_VERTICES, app, cache


@pytest.fixture
def client():
    app.config["TESTING"] = True
    with app.app_context():
        cache.clear()
    with app.test_client() as c:
        yield c


def test_index(client):
    res = client.get("/api")
    assert res.status_code == 200
    assert "/api/sweep" in res.get_json()["endpoints"]


def test_graph_summary(client):
    res = client.get("/api/graph", query_string={"gen": "ppinc:2"})
    assert res.status_code == 200
    body = res.get_json()
    assert body["spec"] == {"kind": "pp_incidence", "q": 2, "seed": 0}
    assert (body["n"], body["m"], body["min_deg"], body["girth"]) == (14, 21, 3, 6)


def test_graph_needs_a_valid_spec(client):
    assert client.get("/api/graph").status_code == 400
    res = client.get("/api/graph", query_string={"gen": "lattice:4"})
    assert res.status_code == 400
    assert "error" in res.get_json()


def test_dfs(client):
    res = client.get("/api/dfs", query_string={"gen": "complete:4", "p": "1", "seed": "3"})
    body = res.get_json()
    assert res.status_code == 200
    assert (body["max_U"], body["certified_cycle_len"], body["excess"]) == (4, 4, 3)
    assert body["path"] == [0, 1, 2, 3]


def test_dfs_errors(client):
    assert client.get("/api/dfs", query_string={"gen": "complete:4"}).status_code == 400
    assert client.get("/api/dfs", query_string={"gen": "complete:4", "p": "7"}).status_code == 400
    assert client.get("/api/dfs", query_string={"gen": "complete:4", "p": "1", "seed": "x"}).status_code == 400


def test_extremal(client):
    res = client.get("/api/extremal", query_string={"family": "cycles:3", "lo": "4", "hi": "6"})
    rows = res.get_json()["rows"]
    assert [(r["n"], r["exact"]) for r in rows] == [(4, 4), (5, 6), (6, 9)]
    res = client.get("/api/extremal", query_string={"family": "girth:5", "lo": "20"})
    (row,) = res.get_json()["rows"]
    assert row["exact"] is None and row["heuristic"]


def test_extremal_rejects_bad_ranges(client):
    assert client.get("/api/extremal", query_string={"family": "empty", "lo": "5", "hi": "2"}).status_code == 400
    assert client.get("/api/extremal", query_string={"family": "trees"}).status_code == 400


def test_budget(client):
    res = client.get("/api/budget", query_string={"family": "empty", "k": "3600", "eps": "1", "c": "1"})
    body = res.get_json()
    assert body["n_H"] == [3601, 3601]
    assert body["path_len"] == [100, 100]
    assert body["cycle_len"] == [361, 361]
    assert client.get("/api/budget", query_string={"family": "empty"}).status_code == 400


def test_prob(client):
    query = {"gen": "cycle:9", "kind": "cycle", "p": "1", "len": "9", "trials": "5", "seed": "1"}
    body = client.get("/api/prob", query_string=query).get_json()
    (result,) = body["results"]
    assert result["point"] == 1.0
    assert set(body) == {"spec", "graph", "results", "seed", "version"}


def test_prob_errors(client):
    base = {"gen": "complete:6", "p": "0.5"}
    assert client.get("/api/prob", query_string=base | {"kind": "tree"}).status_code == 400
    assert client.get("/api/prob", query_string=base | {"kind": "path"}).status_code == 400
    assert client.get("/api/prob", query_string=base | {"kind": "component"}).status_code == 400
    too_many = base | {"kind": "isolated", "trials": str(API_MAX_TRIALS + 1)}
    assert client.get("/api/prob", query_string=too_many).status_code == 400


def test_sweep(client):
    query = {"gen": "cycle:10", "p": "0,auto(2)", "trials": "3", "lstar": "10"}
    rows = client.get("/api/sweep", query_string=query).get_json()["results"]
    assert [r["p"] for r in rows] == [0.0, 1.0]
    assert rows[0]["max_cycle"] == 0
    assert rows[1]["max_cycle"] == 10
    assert rows[1]["frac_cycle_ge_lstar"] == 1.0


def test_sweep_needs_a_grid(client):
    assert client.get("/api/sweep", query_string={"gen": "cycle:10"}).status_code == 400
    assert client.get("/api/sweep", query_string={"gen": "cycle:10", "p": "0.5,0.1"}).status_code == 400


def test_c0(client):
    assert client.get("/api/c0").get_json()["c0"] == pytest.approx(1.593624, abs=1e-5)


def test_unknown_route(client):
    res = client.get("/api/nothing")
    assert res.status_code == 404
    assert "error" in res.get_json()


@pytest.mark.parametrize("gen", [
    "complete:200000",
    f"path:{API_MAX_VERTICES + 1}",
    "regular:10000:300",
    "ppinc:1009",
    "copies:1000:complete:100",
])
def test_graph_size_limits(client, gen):
    res = client.get("/api/graph", query_string={"gen": gen})
    assert res.status_code == 400
    assert "too large" in res.get_json()["error"]


def test_graph_size_limits_cover_every_route(client):
    big = "complete:5000"
    routes = [
        ("/api/dfs", {"gen": big, "p": "0.1"}),
        ("/api/prob", {"gen": big, "kind": "isolated", "p": "0.1"}),
        ("/api/sweep", {"gen": big, "p": "0.1"}),
    ]
    for route, query in routes:
        res = client.get(route, query_string=query)
        assert res.status_code == 400
        assert "too large" in res.get_json()["error"]


def test_failed_girth_repair_is_a_bad_request(client):
    gen = '{"kind": "girth_repair", "g": 3, "max_iters": 50, "base": {"kind": "complete", "n": 4}}'
    res = client.get("/api/graph", query_string={"gen": gen})
    assert res.status_code == 400
    assert "girth" in res.get_json()["error"]


def test_incomplete_json_spec(client):
    assert client.get("/api/graph", query_string={"gen": '{"kind": "complete"}'}).status_code == 400

################################################################################
### Loading the required modules
import json

from flask import Flask, jsonify, request
from flask_caching import Cache
from werkzeug.exceptions import HTTPException

from percolab import __version__, config, explorer, extremal, generators, harness
from percolab.errors import PercolabError
from percolab.graph import excess
from percolab.percolation import sample
from percolab.validation import validate_family, validate_gen_spec

################################################################################
CACHE_TIMEOUT = 60 * 60 * 24 * 5    # 5 days; every result is a pure function
                                    # of its seeded arguments.
CACHE_TIMEOUT_GRAPH = 60 * 10       # generated graphs are large, keep them
                                    # for 10 minutes only.
### Limits for the web API (the CLI has none)
API_MAX_TRIALS = 5_000
API_MAX_GRID = 64
API_MAX_EXTREMAL_N = 10_000
API_MAX_VERTICES = 100_000
API_MAX_EDGES = 1_000_000

PROB_KINDS = ("path", "cycle", "component", "excess", "isolated", "stack")

cache_config = {
    "CACHE_TYPE": "SimpleCache",  # Flask-Caching related configs
    "CACHE_DEFAULT_TIMEOUT": CACHE_TIMEOUT,
}
app = Flask(__name__)
app.config.from_mapping(cache_config)
cache = Cache(app)


class ApiError(Exception):
    def __init__(self, message, status=400):
        super().__init__(message)
        self.status = status


################################################################################
### Cached computations
@cache.memoize(timeout=CACHE_TIMEOUT_GRAPH)
def get_graph(spec_json: str):
    """Build the graph for a canonical GenSpec JSON string."""
    is_valid, spec, error = validate_gen_spec(spec_json)
    if not is_valid:
        raise ApiError(error)
    return generators.build_from_spec(spec)


@cache.memoize(timeout=CACHE_TIMEOUT)
def get_graph_summary(spec_json: str) -> dict:
    return harness.graph_summary(get_graph(spec_json))


@cache.memoize(timeout=CACHE_TIMEOUT)
def get_dfs_summary(spec_json: str, p_text: str, seed: int) -> dict:
    G = get_graph(spec_json)
    p = harness.resolve_probability(p_text, G)
    sub = sample(G, p, seed)
    result = explorer.run(G, sub)
    return {
        "p": p,
        "seed": seed,
        "max_U": result.max_u,
        "certified_cycle_len": explorer.certified_cycle_length(result),
        "excess": excess(sub.materialize()),
        "Q": result.phase1_query_count,
        "P": result.phase1_positive_count,
        "back_edges": result.phase2_positive_count,
        "path": list(explorer.longest_path_certificate(result)),
    }


@cache.memoize(timeout=CACHE_TIMEOUT)
def get_probability(spec_json: str, kind: str, p_text: str, length, vertex: int, size, eps: float,
                    trials: int, seed: int) -> dict:
    G = get_graph(spec_json)
    p = harness.resolve_probability(p_text, G)
    if kind in ("path", "cycle", "stack") and length is None:
        raise ApiError(f"'len' is required for kind={kind}")
    if kind == "component" and size is None:
        raise ApiError("'size' is required for kind=component")
    if kind in ("path", "cycle"):
        result = harness.structure_prob(G, p, kind, length, trials, seed).to_json()
    elif kind == "component":
        result = harness.component_prob(G, p, vertex, size, trials, seed).to_json()
    elif kind == "excess":
        result = harness.excess_stats(G, p, trials, seed).to_json()
    elif kind == "isolated":
        result = harness.isolated_stats(G, p, trials, seed).to_json()
    else:
        result = harness.explored_stack_prob(G, p, length, eps, trials, seed).to_json()
    return harness.report(spec_json, G, [{"kind": kind, "p": p} | result], seed)


@cache.memoize(timeout=CACHE_TIMEOUT)
def get_sweep(spec_json: str, grid_text: str, lstar: int, trials: int, seed: int) -> dict:
    G = get_graph(spec_json)
    grid = [harness.resolve_probability(x, G) for x in grid_text.split(",") if x.strip()]
    if not grid or len(grid) > API_MAX_GRID:
        raise ApiError(f"'p' must list between 1 and {API_MAX_GRID} probabilities")
    rows = harness.sweep(G, grid, lstar, trials, seed)
    return harness.report(spec_json, G, [row.to_json() for row in rows], seed)


@cache.memoize(timeout=CACHE_TIMEOUT)
def get_c0() -> float:
    return extremal.solve_c0()


################################################################################
### Request helpers
def spec_arg() -> str:
    """Canonical JSON for the ?gen= generator spec."""
    is_valid, spec, error = validate_gen_spec(request.args.get("gen"))
    if not is_valid:
        raise ApiError(error)
    try:
        n, m = generators.declared_size(spec)
    except (KeyError, TypeError, ValueError) as e:
        raise ApiError(f"incomplete generator spec: {e}") from None
    if n > API_MAX_VERTICES or m > API_MAX_EDGES:
        raise ApiError(f"graph too large for the API: n={n}, m={m} (limits {API_MAX_VERTICES}, {API_MAX_EDGES})")
    return json.dumps(spec.to_json(), sort_keys=True)


def family_arg():
    is_valid, family, error = validate_family(request.args.get("family"))
    if not is_valid:
        raise ApiError(error)
    return family


def int_arg(name, default=None, minimum=None, maximum=None):
    raw = request.args.get(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ApiError(f"'{name}' must be an integer") from None
    if minimum is not None and value < minimum:
        raise ApiError(f"'{name}' must be >= {minimum}")
    if maximum is not None and value > maximum:
        raise ApiError(f"'{name}' must be <= {maximum}")
    return value


def float_arg(name, default=None):
    raw = request.args.get(name)
    if raw is None or raw == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise ApiError(f"'{name}' must be a number") from None


################################################################################
### Error handlers
@app.errorhandler(ApiError)
def handle_api_error(e):
    return jsonify({"error": str(e)}), e.status


@app.errorhandler(PercolabError)
def handle_percolab_error(e):
    return jsonify({"error": str(e)}), 400


@app.errorhandler(HTTPException)
def handle_http_error(e):
    return jsonify({"error": e.description}), e.code


@app.errorhandler(Exception)
def handle_unexpected(e):
    app.logger.exception("unhandled error")
    return jsonify({"error": str(e)}), 500


################################################################################
### API
@app.route("/api")
def index():
    return jsonify({
        "name": "percolab",
        "version": __version__,
        "endpoints": ["/api/graph", "/api/dfs", "/api/extremal", "/api/budget",
                      "/api/prob", "/api/sweep", "/api/c0"],
    }), 200


@app.route("/api/graph")
def show_graph():
    spec_json = spec_arg()
    return jsonify({"spec": json.loads(spec_json)} | get_graph_summary(spec_json)), 200


@app.route("/api/dfs")
def show_dfs():
    spec_json = spec_arg()
    p_text = request.args.get("p")
    if not p_text:
        raise ApiError("'p' is required")
    return jsonify(get_dfs_summary(spec_json, p_text, int_arg("seed", 0))), 200


@app.route("/api/extremal")
def show_extremal():
    family = family_arg()
    lo = int_arg("lo", 1, minimum=1, maximum=API_MAX_EXTREMAL_N)
    hi = int_arg("hi", lo, minimum=lo, maximum=API_MAX_EXTREMAL_N)
    c_up = float_arg("c_up", config.DEFAULT_C_UP)
    c_lo = float_arg("c_lo", config.DEFAULT_C_LO)
    rows = []
    for n in range(lo, hi + 1):
        b = extremal.ex_bracket(n, family, c_up, c_lo)
        rows.append({"n": n, "lower": b.lower, "exact": b.exact, "upper": b.upper,
                     "available": b.available, "heuristic": b.heuristic})
    return jsonify({"family": family.to_json(), "rows": rows}), 200


@app.route("/api/budget")
def show_budget():
    family = family_arg()
    k = float_arg("k")
    if k is None:
        raise ApiError("'k' is required")
    nh = extremal.n_h_bracket(k, family)
    out = {"family": family.to_json(), "k": k, "n_H": [nh.n_lo, nh.n_hi]}
    eps = float_arg("eps")
    if eps is not None:
        out["path_len"] = list(extremal.path_len_budget(k, eps, family))
        out["path_prob_lower_bound"] = extremal.path_prob_lower_bound(k, eps)
    c = float_arg("c")
    if c is not None:
        out["cycle_len"] = list(extremal.cycle_len_budget(k, c, family))
    return jsonify(out), 200


@app.route("/api/prob")
def show_probability():
    spec_json = spec_arg()
    kind = request.args.get("kind", "")
    if kind not in PROB_KINDS:
        raise ApiError(f"'kind' must be one of {', '.join(PROB_KINDS)}")
    p_text = request.args.get("p")
    if not p_text:
        raise ApiError("'p' is required")
    report = get_probability(
        spec_json,
        kind,
        p_text,
        int_arg("len", minimum=1),
        int_arg("vertex", 0, minimum=0),
        int_arg("size", minimum=1),
        float_arg("eps", 0.5),
        int_arg("trials", 100, minimum=2 if kind == "excess" else 1, maximum=API_MAX_TRIALS),
        int_arg("seed", 0),
    )
    return jsonify(report), 200


@app.route("/api/sweep")
def show_sweep():
    spec_json = spec_arg()
    grid_text = request.args.get("p", "")
    report = get_sweep(
        spec_json,
        grid_text,
        int_arg("lstar", 10, minimum=1),
        int_arg("trials", 100, minimum=1, maximum=API_MAX_TRIALS),
        int_arg("seed", 0),
    )
    return jsonify(report), 200


@app.route("/api/c0")
def show_c0():
    return jsonify({"c0": get_c0()}), 200


if __name__ == "__main__":
    app.run(host="0.0.0.0", port=5050, debug=True)

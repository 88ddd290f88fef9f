"""Validators for user-facing notations.

Each validator returns (is_valid, normalized, error_message) and never
raises, so the CLI and the Flask routes can report the message directly.
"""

from __future__ import annotations

import json
import re
from typing import Any

from percolab.errors import PercolabError
from percolab.extremal import TuranFamily
from percolab.generators import GEN_KINDS, GenSpec
from percolab.generators import cycle as cycle_graph

# Shorthand aliases for generator kinds, e.g. "regular:5000:100"
GEN_ALIASES = {
    "complete": ("complete", ("n",)),
    "bipartite": ("complete_bipartite", ("a", "b")),
    "complete_bipartite": ("complete_bipartite", ("a", "b")),
    "regular": ("random_regular", ("n", "k")),
    "random_regular": ("random_regular", ("n", "k")),
    "ppinc": ("pp_incidence", ("q",)),
    "pp_incidence": ("pp_incidence", ("q",)),
    "cycle": ("cycle", ("n",)),
    "path": ("path", ("n",)),
}
# Wrappers take their integer first and a nested shorthand after it:
# "copies:3:complete:4", "repair:5:regular:200:4"
GEN_WRAPPERS = {
    "copies": ("disjoint_copies", "t"),
    "disjoint_copies": ("disjoint_copies", "t"),
    "repair": ("girth_repair", "g"),
    "girth_repair": ("girth_repair", "g"),
}
_SEED_RE = re.compile(r"^(?P<body>.*?)(?:[,@]seed=(?P<seed>-?\d+))?$")
_AUTO_RE = re.compile(r"^auto\((?P<c>[0-9]*\.?[0-9]+(?:[eE][-+]?\d+)?)\)$")


################################################################################
### Generator specs
def _spec_from_shorthand(text: str, seed: int) -> GenSpec:
    head, _, rest = text.partition(":")
    head = head.strip().lower()
    if head in GEN_WRAPPERS:
        kind, key = GEN_WRAPPERS[head]
        value, _, inner = rest.partition(":")
        if not inner:
            raise PercolabError(f"{head} needs a nested generator, e.g. {head}:3:complete:4")
        return GenSpec(kind, {key: int(value), "base": _spec_from_shorthand(inner, seed)}, seed)
    if head not in GEN_ALIASES:
        raise PercolabError(f"unknown generator {head!r}")
    kind, names = GEN_ALIASES[head]
    values = [v for v in rest.split(":") if v.strip()] if rest else []
    if len(values) != len(names):
        raise PercolabError(f"{head} takes {len(names)} parameter(s): {':'.join(names)}")
    return GenSpec(kind, {name: int(v) for name, v in zip(names, values)}, seed)


def _spec_from_json(obj: dict[str, Any]) -> GenSpec:
    kind = obj.get("kind")
    if kind not in GEN_KINDS:
        raise PercolabError(f"unknown generator kind {kind!r}")
    seed = int(obj.get("seed", 0))
    params: dict[str, Any] = {}
    for key, value in obj.items():
        if key in ("kind", "seed"):
            continue
        params[key] = _spec_from_json(value) if isinstance(value, dict) else value
    return GenSpec(kind, params, seed)


def validate_gen_spec(value: Any) -> tuple[bool, GenSpec | None, str | None]:
    """Validate a generator spec.

    Accepts a GenSpec, a JSON object (dict or string) {kind, params..., seed},
    or the shorthand "kind:arg[:arg...]" with an optional ",seed=S".
    """
    if isinstance(value, GenSpec):
        return True, value, None
    if value is None or (isinstance(value, str) and not value.strip()):
        return False, None, "Generator spec is required"
    try:
        if isinstance(value, dict):
            return True, _spec_from_json(value), None
        text = str(value).strip()
        if text.startswith("{"):
            return True, _spec_from_json(json.loads(text)), None
        m = _SEED_RE.match(text)
        seed = int(m.group("seed")) if m.group("seed") else 0
        return True, _spec_from_shorthand(m.group("body"), seed), None
    except (PercolabError, ValueError, TypeError) as e:
        return False, value, f"Invalid generator spec: {e}"


################################################################################
### Turán families
def validate_family(value: Any) -> tuple[bool, TuranFamily | None, str | None]:
    """Validate a forbidden family.

    Shorthand: "empty", "girth:5" (no cycle of length <= 5) or
    "cycles:3,4" (explicit cycles); otherwise the JSON form
    {variant, g?, patterns?}.
    """
    if isinstance(value, TuranFamily):
        return True, value, None
    if value is None:
        return False, None, "Family is required"
    try:
        if isinstance(value, dict):
            return True, TuranFamily.from_json(value), None
        text = str(value).strip()
        if text.startswith("{"):
            return True, TuranFamily.from_json(json.loads(text)), None
        head, _, rest = text.partition(":")
        head = head.lower()
        if head == "empty":
            return True, TuranFamily.empty(), None
        if head == "girth":
            return True, TuranFamily.girth_greater(int(rest)), None
        if head == "cycles":
            lengths = [int(x) for x in rest.split(",") if x.strip()]
            return True, TuranFamily.explicit([cycle_graph(n) for n in lengths]), None
        return False, value, f"Unknown family {text!r} (expect empty, girth:G or cycles:A,B)"
    except (PercolabError, ValueError, TypeError, KeyError) as e:
        return False, value, f"Invalid family: {e}"


################################################################################
### Probabilities
def validate_probability(value: Any) -> tuple[bool, tuple[str, float] | None, str | None]:
    """Validate an edge probability: a number in [0, 1] or "auto(c)".

    The normalized form is ("fixed", p) or ("auto", c); auto(c) is resolved
    against a graph as c / (minimum degree).
    """
    if value is None:
        return False, None, "Probability is required"
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        p = float(value)
    else:
        text = str(value).strip().replace(" ", "")
        m = _AUTO_RE.match(text)
        if m:
            c = float(m.group("c"))
            if c <= 0:
                return False, value, "auto(c) needs c > 0"
            return True, ("auto", c), None
        try:
            p = float(text)
        except ValueError:
            return False, value, f"Invalid probability {value!r} (expect a number or auto(c))"
    if not 0.0 <= p <= 1.0:
        return False, value, f"Probability must lie in [0, 1], got {p}"
    return True, ("fixed", p), None

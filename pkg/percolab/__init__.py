"""percolab: two-phase DFS exploration of p-random subgraphs."""

__version__ = "0.3.0"

from percolab.errors import PercolabError  # noqa: E402
from percolab.graph import Graph, build  # noqa: E402

__all__ = ["Graph", "PercolabError", "build", "__version__"]

################################################################################
### Configuration for percolab
# Module-level constants; the environment overrides below are read once at
# import time.
import os

################################################################################
### Generators
CONFIG_RETRY_FACTOR = 100           # random_regular gives up after
                                    # CONFIG_RETRY_FACTOR * n * k restarts.
GIRTH_REPAIR_MAX_ITERS = 10_000     # default swap budget for girth_repair

################################################################################
### Graph core
SUBGRAPH_PATTERN_MAX_VERTICES = 10  # is_h_free only handles small patterns

################################################################################
### Extremal
EX_BRUTEFORCE_MAX_N = 8             # exhaustive ex(n, H) above this is refused
DEFAULT_C_UP = 1.0                  # scale of the girth upper bracket (heuristic)
DEFAULT_C_LO = 1.0                  # scale of the girth lower bracket (heuristic)
LINEAR_SCAN_LIMIT = 1 << 16         # ascending scans switch to galloping here
SCAN_CEILING = 1 << 60              # galloping never goes past this
C0_BRACKET = (1.0, 2.0)
C0_XTOL = 1e-12

################################################################################
### Percolation
REL_TOL = 1e-12                     # relative tolerance for probability identities

################################################################################
### Oracles (test/verify only, exponential)
CIRCUMFERENCE_ORACLE_MAX_N = 12
LONGEST_PATH_ORACLE_MAX_N = 12

################################################################################
### Harness
WILSON_CONFIDENCE = 0.95
DEVIATION_BETAS = (0.05, 0.1, 0.2)
EXCESS_QUANTILES = (0.05, 0.25, 0.5, 0.75, 0.95)
REPORT_GIRTH_MAX_EDGES = 2_000_000  # skip the O(n*m) girth in reports above this
PARALLEL_MIN_WORK = 2_000_000       # trials * edges below this run in-process

# PERCOLAB_THREADS caps the number of trial workers.
_threads = os.environ.get("PERCOLAB_THREADS", "")
MAX_WORKERS = max(1, int(_threads)) if _threads.isdigit() else (os.cpu_count() or 1)

################################################################################
### Logging
LOG_LEVEL = os.environ.get("PERCOLAB_LOG_LEVEL", "INFO").upper()
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

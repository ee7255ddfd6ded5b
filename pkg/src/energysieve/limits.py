"""Resource caps, overridable through environment variables."""

import os

from .errors import ResourceLimitError

# Bytes allowed for any single table allocation (masks, count arrays).
MEMORY_CAP_ENV = "ENERGYSIEVE_MEMORY_CAP"
DEFAULT_MEMORY_CAP = 2**31

# Largest N a sweep row may request.
MAX_N_ENV = "ENERGYSIEVE_MAX_N"
DEFAULT_MAX_N = 10**8

# Prime sieve refuses limits above this.
SIEVE_LIMIT_CAP = 2**31


def memory_cap() -> int:
    return int(os.environ.get(MEMORY_CAP_ENV, DEFAULT_MEMORY_CAP))


def max_sweep_n() -> int:
    return int(os.environ.get(MAX_N_ENV, DEFAULT_MAX_N))


def check_allocation(nbytes: int, what: str) -> None:
    cap = memory_cap()
    if nbytes > cap:
        raise ResourceLimitError(
            f"{what} needs {nbytes} bytes, over the {cap}-byte cap "
            f"(raise {MEMORY_CAP_ENV} to override)"
        )

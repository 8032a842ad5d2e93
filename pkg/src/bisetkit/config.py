"""Process-wide knobs and counters."""

from collections import Counter

ENGINE_VERSION = "1"

# largest group order accepted by the permutation engine
MAX_ORDER = 1000
# automorphism groups are only built for groups up to this order
MAX_AUT_ORDER = 64
# largest basis accepted when building the regular representation of kB(G,G)
MAX_RING_BASIS = 400

# worker threads used for independent Gram entries and action matrices
JOBS = 1

# persistent cache; None means disabled
CACHE_DIR = None

STATS = Counter()


def reset_stats():
    STATS.clear()

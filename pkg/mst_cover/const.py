"""Constants for the multiagent MST cover solver."""

DOMAIN = "mst_cover"
VERSION = "0.1.0"

# Solver algorithms exposed by `solve --alg`
ALG_PERFECT = "perfect"
ALG_GREEDY = "greedy"
ALG_WEIGHTED_GREEDY = "weighted-greedy"
ALG_MATROID_GREEDY = "matroid-greedy"
ALG_EXACT = "exact"
ALGORITHMS = (ALG_PERFECT, ALG_GREEDY, ALG_WEIGHTED_GREEDY, ALG_MATROID_GREEDY, ALG_EXACT)

# Instance generators exposed by `gen --kind`
KIND_RANDOM = "random"
KIND_SETCOVER_T1 = "setcover-t1"
KIND_SETCOVER_T2 = "setcover-t2"
GENERATOR_KINDS = (KIND_RANDOM, KIND_SETCOVER_T1, KIND_SETCOVER_T2)

# Cost model modes
COST_MODE_ADDITIVE = "additive"
COST_MODE_ORACLE = "oracle"

# Exit codes of the command line front end
EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_INVALID = 2
EXIT_NO_PERFECT_COVER = 3
EXIT_SIZE_GUARD = 4
EXIT_INTERNAL = 5

# Brute-force guards
MAX_ENUMERATION_EDGES = 16
MAX_SET_COVER_SETS = 16
MAX_AXIOM_GROUND_SIZE = 12

# Random generation gives up after this many disconnected draws
MAX_CONNECT_ATTEMPTS = 10_000

# Ranks used by the set-cover reductions (binary weights 0/1 encoded ordinally)
RANK_CHEAP = 1
RANK_EXPENSIVE = 2

# Instance / solution file keys
KEY_NODES = "n"
KEY_EDGES = "edges"
KEY_AGENTS = "agents"
KEY_RANK = "rank"
KEY_COSTS = "costs"
KEY_META = "meta"
KEY_SELECTED = "selected"
KEY_WITNESSES = "witnesses"
KEY_ROUNDS = "rounds"
KEY_UNIVERSE_SIZE = "universe_size"
KEY_SETS = "sets"

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
DEFAULT_LOG_LEVEL = "WARNING"

# Provenance tags written to instance metadata
META_GENERATOR = "generator"
META_SEED = "seed"
META_H = "h"
META_COPIES = "copies"

# Matroid file entries
KEY_MATROIDS = "matroids"
MATROID_UNIFORM = "uniform"
MATROID_PARTITION = "partition"

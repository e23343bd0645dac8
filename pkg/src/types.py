"""Type definitions and constants for the workbench."""
from enum import Enum


class AdSeriesKind(str, Enum):
    """Power series in ad(direction) applied to a free Lie series."""
    ONE_MINUS_EXP_NEG_AD = "one_minus_exp_neg_ad"
    EXP_AD_MINUS_ONE = "exp_ad_minus_one"


class AdFunctionKind(str, Enum):
    """Analytic functions of ad(x) on a finite-dimensional Lie algebra."""
    SQRT_J = "sqrt_j"
    TODD = "todd"  # s / (e^s - 1)
    GAMMA = "gamma"  # (1 - e^{-s}) / s


class AdFunctionMode(str, Enum):
    """How a matrix function of ad(x) is turned into a scalar."""
    TRACE = "trace"
    DET_SQRT = "det_sqrt"


class RewriteStrategy(str, Enum):
    """Which descent of a word the PBW rewriting resolves first."""
    LEFTMOST = "leftmost"
    RIGHTMOST = "rightmost"


class ComponentType(str, Enum):
    """Simple components of a graph with two external vertices."""
    TREE_I = "tree_i"
    WHEEL_II = "wheel_ii"
    TREE_WITH_RETURN_III = "tree_with_return_iii"


class OutputFormat(str, Enum):
    """Report formats understood by the command line."""
    JSON = "json"
    TEXT = "text"


class Command(str, Enum):
    """Command-line subcommands."""
    BCH = "bch"
    STAR = "star"
    ASSOC = "assoc"
    EXPCHECK = "expcheck"
    WEIGHTS = "weights"
    GRAPHSTAR = "graphstar"
    WHEELS = "wheels"
    KV = "kv"
    KV2 = "kv2"
    HOMOTOPY = "homotopy"


class WheelIntegrand(str, Enum):
    """What the wheel check integrates."""
    SIGNED = "signed"
    ABSOLUTE = "absolute"  # |density|
    CONSTANT_SPOKE = "constant_spoke"  # first spoke form replaced by d arg(z - 1) / pi


class PipelineStage(str, Enum):
    """Stages of the KV verification pipeline."""
    SOLVE = "solve"
    KV1 = "kv1"
    KV2 = "kv2"
    DZT = "dzt"
    HOMOTOPY = "homotopy"


# Generators of the free Lie algebra, indexed by letter 1, 2
GENERATOR_NAMES = {1: "y1", 2: "y2"}

# Report schema version carried by every JSON record
REPORT_SCHEMA = 1

# Caps on expensive computations
MAX_BCH_ORDER = 8
MAX_KV_ORDER = 5
MAX_GRAPH_ORDER = 3
MAX_WHEEL_SPOKES = 4

# Defaults, overridable from the environment (see src/config.py)
DEFAULT_SEED = 7
DEFAULT_SAMPLES = 200_000
DEFAULT_WORKERS = 1
DEFAULT_TOLERANCE_K = 4
DEFAULT_ORDER = 3

# Monte-Carlo samples drawn per vectorised batch
MC_BATCH_SIZE = 50_000

# Built-in algebras: name -> (basis labels, brackets {(i, j): {k: coefficient}})
BUILTIN_ALGEBRAS = {
    "heis3": (
        ("x", "y", "z"),
        {(0, 1): {2: "1"}},
    ),
    "aff1": (
        ("a", "b"),
        {(0, 1): {1: "1"}},
    ),
    "sl2": (
        ("e", "f", "h"),
        {(0, 1): {2: "1"}, (2, 0): {0: "2"}, (2, 1): {1: "-2"}},
    ),
    "gl2": (
        ("E11", "E12", "E21", "E22"),
        {
            (0, 1): {1: "1"},
            (0, 2): {2: "-1"},
            (1, 2): {0: "1", 3: "-1"},
            (1, 3): {1: "1"},
            (2, 3): {2: "-1"},
        },
    ),
}

# Algebras on which the joint KV solver imposes the trace equation
KV2_FAMILY = ("aff1", "sl2", "gl2", "heis3")

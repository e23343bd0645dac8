"""The Kashiwara-Vergne equations, their solutions and the homotopy formula."""
from src.kv.flow import TPolynomialSeries, density_flow_residual, dzt_residual
from src.kv.homotopy import HomotopyResult, homotopy_check, homotopy_generating
from src.kv.kv1 import KVSolution, kv1_lhs, kv1_linear_system, kv1_residual, solve_kv, solve_kv1
from src.kv.kv2 import TraceSeries, divergence, kv2_linear_rows, kv2_residual, kv2_rhs
from src.kv.pair import KVPair, load_pair, save_pair

__all__ = [
    "HomotopyResult",
    "KVPair",
    "KVSolution",
    "TPolynomialSeries",
    "TraceSeries",
    "density_flow_residual",
    "divergence",
    "dzt_residual",
    "homotopy_check",
    "homotopy_generating",
    "kv1_lhs",
    "kv1_linear_system",
    "kv1_residual",
    "kv2_linear_rows",
    "kv2_residual",
    "kv2_rhs",
    "load_pair",
    "save_pair",
    "solve_kv",
    "solve_kv1",
]

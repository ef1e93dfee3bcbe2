"""High-precision Stieltjes constants from equidistant zeta tabulation.

Pipeline: tabulate the regularized zeta f(1 + j eps) on a grid, form the
alternating binomial differences alpha_k with rigorous cancellation
tracking, then sum them against exact Stirling weights to obtain
gamma_n with a certified digit count.
"""

from .ak import ak_asymptotic, ak_exact, ak_series, verify_identities, write_ak_csv
from .bernoulli import BernoulliCache, bernoulli_exact
from .bigreal import BigReal
from .core import (
    AlphaSeries,
    GammaResult,
    compute_alphas,
    gamma_all,
    gamma_from_alphas_exact,
    gamma_n,
    load_alphas,
    save_alphas,
    save_gammas,
)
from .corruption import detect_corruption, scan_orders
from .errors import (
    CapacityError,
    CorruptionError,
    DomainError,
    FormatError,
    StieltjesError,
)
from .nodes import NodeTable, load_table, save_table, tabulate
from .oracles import gamma_limit_oracle, zeta_cross_check
from .stirling import StirlingTriangle, stirling_signed
from .zeta import euler_gamma_em, f_reg, zeta_em, zeta_eta

__version__ = "0.1.0"

__all__ = [
    "AlphaSeries",
    "BernoulliCache",
    "BigReal",
    "CapacityError",
    "CorruptionError",
    "DomainError",
    "FormatError",
    "GammaResult",
    "NodeTable",
    "StieltjesError",
    "StirlingTriangle",
    "ak_asymptotic",
    "ak_exact",
    "ak_series",
    "bernoulli_exact",
    "compute_alphas",
    "detect_corruption",
    "euler_gamma_em",
    "f_reg",
    "gamma_all",
    "gamma_from_alphas_exact",
    "gamma_limit_oracle",
    "gamma_n",
    "load_alphas",
    "load_table",
    "save_alphas",
    "save_gammas",
    "save_table",
    "scan_orders",
    "stirling_signed",
    "tabulate",
    "verify_identities",
    "write_ak_csv",
    "zeta_cross_check",
    "zeta_em",
    "zeta_eta",
    "__version__",
]

"""Unit-root, cointegration, and correlation tests used for factor screening."""
from .adf import AdfResult, adf_test
from .correlation import pearson_correlation
from .johansen import JohansenResult, johansen_pairwise, johansen_trace
from .tables import trace_table

__all__ = [
    "AdfResult",
    "adf_test",
    "JohansenResult",
    "johansen_pairwise",
    "johansen_trace",
    "pearson_correlation",
    "trace_table",
]

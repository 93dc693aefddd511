"""Floating-point and exact-at-rational-points matrix group layer."""

from .charts import DEFAULT_SEED, MatrixGroupChart, TangentVec, group_chart
from .suites import Settings, amm_suite, arrow_suite, ca_suite, polwie_suite
from .moment import g0_suite, gauss_cartan_suite, luwei_suite

__all__ = ["DEFAULT_SEED", "MatrixGroupChart", "TangentVec", "group_chart",
           "Settings", "amm_suite", "arrow_suite", "ca_suite", "polwie_suite",
           "g0_suite", "gauss_cartan_suite", "luwei_suite"]

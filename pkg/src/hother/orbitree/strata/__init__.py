"""Brill-Noether strata over F2: prechecks, linear systems and the enumeration pipelines."""

from .models import CandidateScheme, PipelineKind, PrecheckReport, StratumReport, StratumSpec
from .pipeline import StratumRun, execute_stratum, run_stratum
from .precheck import precheck_all, stratum_precheck
from .tables import STRATA, stratum_spec, table2_filter

__all__ = [
    "STRATA",
    "CandidateScheme",
    "PipelineKind",
    "PrecheckReport",
    "StratumReport",
    "StratumRun",
    "StratumSpec",
    "execute_stratum",
    "precheck_all",
    "run_stratum",
    "stratum_precheck",
    "stratum_spec",
    "table2_filter",
]

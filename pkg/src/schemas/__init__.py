"""Init file that allows schemas to be imported from schemas directory."""

from .sections_schema import section_schemas
from .run_config_schema import load_run_config
from .reports_schema import (
    solve_report_schema,
    identification_report_schema,
    fit_report_schema,
    run_summary_schema,
    sweep_summary_schema,
)

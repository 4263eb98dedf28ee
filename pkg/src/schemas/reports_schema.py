"""Schemas for the JSON reports commands write, using Marshmallow (dump only)"""

from marshmallow import Schema, fields


class SolveReportSchema(Schema):
    """Schema for SolveReport"""

    status = fields.Function(lambda report: report.status.value)
    iterations = fields.Integer()
    kkt_residual = fields.Float()
    solve_seconds = fields.Float()
    objective = fields.Float()
    multistart_spread = fields.Float()
    starts = fields.Integer()


class IdentificationReportSchema(Schema):
    """Schema for IdentificationReport: fitted coefficients plus per-step diagnostics"""

    coefficients = fields.Function(lambda report: report.model.to_coefficients())
    residuals = fields.Dict(keys=fields.String(), values=fields.Float())
    conditions = fields.Dict(keys=fields.String(), values=fields.Float())
    best_shift = fields.Function(lambda report: report.control.best_shift)


class FitResultSchema(Schema):
    """Schema for FitResult"""

    family = fields.Function(lambda fit: fit.family.value)
    parameters = fields.Dict(keys=fields.String(), values=fields.Float())
    r_squared = fields.Float()


class FitReportSchema(Schema):
    """Schema for the costfit report, dumped from a plain dict"""

    samples = fields.Integer()
    winner = fields.String()
    fits = fields.List(fields.Nested(FitResultSchema))  # Best R² first
    b_range = fields.List(fields.Float())
    power_force_exponent = fields.Float(allow_none=True)  # None when Hyperbolic does not win
    captured_power_exponent = fields.Float(allow_none=True)
    properties = fields.Dict(keys=fields.String(), values=fields.Boolean())


class RunSummarySchema(Schema):
    """Schema for RecedingLog totals"""

    periods_completed = fields.Function(lambda log: len(log.completed))
    failed = fields.Boolean()
    update_horizon = fields.Float()
    total_objective = fields.Float()
    total_energy = fields.Float()
    realtime_fraction = fields.Float()
    max_alpha = fields.Float()
    failure = fields.Method("get_failure")
    solves = fields.Method("get_solves")  # One solve report per recorded period

    def get_failure(self, log) -> dict | None:
        """Period and status of the failed solve, if the run was truncated"""

        if not log.failed:
            return None
        record = log.records[-1]
        return {"period": record.period, "status": record.status.value}

    def get_solves(self, log) -> list[dict]:
        """Solver report of every recorded period, the failed one included"""

        return solve_reports_schema.dump([record.report for record in log.records])


class SweepSummarySchema(Schema):
    """Schema for the sweep summary, dumped from a plain dict"""

    mode = fields.String()
    rows = fields.Integer()
    failed_rows = fields.Integer()
    wave_period = fields.Float()
    horizon = fields.Float()
    selected = fields.Dict(allow_none=True)  # Lambda chosen by the period rule, if any
    reference = fields.Dict(allow_none=True)  # Solve report of the sensitivity reference


solve_report_schema = SolveReportSchema()  # Instance of schema for a single solve report
solve_reports_schema = SolveReportSchema(many=True)  # Instance of schema for a list of reports
identification_report_schema = IdentificationReportSchema()
fit_report_schema = FitReportSchema()
run_summary_schema = RunSummarySchema()
sweep_summary_schema = SweepSummarySchema()

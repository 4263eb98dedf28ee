"""Schemas for the sections of an INI run configuration using Marshmallow"""

from typing import Any  # Used for type hints
from marshmallow import (
    Schema,
    ValidationError,
    fields,
    pre_load,  # Schema uses pre_load hook to strip data before validating
    validates_schema,  # Cross-field rules
    RAISE,  # unknown = RAISE rejects keys the section does not define
)
from marshmallow.validate import OneOf, Range
from models import SimMode
from utils import validate_fraction, validate_positive_list

POSITIVE = Range(min=0, min_inclusive=False, error="Must be greater than 0.")
NON_NEGATIVE = Range(min=0, error="Must be 0 or greater.")
SWEEP_MODES = ("lambda1", "lambda2", "eta_rho", "sensitivity")
PLANT_CHOICES = ("model", "truth")


class SectionSchema(Schema):
    """Base schema for one INI section: every value arrives as a string"""

    class Meta:
        """Sets metadata and controls behavior of the schema"""

        unknown = RAISE  # Misspelled keys are errors, not silently ignored

    @pre_load  # Calls below method to process data before being validated/deserialized by schema
    def strip_data(self, data: Any, **kwargs) -> Any:
        """
        Strip whitespace from every value, drop empty values so defaults apply, and split
        comma separated values of list fields into their items.
        """

        if not isinstance(data, dict):
            return data
        cleaned = {}
        for key, value in data.items():
            value = value.strip() if isinstance(value, str) else value
            if value == "" or value is None:
                continue  # Missing value means "use the default"
            if isinstance(self.fields.get(key), fields.List) and isinstance(value, str):
                value = [item.strip() for item in value.split(",") if item.strip()]
            cleaned[key] = value
        return cleaned


class WaveSectionSchema(SectionSchema):
    """[wave] regular wave driving the plant; leave the section out for a calm sea"""

    height = fields.Float(
        required=True,
        validate=POSITIVE,
        error_messages={"required": "wave height is required, in meters"},
    )
    period = fields.Float(
        required=True,
        validate=POSITIVE,
        error_messages={"required": "wave period is required, in seconds"},
    )
    phase = fields.Float(load_default=0.0)


class ModelSectionSchema(SectionSchema):
    """[model] the controller's discrete model"""

    fixture = fields.String(
        required=True, error_messages={"required": "model fixture path is required"}
    )


class TruthSectionSchema(SectionSchema):
    """[truth] the continuous plant used for experiments and as the MPC plant"""

    fixture = fields.String(load_default=None)
    from_model = fields.Boolean(load_default=False)  # Derive from the [model] fixture
    mode = fields.Enum(SimMode, by_value=True, load_default=SimMode.DISCRETE_EXACT)

    @validates_schema
    def validate_source(self, data: dict, **kwargs) -> None:
        """Exactly one source for the truth model"""

        if (data.get("fixture") is None) == (not data.get("from_model")):
            raise ValidationError("Give either fixture or from_model = true, not both.", "fixture")


class OcpSectionSchema(SectionSchema):
    """[ocp] formulation parameters, physical units"""

    gamma = fields.Float(load_default=1e6, validate=POSITIVE)
    delta = fields.Float(load_default=3.0, validate=POSITIVE)
    eta = fields.Float(load_default=1.0, validate=validate_fraction)
    rho = fields.Float(load_default=0.0, validate=NON_NEGATIVE)
    lambda1 = fields.Float(load_default=0.0, validate=NON_NEGATIVE)
    lambda2 = fields.Float(load_default=0.0, validate=NON_NEGATIVE)
    dt = fields.Float(load_default=0.01, validate=POSITIVE)


class MpcSectionSchema(SectionSchema):
    """[mpc] receding-horizon timing"""

    t0 = fields.Float(load_default=0.0)
    horizon = fields.Float(load_default=4.0, validate=POSITIVE)
    update_horizon = fields.Float(load_default=0.4, validate=POSITIVE)
    periods = fields.Integer(load_default=20, validate=Range(min=1))
    plant = fields.String(load_default="model", validate=OneOf(PLANT_CHOICES))

    @validates_schema
    def validate_horizons(self, data: dict, **kwargs) -> None:
        if data["update_horizon"] > data["horizon"]:
            raise ValidationError("Cannot exceed horizon.", "update_horizon")


class SolverSectionSchema(SectionSchema):
    """[solver] interior-point settings; the seed comes from [run]"""

    kkt_tol = fields.Float(load_default=1e-6, validate=POSITIVE)
    max_iter = fields.Integer(load_default=200, validate=Range(min=1))
    barrier_init = fields.Float(load_default=1.0, validate=POSITIVE)
    barrier_shrink = fields.Float(
        load_default=0.2, validate=Range(min=0, max=1, min_inclusive=False, max_inclusive=False)
    )
    regularization_floor = fields.Float(load_default=1e-8, validate=POSITIVE)
    multistart = fields.Integer(load_default=1, validate=Range(min=1))
    mu_final = fields.Float(load_default=1e-11, validate=POSITIVE)
    alternating_start = fields.Boolean(load_default=False)  # Extra sign-flipping start


class SweepSectionSchema(SectionSchema):
    """[sweep] grids, comma separated"""

    mode = fields.String(
        required=True,
        validate=OneOf(SWEEP_MODES),
        error_messages={"required": f"sweep mode is required, one of {', '.join(SWEEP_MODES)}"},
    )
    lambda1 = fields.List(fields.Float(), load_default=list, validate=validate_positive_list)
    lambda2 = fields.List(fields.Float(), load_default=list, validate=validate_positive_list)
    eta = fields.List(fields.Float(), load_default=list, validate=validate_positive_list)
    rho = fields.List(fields.Float(), load_default=list, validate=validate_positive_list)
    horizon_periods = fields.Integer(load_default=None, validate=Range(min=1))  # Wave periods
    tolerance = fields.Float(load_default=0.05, validate=validate_fraction)
    reference_lambda1 = fields.Float(load_default=1e-6, validate=NON_NEGATIVE)
    reference_lambda2 = fields.Float(load_default=1e-6, validate=NON_NEGATIVE)

    @validates_schema
    def validate_grids(self, data: dict, **kwargs) -> None:
        """The grids the chosen mode needs must be present"""

        needed = {
            "lambda1": ("lambda1",),
            "lambda2": ("lambda2",),
            "eta_rho": ("eta", "rho"),
            "sensitivity": ("lambda1", "lambda2"),
        }[data["mode"]]
        errors = {name: ["Required for this sweep mode."] for name in needed if not data[name]}
        if any(value > 1 for value in data["eta"]):
            errors["eta"] = ["All values must be at most 1."]
        if errors:
            raise ValidationError(errors)


class EstimateSectionSchema(SectionSchema):
    """[estimate] identification experiments run on the truth plant"""

    dt = fields.Float(load_default=0.01, validate=POSITIVE)
    decay_seconds = fields.Float(load_default=20.0, validate=POSITIVE)
    float_seconds = fields.Float(load_default=20.0, validate=POSITIVE)
    control_seconds = fields.Float(load_default=20.0, validate=POSITIVE)
    decay_velocity = fields.Float(load_default=0.5)  # Initial state of the decay run
    decay_position = fields.Float(load_default=1.0)
    control_amplitude = fields.Float(load_default=5e5, validate=NON_NEGATIVE)
    control_period = fields.Float(load_default=None, validate=POSITIVE)  # Defaults to the wave's
    control_shift = fields.Float(load_default=0.0)  # Phase applied, unknown to the fit
    fixture_name = fields.String(load_default="fitted_model.kv")

    @validates_schema
    def validate_initial_state(self, data: dict, **kwargs) -> None:
        if data["decay_velocity"] == 0 and data["decay_position"] == 0:
            raise ValidationError("Free decay needs a nonzero initial state.", "decay_position")


class CostfitSectionSchema(SectionSchema):
    """[costfit] damping samples and the range of the power-force check"""

    samples = fields.String(
        required=True, error_messages={"required": "samples csv path is required"}
    )
    b_lo = fields.Float(load_default=1e5, validate=POSITIVE)
    b_hi = fields.Float(load_default=1e8, validate=POSITIVE)
    points = fields.Integer(load_default=50, validate=Range(min=2))

    @validates_schema
    def validate_range(self, data: dict, **kwargs) -> None:
        if data["b_lo"] >= data["b_hi"]:
            raise ValidationError("Must be greater than b_lo.", "b_hi")


class RunSectionSchema(SectionSchema):
    """[run] output location and reproducibility overrides"""

    output_dir = fields.String(load_default=None)
    seed = fields.Integer(load_default=None, validate=Range(min=0))
    workers = fields.Integer(load_default=None, validate=Range(min=1))


# Section name to schema instance, in the order sections are documented
section_schemas = {
    "wave": WaveSectionSchema(),
    "model": ModelSectionSchema(),
    "truth": TruthSectionSchema(),
    "ocp": OcpSectionSchema(),
    "mpc": MpcSectionSchema(),
    "solver": SolverSectionSchema(),
    "sweep": SweepSectionSchema(),
    "estimate": EstimateSectionSchema(),
    "costfit": CostfitSectionSchema(),
    "run": RunSectionSchema(),
}

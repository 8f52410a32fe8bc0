from typing import Any


class KganError(Exception):
    code: str = "kgan_error"
    message: str = "Unexpected error."

    def __init__(self, *args, **kwargs: Any):
        if "code" in kwargs:
            self.code = kwargs["code"]

        self.context = kwargs
        self.code = self.code.format(**self.context)
        if args:
            self.message = str(args[0])
            super().__init__(*args)
        else:
            super().__init__(str(self))

    def __str__(self) -> str:
        return self.message.format(**self.context)


class ShapeError(KganError, ValueError):
    code = "shape_error"
    message = "Incompatible shapes: {reason}."


class DomainError(KganError, ValueError):
    code = "domain_error"
    message = "Value outside of the operation domain: {reason}."


class NumericError(KganError, ArithmeticError):
    code = "numeric_error"
    message = "Operation `{operation}` produced non-finite values."


class GraphError(KganError, RuntimeError):
    code = "graph_error"
    message = "Invalid computation graph usage: {reason}."


class LayerSpecError(KganError, ValueError):
    code = "layer_spec_error"
    message = "Invalid layer `{layer}`: {reason}."


class ModelError(KganError, ValueError):
    code = "model_error"
    message = "Invalid model: {reason}."


class TrainingError(KganError, RuntimeError):
    code = "training_error"
    message = "Training aborted at epoch {epoch}, batch {batch} ({phase}): {reason}."


class CheckpointError(KganError, ValueError):
    code = "checkpoint_error"
    message = "Could not read checkpoint `{path}`: {reason}."


class PgmFormatError(KganError, ValueError):
    code = "pgm_format_error"
    message = "Malformed PGM data at byte {offset}: {reason}."


class DatasetError(KganError, ValueError):
    code = "dataset_error"
    message = "Invalid dataset: {reason}."


class MetricError(KganError, ValueError):
    code = "metric_error"
    message = "Cannot compute metric: {reason}."


class ConfigError(KganError, ValueError):
    code = "config_error"
    message = "Invalid configuration."


class TypeValidationError(ConfigError, TypeError):
    code = "type_error"
    message = "Passed value must be valid {expected_type} type. Actual type passed was {actual_type}."


class EnumValidationError(ConfigError):
    code = "enum_error"
    message = "Passed value must be one of: {expected_values}."


class RangeValidationError(ConfigError):
    code = "range_error"
    message = "Passed value is out of range."


class MinimumValidationError(RangeValidationError):
    code = "minimum_error"
    message = "Passed value must be greater or equal to set minimum `{expected_minimum}`."


class ExclusiveMinimumValidationError(MinimumValidationError):
    code = "minimum_exclusive_error"
    message = "Passed value must be greater than set minimum `{expected_minimum}`."


class MaximumValidationError(RangeValidationError):
    code = "maximum_error"
    message = "Passed value must be lower or equal to set maximum `{expected_maximum}`."


class ExclusiveMaximumValidationError(MaximumValidationError):
    code = "maximum_exclusive_error"
    message = "Passed value must be lower than set maximum `{expected_maximum}`."


class PropertyValidationError(ConfigError):
    code = "property_error"
    message = "Problem with property {property_name}."
    property_name = "unknown"

    def __init__(self, *args, **kwargs: Any):
        if "property_name" in kwargs:
            self.property_name = kwargs["property_name"]

        super().__init__(*args, **kwargs)


class PropertyValueValidationError(PropertyValidationError):
    code = "property_value_error:{sub_code}"
    message = "Property `{property_name}` failed to pass validation: {validation_error}"


class AdditionalPropertiesValidationError(PropertyValidationError):
    code = "additional_properties_error"
    message = "Unknown configuration key `{property_name}`."


__all__ = [
    "KganError",
    "ShapeError",
    "DomainError",
    "NumericError",
    "GraphError",
    "LayerSpecError",
    "ModelError",
    "TrainingError",
    "CheckpointError",
    "PgmFormatError",
    "DatasetError",
    "MetricError",
    "ConfigError",
    "TypeValidationError",
    "EnumValidationError",
    "RangeValidationError",
    "MinimumValidationError",
    "ExclusiveMinimumValidationError",
    "MaximumValidationError",
    "ExclusiveMaximumValidationError",
    "PropertyValidationError",
    "PropertyValueValidationError",
    "AdditionalPropertiesValidationError",
]

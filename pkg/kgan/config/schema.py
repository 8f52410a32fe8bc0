from functools import partial
from typing import Any, Callable, Dict, List

from .validators import (
    validate_all_of,
    validate_any_of,
    validate_boolean,
    validate_enum,
    validate_null,
    validate_number,
    validate_object,
    validate_string,
)


def build_validator_for(schema: Dict[str, Any]) -> Callable:
    """
    Compiles a JSON-schema document into a single validator callable.

    Supported keywords: type (name or list of names), properties,
    additionalProperties, default, enum, minimum, maximum, exclusiveMinimum and
    exclusiveMaximum. The returned callable returns the validated value with
    defaults filled in, or raises a ConfigError.
    """
    if not schema:
        return lambda value: value

    root_validators: List[Callable] = []
    if "type" in schema:
        if isinstance(schema["type"], list):
            validators = [_build_validator_for_type(item, schema) for item in schema["type"]]
            root_validators.append(partial(validate_any_of, validators=validators))
        else:
            root_validators.append(_build_validator_for_type(schema["type"], schema))

    if "enum" in schema:
        root_validators.append(partial(validate_enum, values=schema["enum"]))

    if not root_validators:
        return lambda value: value

    if len(root_validators) > 1:
        return partial(validate_all_of, validators=root_validators)

    return root_validators[0]


def _build_validator_for_type(schema_type: str, definition: Dict[str, Any]) -> Callable:
    if schema_type == "boolean":
        return validate_boolean

    if schema_type in ["integer", "number"]:
        return _build_numerical_validator(schema_type, definition)

    if schema_type == "string":
        return validate_string

    if schema_type == "object":
        return _build_object_validator(definition)

    if schema_type == "null":
        return validate_null

    raise ValueError(f"unsupported schema type `{schema_type}`")


def _build_numerical_validator(schema_type: str, definition: Dict[str, Any]) -> Callable:
    validator = partial(validate_number, integer=schema_type == "integer")

    if "minimum" in definition:
        validator = partial(validator, minimum=definition["minimum"])

    if "maximum" in definition:
        validator = partial(validator, maximum=definition["maximum"])

    if "exclusiveMinimum" in definition:
        validator = partial(validator, exclusive_minimum=definition["exclusiveMinimum"])

    if "exclusiveMaximum" in definition:
        validator = partial(validator, exclusive_maximum=definition["exclusiveMaximum"])

    return validator


def _build_object_validator(definition: Dict[str, Any]) -> Callable:
    validator: Callable = validate_object

    if "properties" in definition:
        properties = definition["properties"]
        validator = partial(
            validator,
            properties={name: build_validator_for(schema) for name, schema in properties.items()},
            defaults={name: schema["default"] for name, schema in properties.items() if "default" in schema},
        )

    if "additionalProperties" in definition:
        additional_properties = definition["additionalProperties"]
        if isinstance(additional_properties, bool):
            validator = partial(validator, additional_properties=additional_properties)
        else:
            validator = partial(validator, additional_properties=build_validator_for(additional_properties))

    return validator


__all__ = [
    "build_validator_for",
]

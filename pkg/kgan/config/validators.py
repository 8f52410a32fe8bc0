from copy import deepcopy
from numbers import Number
from typing import Any, Callable, Dict, Iterable, List, Union

from kgan.errors import (
    AdditionalPropertiesValidationError,
    ConfigError,
    EnumValidationError,
    ExclusiveMaximumValidationError,
    ExclusiveMinimumValidationError,
    MaximumValidationError,
    MinimumValidationError,
    PropertyValueValidationError,
    TypeValidationError,
)

NumberUnion = Union[int, float]


def validate_all_of(value: Any, validators: Iterable[Callable]) -> Any:
    for validate in validators:
        value = validate(value)
    return value


def validate_any_of(value: Any, validators: Iterable[Callable]) -> Any:
    for validate in validators:
        try:
            return validate(deepcopy(value))
        except ConfigError:
            continue

    raise ConfigError("Value could not be validated: {value}", code="any_error", value=value)


def validate_boolean(value: Any) -> bool:
    if value is True or value is False:
        return value

    raise TypeValidationError(expected_type="boolean", actual_type=type(value).__name__)


def validate_null(value: Any) -> None:
    if value is None:
        return None

    raise TypeValidationError(expected_type="null", actual_type=type(value).__name__)


def validate_string(value: Any) -> str:
    if not isinstance(value, str):
        raise TypeValidationError(expected_type="string", actual_type=type(value).__name__)

    return value


def validate_enum(value: Any, values: List[Union[str, int, float, bool]]) -> Any:
    for item in values:
        if value != item:
            continue

        # fix python's bool to int casting
        if type(item) is bool or type(value) is bool:
            if type(value) == type(item):
                return value
            continue
        return value

    raise EnumValidationError(expected_values=values)


def validate_number(
    value: Any,
    minimum: NumberUnion = None,
    maximum: NumberUnion = None,
    exclusive_minimum: NumberUnion = None,
    exclusive_maximum: NumberUnion = None,
    integer: bool = False,
) -> NumberUnion:
    if value is True or value is False:
        raise TypeValidationError(expected_type="integer" if integer else "number", actual_type="bool")

    if integer and not isinstance(value, int):
        raise TypeValidationError(expected_type="integer", actual_type=type(value).__name__)
    if not isinstance(value, Number):
        raise TypeValidationError(expected_type="number", actual_type=type(value).__name__)

    if minimum is not None and value < minimum:
        raise MinimumValidationError(expected_minimum=minimum)

    if maximum is not None and value > maximum:
        raise MaximumValidationError(expected_maximum=maximum)

    if exclusive_minimum is not None and value <= exclusive_minimum:
        raise ExclusiveMinimumValidationError(expected_minimum=exclusive_minimum)

    if exclusive_maximum is not None and value >= exclusive_maximum:
        raise ExclusiveMaximumValidationError(expected_maximum=exclusive_maximum)

    return value


def _validate_property(key: str, value: Any, validator: Callable) -> Any:
    try:
        return validator(value)
    except PropertyValueValidationError as error:
        raise PropertyValueValidationError(
            property_name=key + "." + error.context["property_name"],
            validation_error=error.context["validation_error"],
            sub_code=error.context["sub_code"],
        ) from error
    except AdditionalPropertiesValidationError as error:
        raise error.__class__(property_name=key + "." + error.context["property_name"]) from error
    except ConfigError as error:
        raise PropertyValueValidationError(
            property_name=key,
            validation_error=str(error),
            sub_code=error.code,
        ) from error


def validate_object(
    obj: Any,
    properties: Dict[str, Callable] = None,
    defaults: Dict[str, Any] = None,
    additional_properties: Union[bool, Callable] = True,
) -> dict:
    """
    Validates a mapping property by property.

    Declared properties come first in declaration order, missing ones that
    declare a default are filled in (and validated) and anything else keeps
    its input order.
    """
    if not isinstance(obj, dict):
        raise TypeValidationError(expected_type="object", actual_type=type(obj).__name__)

    properties = properties or {}
    defaults = defaults or {}

    for key in obj:
        if not isinstance(key, str):
            raise TypeValidationError(expected_type="string key", actual_type=type(key).__name__)
        if key not in properties and additional_properties is False:
            raise AdditionalPropertiesValidationError(property_name=key)

    new_obj = {}
    for name, validator in properties.items():
        if name in obj:
            new_obj[name] = _validate_property(name, obj[name], validator)
        elif name in defaults:
            new_obj[name] = _validate_property(name, deepcopy(defaults[name]), validator)

    for key, value in obj.items():
        if key in properties:
            continue
        if callable(additional_properties):
            value = _validate_property(key, value, additional_properties)
        new_obj[key] = value

    return new_obj


__all__ = [
    "validate_all_of",
    "validate_any_of",
    "validate_boolean",
    "validate_enum",
    "validate_null",
    "validate_number",
    "validate_object",
    "validate_string",
]

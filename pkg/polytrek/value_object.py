from abc import ABC
from typing_extensions import Annotated, Any

import numpy as np
from pydantic import BaseModel, BeforeValidator, ConfigDict, PlainSerializer


def _as_float_array(value: Any) -> np.ndarray:
    # Adding 0.0 folds -0.0 into 0.0 so equal arrays always hash to the same bytes
    array = np.array(value, dtype=np.float64) + 0.0
    array.setflags(write=False)
    return array


def _as_int_array(value: Any) -> np.ndarray:
    array = np.array(value, dtype=np.int64)
    array.setflags(write=False)
    return array


FloatArray = Annotated[
    np.ndarray,
    BeforeValidator(_as_float_array),
    PlainSerializer(lambda array: array.tolist(), return_type=list),
]
"A read-only float64 ndarray field. Accepts any array-like input and serializes to nested lists."

IntArray = Annotated[
    np.ndarray,
    BeforeValidator(_as_int_array),
    PlainSerializer(lambda array: array.tolist(), return_type=list),
]
"A read-only int64 ndarray field. Accepts any array-like input and serializes to nested lists."


def _values_equal(left: Any, right: Any) -> bool:
    if isinstance(left, np.ndarray) or isinstance(right, np.ndarray):
        if not (isinstance(left, np.ndarray) and isinstance(right, np.ndarray)):
            return False
        return left.shape == right.shape and bool(np.array_equal(left, right))
    if isinstance(left, (tuple, list)) and isinstance(right, (tuple, list)):
        return len(left) == len(right) and all(_values_equal(a, b) for a, b in zip(left, right))
    if isinstance(left, dict) and isinstance(right, dict):
        return left.keys() == right.keys() and all(_values_equal(left[key], right[key]) for key in left)
    return left == right


def _hashable(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return (value.shape, value.dtype.str, value.tobytes())
    if isinstance(value, (tuple, list)):
        return tuple(_hashable(item) for item in value)
    if isinstance(value, dict):
        return tuple((key, _hashable(item)) for key, item in sorted(value.items()))
    return value


class ValueObject(BaseModel, ABC):
    """
    Abstract base class for an immutable Value Object using Pydantic's BaseModel.

    Value Objects may carry numpy arrays (annotate them with `FloatArray` or `IntArray`); equality and hashing are
    structural over every field, comparing arrays element-wise and hashing their raw bytes.

    Example:
        ```
        class Waypoint(ValueObject):
            p: FloatArray
            rot_index: int

        Waypoint(p=[0.0, 1.0], rot_index=0) == Waypoint(p=np.array([0.0, 1.0]), rot_index=0)  # True
        ```
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def __eq__(self, other: object) -> bool:
        if type(self) is not type(other):
            return False

        return all(_values_equal(getattr(self, name), getattr(other, name)) for name in type(self).model_fields)

    def __hash__(self) -> int:
        return hash((type(self).__name__, tuple(_hashable(getattr(self, name)) for name in type(self).model_fields)))

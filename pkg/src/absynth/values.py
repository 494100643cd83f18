"""Concrete values flowing through program evaluation.

Values are plain Python objects: ints, strings, tuples of ints for
dimension vectors, and a small Tensor record for column-major arrays.
Evaluation failure is the in-band BOTTOM sentinel rather than an
exception, because automaton construction silently drops failed
transitions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class _Bottom:
    """Singleton marker for failed evaluation."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Bottom"

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()


def is_bottom(v) -> bool:
    return v is BOTTOM


@dataclass(frozen=True)
class Tensor:
    """Column-major tensor: arr lists elements first-index-fastest.

    The 2x3 matrix [1,2,3;4,5,6] is Tensor(arr=(1,4,2,5,3,6), size=(2,3)).
    """

    arr: tuple
    size: tuple

    def __post_init__(self):
        if not (2 <= len(self.size) <= 4):
            raise ValueError("tensor rank must be between 2 and 4")
        if math.prod(self.size) != len(self.arr):
            raise ValueError("size/arr length mismatch")

    @property
    def num_dims(self) -> int:
        return len(self.size)

    @property
    def num_elems(self) -> int:
        return len(self.arr)

    def __repr__(self):
        return f"Tensor(arr={list(self.arr)}, size={list(self.size)})"


# Sort tags carried by grammar symbols.
SORT_INT = "int"
SORT_STRING = "string"
SORT_TOKEN = "token"
SORT_DIRECTION = "direction"
SORT_TENSOR = "tensor"
SORT_INTVEC = "intvec"

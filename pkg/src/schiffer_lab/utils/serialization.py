"""Structured-text wire format.

Complex numbers travel as two-element arrays ``[re, im]`` of decimal strings,
matrices as nested lists of those pairs. ``repr(float)`` is the shortest
string that round-trips, so parse(serialize(x)) == x bit for bit.
"""
import json
from decimal import Decimal
from pathlib import Path
from typing import Any, List, Sequence, Union

import numpy as np

WireComplex = List[str]


def real_to_wire(value: float) -> str:
    return repr(float(value))


def wire_to_real(text: Union[str, float, int]) -> float:
    return float(Decimal(str(text)))


def complex_to_wire(z: complex) -> WireComplex:
    z = complex(z)
    return [real_to_wire(z.real), real_to_wire(z.imag)]


def wire_to_complex(pair: Sequence[Union[str, float]]) -> complex:
    if len(pair) != 2:
        raise ValueError(f"complex value must be [re, im], got {pair!r}")
    return complex(wire_to_real(pair[0]), wire_to_real(pair[1]))


def vector_to_wire(vec: Sequence[complex]) -> List[WireComplex]:
    return [complex_to_wire(z) for z in np.asarray(vec).ravel()]


def wire_to_vector(data: Sequence[Sequence[str]]) -> np.ndarray:
    return np.array([wire_to_complex(pair) for pair in data], dtype=complex)


def matrix_to_wire(mat: np.ndarray) -> List[List[WireComplex]]:
    return [vector_to_wire(row) for row in np.atleast_2d(mat)]


def wire_to_matrix(data: Sequence[Sequence[Sequence[str]]]) -> np.ndarray:
    return np.array([[wire_to_complex(pair) for pair in row] for row in data], dtype=complex)


def dump_structured(payload: Any, path: Union[str, Path, None] = None) -> str:
    """Serialize a payload deterministically and optionally write it"""
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path is not None:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text + "\n")
    return text


def load_structured(path: Union[str, Path]) -> Any:
    return json.loads(Path(path).read_text())

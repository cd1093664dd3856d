from enum import Enum
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..utils.serialization import matrix_to_wire, real_to_wire, wire_to_matrix, wire_to_real


class CycleKind(str, Enum):
    A = "a"
    B = "b"


class CycleSegment(BaseModel):
    """Loop around the straight segment [e_start, e_start + 1], traversed with a sign"""
    model_config = ConfigDict(frozen=True)

    start: int = Field(..., ge=0)
    sign: int = 1

    @property
    def end(self) -> int:
        return self.start + 1


class Cycle(BaseModel):
    """A homology cycle as a signed chain of segment loops"""
    model_config = ConfigDict(frozen=True)

    kind: CycleKind
    index: int = Field(..., ge=1)
    segments: Tuple[CycleSegment, ...]

    @property
    def label(self) -> str:
        return f"{self.kind.value}{self.index}"

    def with_signs(self, signs: Tuple[int, ...]) -> "Cycle":
        return self.model_copy(update={
            "segments": tuple(seg.model_copy(update={"sign": signs[seg.start]}) for seg in self.segments)
        })

    def to_wire(self) -> dict:
        return {
            "label": self.label,
            "segments": [[seg.start, seg.end, seg.sign] for seg in self.segments],
        }

    @classmethod
    def from_wire(cls, data: dict) -> "Cycle":
        label = data["label"]
        return cls(
            kind=CycleKind(label[0]),
            index=int(label[1:]),
            segments=tuple(CycleSegment(start=int(start), sign=int(sign)) for start, _, sign in data["segments"]),
        )


class PeriodData(BaseModel):
    """A-/B-periods of the unnormalized basis and the normalized period matrix"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    curve_name: str
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    Pi: np.ndarray
    M: np.ndarray
    error: float
    symmetry_residual: float
    min_imag_eigenvalue: float
    cycles: List[Cycle] = []

    @model_validator(mode="after")
    def _freeze_arrays(self) -> "PeriodData":
        for name in ("A", "B", "C", "Pi", "M"):
            getattr(self, name).flags.writeable = False
        return self

    @property
    def genus(self) -> int:
        return self.Pi.shape[0]

    def lattice_point(self, m, n) -> np.ndarray:
        """m + Pi n for integer (or real) coordinate vectors"""
        return np.asarray(m, dtype=float) + self.Pi @ np.asarray(n, dtype=float)

    def cycle_vector(self, label: str) -> np.ndarray:
        """Normalized periods over the named cycle: a_i gives e_i, b_i gives row i of Pi"""
        kind, index = label[0], int(label[1:]) - 1
        if not 0 <= index < self.genus or kind not in ("a", "b"):
            raise ValueError(f"Unknown cycle label {label!r}")
        if kind == "a":
            return np.eye(self.genus, dtype=complex)[index]
        return np.array(self.Pi[index])

    def with_pi(self, Pi: np.ndarray) -> "PeriodData":
        """Copy carrying a replacement period matrix (and its dual matrix)"""
        Pi = np.array(Pi, dtype=complex)
        return self.model_copy(update={
            "Pi": Pi,
            "M": np.linalg.inv(2j * Pi.imag),
            "symmetry_residual": float(np.max(np.abs(Pi - Pi.T))),
            "min_imag_eigenvalue": float(np.min(np.linalg.eigvalsh(Pi.imag))),
        })

    def to_wire(self) -> dict:
        return {
            "curve": self.curve_name,
            "A": matrix_to_wire(self.A),
            "B": matrix_to_wire(self.B),
            "C": matrix_to_wire(self.C),
            "Pi": matrix_to_wire(self.Pi),
            "M": matrix_to_wire(self.M),
            "err": real_to_wire(self.error),
            "symmetry_residual": real_to_wire(self.symmetry_residual),
            "min_imag_eigenvalue": real_to_wire(self.min_imag_eigenvalue),
            "cycles": [cycle.to_wire() for cycle in self.cycles],
        }

    @classmethod
    def from_wire(cls, data: dict) -> "PeriodData":
        Pi = wire_to_matrix(data["Pi"])
        A = wire_to_matrix(data["A"])
        return cls(
            curve_name=data.get("curve", "curve"),
            A=A,
            B=wire_to_matrix(data["B"]),
            C=wire_to_matrix(data["C"]) if "C" in data else np.linalg.inv(A),
            Pi=Pi,
            M=wire_to_matrix(data["M"]),
            error=wire_to_real(data["err"]),
            symmetry_residual=wire_to_real(data.get("symmetry_residual", "0")),
            min_imag_eigenvalue=wire_to_real(data.get("min_imag_eigenvalue", "0")),
            cycles=[Cycle.from_wire(cycle) for cycle in data.get("cycles", [])],
        )


def siegel_margin(Pi: np.ndarray) -> float:
    """Smallest eigenvalue of Im Pi (positive inside the Siegel upper half space)"""
    return float(np.min(np.linalg.eigvalsh(np.asarray(Pi).imag)))


from enum import Enum
from fractions import Fraction
from math import factorial
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..utils.serialization import (
    complex_to_wire,
    real_to_wire,
    vector_to_wire,
    wire_to_complex,
    wire_to_real,
    wire_to_vector,
)


class ChartKind(str, Enum):
    ORDINARY = "ordinary"      # t = x - x0 on a fixed sheet
    BRANCH = "branch"          # x = e_k + tau^2
    INFINITY = "infinity"      # x = 1 / tau^2, odd degree only


class CurveSpec(BaseModel):
    """Structured-text curve description"""
    name: str = "curve"
    f_coeffs: List[str] = Field(..., min_length=1, description="Ascending-degree decimal strings")

    @field_validator("f_coeffs", mode="before")
    @classmethod
    def _stringify(cls, value):
        if not isinstance(value, (list, tuple)):
            raise ValueError("f_coeffs must be a list")
        return [str(v) for v in value]


class SurfacePoint(BaseModel):
    """A place on y^2 = f(x): ordinary (x, sheet), finite branch point, or infinity"""
    model_config = ConfigDict(frozen=True)

    x: Optional[complex] = None
    sheet: int = 1
    branch_index: Optional[int] = None
    at_infinity: bool = False

    @model_validator(mode="after")
    def _consistent(self) -> "SurfacePoint":
        if self.sheet not in (1, -1):
            raise ValueError("sheet must be +1 or -1")
        if self.at_infinity and (self.branch_index is not None or self.x is not None):
            raise ValueError("the point at infinity carries no x or branch index")
        if not self.at_infinity and self.branch_index is None and self.x is None:
            raise ValueError("ordinary points need an x-coordinate")
        return self

    @classmethod
    def ordinary(cls, x: complex, sheet: int = 1) -> "SurfacePoint":
        return cls(x=complex(x), sheet=sheet)

    @classmethod
    def branch(cls, index: int) -> "SurfacePoint":
        return cls(branch_index=index)

    @classmethod
    def infinity(cls) -> "SurfacePoint":
        return cls(at_infinity=True)

    @property
    def chart(self) -> ChartKind:
        if self.at_infinity:
            return ChartKind.INFINITY
        if self.branch_index is not None:
            return ChartKind.BRANCH
        return ChartKind.ORDINARY

    def same_place(self, other: "SurfacePoint", tol: float = 1e-14) -> bool:
        if self.chart is not other.chart:
            return False
        if self.chart is ChartKind.ORDINARY:
            return self.sheet == other.sheet and abs(self.x - other.x) <= tol * max(1.0, abs(self.x))
        return self.branch_index == other.branch_index

    def to_wire(self) -> dict:
        if self.at_infinity:
            return {"infinity": True}
        if self.branch_index is not None:
            return {"branch": self.branch_index}
        return {"x": complex_to_wire(self.x), "sheet": "+" if self.sheet > 0 else "-"}

    @classmethod
    def from_wire(cls, data: dict) -> "SurfacePoint":
        if data.get("infinity"):
            return cls.infinity()
        if "branch" in data:
            return cls.branch(int(data["branch"]))
        return cls.ordinary(wire_to_complex(data["x"]), 1 if data.get("sheet", "+") == "+" else -1)


class HyperellipticCurve(BaseModel):
    """The surface y^2 = f(x) with exact coefficients and certified branch points"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    coefficients: Tuple[Fraction, ...]
    branch_points: np.ndarray
    root_error: float
    separation: float

    @model_validator(mode="after")
    def _freeze_arrays(self) -> "HyperellipticCurve":
        self.branch_points.flags.writeable = False
        return self

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def genus(self) -> int:
        return (self.degree - 1) // 2

    @property
    def coeffs(self) -> np.ndarray:
        """Ascending complex coefficients at working precision"""
        return np.array([complex(float(c)) for c in self.coefficients])

    @property
    def leading(self) -> complex:
        return complex(float(self.coefficients[-1]))

    @property
    def branch_at_infinity(self) -> bool:
        return self.degree % 2 == 1

    @property
    def scale(self) -> float:
        """Characteristic size of the branch point configuration"""
        return max(1.0, float(np.max(np.abs(self.branch_points))))

    def f(self, x):
        return np.polyval(self.coeffs[::-1], x)

    def y(self, point: SurfacePoint) -> complex:
        """y at an ordinary point: the sheet sign times the principal root of f(x)"""
        return point.sheet * np.sqrt(complex(self.f(point.x)))

    def nearest_branch_distance(self, x: complex) -> float:
        return float(np.min(np.abs(self.branch_points - x)))

    def to_wire(self) -> dict:
        return {
            "name": self.name,
            "f_coeffs": [str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
                         for c in self.coefficients],
            "degree": self.degree,
            "genus": self.genus,
            "branch_points": vector_to_wire(self.branch_points),
            "branch_at_infinity": self.branch_at_infinity,
            "root_error": real_to_wire(self.root_error),
            "separation": real_to_wire(self.separation),
        }

    @classmethod
    def from_wire(cls, data: dict) -> "HyperellipticCurve":
        return cls(
            name=data["name"],
            coefficients=tuple(Fraction(c) for c in data["f_coeffs"]),
            branch_points=wire_to_vector(data["branch_points"]),
            root_error=wire_to_real(data["root_error"]),
            separation=wire_to_real(data["separation"]),
        )


class LocalJet(BaseModel):
    """Truncated Taylor coefficients c_0..c_N of a differential's local density

    The differential reads (sum_s c_s t^s) dt in the anchor's chart, so the
    s-th t-derivative of the density at the anchor is s! * c_s.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    anchor: SurfacePoint
    chart: ChartKind
    coefficients: np.ndarray
    chart_scale: complex = 1.0
    label: str = ""

    @model_validator(mode="after")
    def _freeze_arrays(self) -> "LocalJet":
        self.coefficients.flags.writeable = False
        return self

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def derivative(self, s: int) -> complex:
        return factorial(s) * complex(self.coefficients[s])

    def derivatives(self) -> np.ndarray:
        return np.array([self.derivative(s) for s in range(self.order + 1)])

    def evaluate(self, t: complex) -> complex:
        return complex(np.polyval(self.coefficients[::-1], t))

    def rescaled(self, lam: complex) -> "LocalJet":
        """Jet of the same differential in the coordinate t' with t = lam * t'"""
        powers = lam ** np.arange(1, self.order + 2)
        return self.model_copy(update={
            "coefficients": np.array(self.coefficients * powers, dtype=complex),
            "chart_scale": self.chart_scale * lam,
        })

    def truncated(self, order: int) -> "LocalJet":
        return self.model_copy(update={"coefficients": np.array(self.coefficients[:order + 1])})

    def to_wire(self) -> dict:
        return {
            "anchor": self.anchor.to_wire(),
            "chart": self.chart.value,
            "label": self.label,
            "chart_scale": complex_to_wire(self.chart_scale),
            "coefficients": vector_to_wire(self.coefficients),
        }

    @classmethod
    def from_wire(cls, data: dict) -> "LocalJet":
        return cls(
            anchor=SurfacePoint.from_wire(data["anchor"]),
            chart=ChartKind(data["chart"]),
            coefficients=wire_to_vector(data["coefficients"]),
            chart_scale=wire_to_complex(data.get("chart_scale", ["1.0", "0.0"])),
            label=data.get("label", ""),
        )


def combine_jets(jets: List[LocalJet], weights: np.ndarray, labels: Optional[List[str]] = None) -> List[LocalJet]:
    """Rows of ``weights`` give linear combinations of the (common-anchor) jets"""
    stack = np.array([jet.coefficients for jet in jets])
    combined = np.asarray(weights) @ stack
    first = jets[0]
    labels = labels or [f"{first.label}*{i + 1}" for i in range(combined.shape[0])]
    return [
        first.model_copy(update={"coefficients": np.array(row, dtype=complex), "label": label})
        for row, label in zip(combined, labels)
    ]

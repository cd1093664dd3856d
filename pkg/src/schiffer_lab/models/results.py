from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from ..utils.serialization import (
    complex_to_wire,
    matrix_to_wire,
    real_to_wire,
    vector_to_wire,
    wire_to_complex,
    wire_to_matrix,
    wire_to_real,
    wire_to_vector,
)
from .curve import ChartKind, LocalJet, SurfacePoint


class AJValue(BaseModel):
    """Abel-Jacobi image of p relative to p0 along a recorded polyline"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    p0: SurfacePoint
    p: SurfacePoint
    value: np.ndarray
    path: List[complex] = []
    error: float = 0.0
    lattice_reduced: bool = False
    lattice_shift: Optional[Tuple[List[int], List[int]]] = None

    def to_wire(self) -> dict:
        payload = {
            "p0": self.p0.to_wire(),
            "p": self.p.to_wire(),
            "value": vector_to_wire(self.value),
            "lattice_reduced": self.lattice_reduced,
            "path": vector_to_wire(self.path),
            "err": real_to_wire(self.error),
        }
        if self.lattice_shift is not None:
            payload["lattice_shift"] = {"m": self.lattice_shift[0], "n": self.lattice_shift[1]}
        return payload

    @classmethod
    def from_wire(cls, data: dict) -> "AJValue":
        shift = data.get("lattice_shift")
        return cls(
            p0=SurfacePoint.from_wire(data["p0"]),
            p=SurfacePoint.from_wire(data["p"]),
            value=wire_to_vector(data["value"]),
            path=[complex(z) for z in wire_to_vector(data.get("path", []))],
            error=wire_to_real(data.get("err", "0.0")),
            lattice_reduced=bool(data.get("lattice_reduced", False)),
            lattice_shift=(list(shift["m"]), list(shift["n"])) if shift is not None else None,
        )


class AJJet(BaseModel):
    """Derivatives d^n/dt^n of the Abel-Jacobi map at an anchor, n = 1..N"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    anchor: SurfacePoint
    chart: ChartKind
    chart_scale: complex = 1.0
    derivatives: np.ndarray  # row n-1 holds order n

    @property
    def order(self) -> int:
        return self.derivatives.shape[0]

    def component(self, n: int) -> np.ndarray:
        if not 1 <= n <= self.order:
            raise IndexError(f"order {n} outside 1..{self.order}")
        return np.array(self.derivatives[n - 1])

    def to_wire(self) -> dict:
        return {
            "anchor": self.anchor.to_wire(),
            "chart": self.chart.value,
            "chart_scale": complex_to_wire(self.chart_scale),
            "orders": [{"n": n + 1, "value": vector_to_wire(row)} for n, row in enumerate(self.derivatives)],
        }

    @classmethod
    def from_wire(cls, data: dict) -> "AJJet":
        orders = sorted(data["orders"], key=lambda item: item["n"])
        return cls(
            anchor=SurfacePoint.from_wire(data["anchor"]),
            chart=ChartKind(data["chart"]),
            chart_scale=wire_to_complex(data.get("chart_scale", ["1.0", "0.0"])),
            derivatives=np.array([wire_to_vector(item["value"]) for item in orders], dtype=complex),
        )


class HyperellipticVerdict(BaseModel):
    anchor: SurfacePoint
    is_hyperelliptic_at_p: bool
    residual: float
    threshold: float

    def to_wire(self) -> dict:
        return {
            "anchor": self.anchor.to_wire(),
            "is_hyperelliptic_at_p": self.is_hyperelliptic_at_p,
            "residual": real_to_wire(self.residual),
            "threshold": real_to_wire(self.threshold),
        }

    @classmethod
    def from_wire(cls, data: dict) -> "HyperellipticVerdict":
        return cls(
            anchor=SurfacePoint.from_wire(data["anchor"]),
            is_hyperelliptic_at_p=bool(data["is_hyperelliptic_at_p"]),
            residual=wire_to_real(data["residual"]),
            threshold=wire_to_real(data["threshold"]),
        )


class DualFormData(BaseModel):
    """Holomorphic local data h_k of the harmonic dual forms at one anchor"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    anchor: SurfacePoint
    jets: List[LocalJet]

    @property
    def values(self) -> np.ndarray:
        """h_k(p)"""
        return np.array([jet.coefficients[0] for jet in self.jets])

    @property
    def derivatives(self) -> np.ndarray:
        """h'_k(p) in the anchor's chart"""
        return np.array([jet.derivative(1) for jet in self.jets])

    def to_wire(self) -> dict:
        payload = {
            "anchor": self.anchor.to_wire(),
            "h": vector_to_wire(self.values),
            "jets": [jet.to_wire() for jet in self.jets],
        }
        if self.jets and self.jets[0].order >= 1:
            payload["h_prime"] = vector_to_wire(self.derivatives)
        return payload

    @classmethod
    def from_wire(cls, data: dict) -> "DualFormData":
        return cls(anchor=SurfacePoint.from_wire(data["anchor"]),
                   jets=[LocalJet.from_wire(jet) for jet in data["jets"]])


class SchifferOrder(BaseModel):
    """The eps^n coefficient of the deformed period matrix"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(..., ge=1)
    dPi: np.ndarray
    raw: np.ndarray
    antisymmetric_residual: float

    def to_wire(self) -> dict:
        return {
            "n": self.n,
            "dPi": matrix_to_wire(self.dPi),
            "raw": matrix_to_wire(self.raw),
            "antisymmetric_residual": real_to_wire(self.antisymmetric_residual),
        }

    @classmethod
    def from_wire(cls, data: dict) -> "SchifferOrder":
        return cls(
            n=int(data["n"]),
            dPi=wire_to_matrix(data["dPi"]),
            raw=wire_to_matrix(data["raw"]),
            antisymmetric_residual=wire_to_real(data["antisymmetric_residual"]),
        )


class SchifferSeries(BaseModel):
    """eps-expansion of the period matrix and the normalized jets under a Schiffer variation"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    p0: SurfacePoint
    chart_scale: complex = 1.0
    base: np.ndarray
    orders: List[SchifferOrder]
    C: np.ndarray           # C[r-1] is the eps^r coefficient of C_jk(eps)
    star_jets: np.ndarray   # star_jets[r, j] holds the t-coefficients of the eps^r part of f*_j

    @property
    def order(self) -> int:
        return len(self.orders)

    def delta_pi(self, n: int) -> np.ndarray:
        return np.array(self.orders[n - 1].dPi)

    def evaluate(self, eps: float, order: Optional[int] = None) -> np.ndarray:
        """Pi*(eps) = Pi + sum_n eps^n dPi^(n), truncated at the given order"""
        order = order or self.order
        total = np.array(self.base, dtype=complex)
        for term in self.orders[:order]:
            total = total + eps ** term.n * term.dPi
        return total

    def to_wire(self) -> dict:
        return {
            "p0": self.p0.to_wire(),
            "chart_scale": complex_to_wire(self.chart_scale),
            "base": matrix_to_wire(self.base),
            "orders": [term.to_wire() for term in self.orders],
            "C": [matrix_to_wire(c) for c in self.C],
            "star_jets": [matrix_to_wire(part) for part in self.star_jets],
        }

    @classmethod
    def from_wire(cls, data: dict) -> "SchifferSeries":
        return cls(
            p0=SurfacePoint.from_wire(data["p0"]),
            chart_scale=wire_to_complex(data["chart_scale"]),
            base=wire_to_matrix(data["base"]),
            orders=[SchifferOrder.from_wire(term) for term in data["orders"]],
            C=np.array([wire_to_matrix(c) for c in data["C"]], dtype=complex),
            star_jets=np.array([wire_to_matrix(part) for part in data["star_jets"]], dtype=complex),
        )


class CriterionSum(BaseModel):
    """Sums S_i = sum_k D^i f_k(p0) h_k(p), or with h'_k(p) when derivative is set"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray
    derivative: bool

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if len(self.values) else 0.0

    def to_wire(self) -> dict:
        return {
            "derivative": self.derivative,
            "S": vector_to_wire(self.values),
            "max_abs": real_to_wire(self.max_abs),
        }

    @classmethod
    def from_wire(cls, data: dict) -> "CriterionSum":
        return cls(values=wire_to_vector(data["S"]), derivative=bool(data["derivative"]))


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"


class Characteristic(BaseModel):
    """Half-integer characteristic [alpha/2; beta/2] with alpha, beta in {0, 1}^g"""
    model_config = ConfigDict(frozen=True)

    alpha: Tuple[int, ...]
    beta: Tuple[int, ...]

    @property
    def genus(self) -> int:
        return len(self.alpha)

    @property
    def a(self) -> np.ndarray:
        return np.array(self.alpha, dtype=float) / 2

    @property
    def b(self) -> np.ndarray:
        return np.array(self.beta, dtype=float) / 2

    @property
    def parity(self) -> Parity:
        return Parity.ODD if sum(x * y for x, y in zip(self.alpha, self.beta)) % 2 else Parity.EVEN

    def label(self) -> str:
        return "[" + "".join(map(str, self.alpha)) + ";" + "".join(map(str, self.beta)) + "]"

    def to_wire(self) -> list:
        return [[str(Fraction(x, 2)) for x in self.alpha], [str(Fraction(x, 2)) for x in self.beta]]

    @classmethod
    def from_wire(cls, data: list) -> "Characteristic":
        halves = [tuple(int(2 * Fraction(part)) for part in row) for row in data]
        return cls(alpha=halves[0], beta=halves[1])


class ThetaConstant(BaseModel):
    model_config = ConfigDict(frozen=True)

    characteristic: Characteristic
    value: complex
    radius: float
    tail: float
    points: int

    @property
    def parity(self) -> Parity:
        return self.characteristic.parity

    def to_wire(self) -> dict:
        return {
            "characteristic": self.characteristic.to_wire(),
            "parity": self.parity.value,
            "value": complex_to_wire(self.value),
            "radius": real_to_wire(self.radius),
            "tail": real_to_wire(self.tail),
            "points": self.points,
        }

    @classmethod
    def from_wire(cls, data: dict) -> "ThetaConstant":
        return cls(
            characteristic=Characteristic.from_wire(data["characteristic"]),
            value=wire_to_complex(data["value"]),
            radius=wire_to_real(data["radius"]),
            tail=wire_to_real(data["tail"]),
            points=int(data["points"]),
        )


class ThetaPathJet(BaseModel):
    """value + first eps + second eps^2 for a theta-null along Pi + eps A + eps^2 B

    ``scale`` is the sum of the moduli of the first-order terms, the size the
    first coefficient would have without cancellation.
    """
    model_config = ConfigDict(frozen=True)

    characteristic: Characteristic
    value: complex
    first: complex
    second: complex
    scale: float
    radius: float

    @property
    def first_rate(self) -> float:
        return abs(self.first) / self.scale if self.scale > 0 else 0.0

    def to_wire(self) -> dict:
        return {
            "characteristic": self.characteristic.to_wire(),
            "value": complex_to_wire(self.value),
            "first": complex_to_wire(self.first),
            "second": complex_to_wire(self.second),
            "scale": real_to_wire(self.scale),
            "radius": real_to_wire(self.radius),
        }

    @classmethod
    def from_wire(cls, data: dict) -> "ThetaPathJet":
        return cls(
            characteristic=Characteristic.from_wire(data["characteristic"]),
            value=wire_to_complex(data["value"]),
            first=wire_to_complex(data["first"]),
            second=wire_to_complex(data["second"]),
            scale=wire_to_real(data["scale"]),
            radius=wire_to_real(data["radius"]),
        )


class HyperThetaVerdict(BaseModel):
    genus: int
    min_even_null: float
    index: Characteristic
    is_hyperelliptic: bool
    vanishing: int
    threshold: float
    nulls: Dict[str, float] = {}

    def to_wire(self) -> dict:
        return {
            "genus": self.genus,
            "min_even_null": real_to_wire(self.min_even_null),
            "index": self.index.to_wire(),
            "is_hyperelliptic": self.is_hyperelliptic,
            "vanishing": self.vanishing,
            "threshold": real_to_wire(self.threshold),
            "nulls": {k: real_to_wire(v) for k, v in sorted(self.nulls.items())},
        }

    @classmethod
    def from_wire(cls, data: dict) -> "HyperThetaVerdict":
        return cls(
            genus=int(data["genus"]),
            min_even_null=wire_to_real(data["min_even_null"]),
            index=Characteristic.from_wire(data["index"]),
            is_hyperelliptic=bool(data["is_hyperelliptic"]),
            vanishing=int(data["vanishing"]),
            threshold=wire_to_real(data["threshold"]),
            nulls={k: wire_to_real(v) for k, v in data.get("nulls", {}).items()},
        )


class Rank1Direction(BaseModel):
    """Schiffer direction at p: v = (f_j(p)) and delta = v v^T"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    point: SurfacePoint
    v: np.ndarray
    delta: np.ndarray
    chart_scale: complex = 1.0

    @property
    def bicanonical(self) -> np.ndarray:
        """Projective bicanonical coordinates (v_i v_j)_{i<=j}, unit norm"""
        iu = np.triu_indices(len(self.v))
        coords = self.delta[iu]
        return coords / np.linalg.norm(coords)

    @property
    def rank_ratio(self) -> float:
        s = np.linalg.svd(self.delta, compute_uv=False)
        return float(s[1] / s[0]) if len(s) > 1 and s[0] > 0 else 0.0

    def to_wire(self) -> dict:
        return {
            "point": self.point.to_wire(),
            "v": vector_to_wire(self.v),
            "delta": matrix_to_wire(self.delta),
            "chart_scale": complex_to_wire(self.chart_scale),
            "bicanonical": vector_to_wire(self.bicanonical),
            "rank_ratio": real_to_wire(self.rank_ratio),
        }

    @classmethod
    def from_wire(cls, data: dict) -> "Rank1Direction":
        return cls(
            point=SurfacePoint.from_wire(data["point"]),
            v=wire_to_vector(data["v"]),
            delta=wire_to_matrix(data["delta"]),
            chart_scale=wire_to_complex(data.get("chart_scale", ["1.0", "0.0"])),
        )


class LatticeBasis(BaseModel):
    """Real embedding of Z^g + Pi Z^g: rows are iota(e_l) then iota(Pi e_l)"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    generators: np.ndarray
    scale: float = 1.0

    @property
    def normalized_gram_determinant(self) -> float:
        rows = self.generators / np.linalg.norm(self.generators, axis=1)[:, None]
        return float(np.linalg.det(rows @ rows.T))


class RationalityVerdict(BaseModel):
    is_rational: bool
    witnesses: List[List[int]] = []
    residuals: List[float] = []
    best_residual: float = float("inf")
    bound: int
    tol: float

    def to_wire(self) -> dict:
        return {
            "rational": self.is_rational,
            "witnesses": self.witnesses,
            "residuals": [real_to_wire(r) for r in self.residuals],
            "best_residual": real_to_wire(self.best_residual),
            "bound": self.bound,
            "tol": real_to_wire(self.tol),
        }

    @classmethod
    def from_wire(cls, data: dict) -> "RationalityVerdict":
        return cls(
            is_rational=bool(data["rational"]),
            witnesses=[[int(x) for x in k] for k in data.get("witnesses", [])],
            residuals=[wire_to_real(r) for r in data.get("residuals", [])],
            best_residual=wire_to_real(data.get("best_residual", "inf")),
            bound=int(data["bound"]),
            tol=wire_to_real(data["tol"]),
        )


class ExperimentTable(BaseModel):
    """Rows of an experiment grid plus its summary"""
    name: str
    rows: List[Dict[str, Any]] = []
    summary: Dict[str, Any] = {}

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows)

    def to_wire(self) -> dict:
        return {"name": self.name, "rows": self.rows, "summary": self.summary}

    @classmethod
    def from_wire(cls, data: dict) -> "ExperimentTable":
        return cls(name=data["name"], rows=list(data.get("rows", [])), summary=dict(data.get("summary", {})))

from .curve import ChartKind, CurveSpec, HyperellipticCurve, LocalJet, SurfacePoint, combine_jets
from .periods import Cycle, CycleKind, CycleSegment, PeriodData, siegel_margin
from .results import (
    AJJet,
    AJValue,
    Characteristic,
    CriterionSum,
    DualFormData,
    ExperimentTable,
    HyperellipticVerdict,
    HyperThetaVerdict,
    LatticeBasis,
    Parity,
    Rank1Direction,
    RationalityVerdict,
    SchifferOrder,
    SchifferSeries,
    ThetaConstant,
    ThetaPathJet,
)

__all__ = [
    "ChartKind", "CurveSpec", "HyperellipticCurve", "LocalJet", "SurfacePoint", "combine_jets",
    "Cycle", "CycleKind", "CycleSegment", "PeriodData", "siegel_margin",
    "AJJet", "AJValue", "Characteristic", "CriterionSum", "DualFormData", "ExperimentTable",
    "HyperellipticVerdict", "HyperThetaVerdict", "LatticeBasis", "Parity", "Rank1Direction",
    "RationalityVerdict", "SchifferOrder", "SchifferSeries", "ThetaConstant", "ThetaPathJet",
]

from .base_experiment import BaseExperiment
from .hyperelliptic_breaking import HyperellipticBreakingExperiment
from .runner import EXPERIMENTS, run_experiment
from .soliton_breaking import SolitonBreakingExperiment

__all__ = [
    "BaseExperiment", "HyperellipticBreakingExperiment", "SolitonBreakingExperiment",
    "EXPERIMENTS", "run_experiment",
]

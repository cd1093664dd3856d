from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Type

from ..config.settings import RunConfig
from ..models.results import ExperimentTable
from ..utils.exceptions import ExperimentError
from .base_experiment import BaseExperiment
from .hyperelliptic_breaking import HyperellipticBreakingExperiment
from .soliton_breaking import SolitonBreakingExperiment

EXPERIMENTS: Dict[str, Type[BaseExperiment]] = {
    "thm-4-2": HyperellipticBreakingExperiment,
    "thm-5-5": SolitonBreakingExperiment,
}


def run_experiment(name: str, context: Dict[str, Any], config: Optional[RunConfig] = None,
                   out_dir: Optional[Path] = None) -> Tuple[ExperimentTable, Tuple[Path, Path]]:
    """Run a named experiment and write its CSV and summary"""
    if name not in EXPERIMENTS:
        raise ExperimentError(f"Unknown experiment {name!r}", experiment=name)
    experiment = EXPERIMENTS[name](config=config)
    table = experiment.run(context)
    return table, experiment.write(table, out_dir)

from typing import Any, Dict, List

import numpy as np

from ..lattice.soliton_check import soliton_breaking_experiment
from ..models.results import ExperimentTable
from ..surfaces.curve_model import sample_ordinary_point
from ..utils.logger import run_context
from .base_experiment import BaseExperiment
from .corpus import corpus

JUMP_FACTOR = 10.0


class SolitonBreakingExperiment(BaseExperiment):
    """Loss of rationality of a synthetic elliptic-soliton control under Schiffer variation"""

    def __init__(self, config=None):
        super().__init__(
            name="thm-5-5",
            description="Rationality verdicts of U(eps) against Pi(eps) for seeded genus-2 instances",
            config=config,
        )

    def get_required_fields(self) -> List[str]:
        return ["seed"]

    def process(self, context: Dict[str, Any]) -> ExperimentTable:
        seed = int(context["seed"])
        genus = int(context.get("genus") or 2)
        instances = int(context.get("instances", 20))
        n_curves = int(context.get("curves", 5))
        eps_grid = context.get("eps") or self.config.eps_grid_soliton
        tol = self.config.rationality_tol
        rng = np.random.default_rng(seed + 2)

        curves = list(corpus(genus, n_curves, seed))
        rows, runs = [], []
        for index in range(instances):
            curve, period = curves[index % len(curves)]
            p, p0 = sample_ordinary_point(curve, rng), sample_ordinary_point(curve, rng)
            with run_context(curve=curve.name):
                result = soliton_breaking_experiment(curve, period, p, p0, eps_grid=eps_grid)
            for row in result.rows:
                rows.append({"instance": index, "curve": curve.name, **row})
            runs.append(result.summary)

        controls = [run["control_rational"] for run in runs if run["control_rational"] is not None]
        jumps = [run["min_jump"] for run in runs if run["min_jump"] is not None]
        perturbed = [row for row in rows if row["eps"] > 0]
        broken = [row["control_residual"] >= JUMP_FACTOR * tol for row in perturbed]
        return ExperimentTable(
            name=self.name,
            rows=rows,
            summary={
                "genus": genus,
                "seed": seed,
                "instances": instances,
                "eps_grid": [float(e) for e in eps_grid],
                "controls_rational": bool(controls) and all(controls),
                "all_perturbed_broken": bool(broken) and all(broken),
                "search_rational_rows": sum(1 for row in perturbed if row["rational"]),
                "min_jump": float(min(jumps)) if jumps else None,
                "min_search_jump": min((run["min_search_jump"] for run in runs
                                        if run["min_search_jump"] is not None), default=None),
                "criterion_min": min(run["criterion_max"] for run in runs) if runs else None,
            },
        )

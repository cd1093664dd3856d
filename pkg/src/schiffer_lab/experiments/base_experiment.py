from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from ..config.settings import RunConfig, get_settings
from ..models.results import ExperimentTable
from ..utils.exceptions import ExceptionHandler, ExperimentError
from ..utils.logger import LoggerMixin, new_run_id, run_context
from ..utils.serialization import dump_structured


class BaseExperiment(LoggerMixin, ABC):
    """Base class for the seeded desk experiments"""

    def __init__(self, name: str, description: str, config: Optional[RunConfig] = None):
        self.name = name
        self.description = description
        self.config = config or get_settings()

    @abstractmethod
    def process(self, context: Dict[str, Any]) -> ExperimentTable:
        """Run the experiment for the given context and return its table"""
        pass

    def validate_input(self, context: Dict[str, Any]) -> bool:
        """Validate input context - override in specific experiments"""
        required_fields = self.get_required_fields()
        return all(field in context for field in required_fields)

    def get_required_fields(self) -> List[str]:
        return []

    def run(self, context: Dict[str, Any]) -> ExperimentTable:
        if not self.validate_input(context):
            missing = [f for f in self.get_required_fields() if f not in context]
            raise ExperimentError(f"Missing experiment parameters: {', '.join(missing)}", experiment=self.name)
        run_id = str(context.get("run") or new_run_id())
        with run_context(experiment=self.name, run=run_id, seed=context.get("seed"), genus=context.get("genus")):
            self.log_with_context("info", f"Starting experiment {self.name}",
                                  **{k: str(v) for k, v in context.items()})
            with ExceptionHandler(f"experiment {self.name}", self.logger, default_exception=ExperimentError):
                table = self.process(context)
            self.log_with_context("info", f"Finished experiment {self.name}", rows=len(table.rows))
        return table

    def write(self, table: ExperimentTable, out_dir: Optional[Path] = None) -> Tuple[Path, Path]:
        """CSV of the rows plus a structured-text summary"""
        out_dir = Path(out_dir or self.config.output_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / f"{self.name}.csv"
        summary_path = out_dir / f"{self.name}.json"
        table.frame().to_csv(csv_path, index=False, float_format="%.17g")
        dump_structured({"experiment": self.name, "description": self.description, **table.summary},
                        summary_path)
        return csv_path, summary_path

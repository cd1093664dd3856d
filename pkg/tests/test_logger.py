import json
import logging

from schiffer_lab.config.settings import build_config
from schiffer_lab.experiments.base_experiment import BaseExperiment
from schiffer_lab.models.results import ExperimentTable
from schiffer_lab.utils.logger import (
    ColoredFormatter,
    JSONFormatter,
    LoggerMixin,
    RunContextFilter,
    current_run_fields,
    run_context,
    setup_logging,
)


def _record(message="periods ready", level=logging.INFO):
    return logging.LogRecord("schiffer_lab.test", level, __file__, 10, message, (), None)


def _json_lines(err):
    return [json.loads(line) for line in err.strip().splitlines()]


def test_json_formatter_includes_context():
    record = _record()
    record.extra_fields = {"eps": 1e-4}
    record.run_fields = {"curve": "x5-1", "seed": 7}
    entry = json.loads(JSONFormatter().format(record))
    assert entry["message"] == "periods ready"
    assert entry["level"] == "INFO"
    assert entry["curve"] == "x5-1" and entry["seed"] == 7 and entry["eps"] == 1e-4
    assert entry["timestamp"].endswith("+00:00")


def test_colored_formatter_restores_level_name():
    record = _record(level=logging.WARNING)
    text = ColoredFormatter("%(levelname)s %(message)s%(run_suffix)s").format(record)
    assert "\033[33mWARNING" in text
    assert record.levelname == "WARNING"


def test_run_context_nests_and_resets():
    assert current_run_fields() == {}
    with run_context(experiment="thm-4-2", seed=3, genus=None):
        assert current_run_fields() == {"experiment": "thm-4-2", "seed": 3}
        with run_context(curve="g3-s3-0"):
            assert current_run_fields()["curve"] == "g3-s3-0"
            assert current_run_fields()["seed"] == 3
        assert "curve" not in current_run_fields()
    assert current_run_fields() == {}


def test_filter_builds_ordered_suffix():
    record = _record()
    with run_context(curve="x5-1", seed=2, experiment="thm-5-5"):
        assert RunContextFilter().filter(record)
    assert record.run_suffix == " [experiment=thm-5-5 seed=2 curve=x5-1]"
    assert record.run_fields["curve"] == "x5-1"


def test_setup_logging_writes_run_fields_to_stderr(capsys):
    setup_logging("DEBUG", use_json=True)
    with run_context(curve="genus3", run="abc123"):
        logging.getLogger("schiffer_lab.test").debug("theta radius grown")
    logging.getLogger("schiffer_lab.test").debug("outside")
    captured = capsys.readouterr()
    assert captured.out == ""
    inside, outside = _json_lines(captured.err)[-2:]
    assert inside["message"] == "theta radius grown"
    assert inside["curve"] == "genus3" and inside["run"] == "abc123"
    assert "curve" not in outside


def test_setup_logging_file(tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    setup_logging("INFO", log_file=str(log_file))
    with run_context(curve="x3-1"):
        logging.getLogger("schiffer_lab.test").info("written")
    for handler in logging.getLogger().handlers:
        handler.flush()
    text = log_file.read_text()
    assert "written [curve=x3-1]" in text


class _Worker(LoggerMixin):
    pass


def test_log_with_context(capsys):
    setup_logging("INFO", use_json=True)
    worker = _Worker()
    worker.log_with_context("info", "grid point", eps=1e-4)
    worker.log_with_context("debug", "suppressed")
    lines = _json_lines(capsys.readouterr().err)
    assert len(lines) == 1
    assert lines[0]["logger"] == "schiffer_lab._Worker" and lines[0]["eps"] == 1e-4


class _Counting(BaseExperiment):
    def __init__(self):
        super().__init__(name="count", description="records run fields", config=build_config())

    def process(self, context):
        self.logger.info("inside")
        return ExperimentTable(name=self.name, rows=[], summary={})


def test_experiment_run_binds_fields(capsys):
    setup_logging("INFO", use_json=True)
    _Counting().run({"seed": 9, "genus": 2, "run": "fixed-run"})
    lines = _json_lines(capsys.readouterr().err)
    inside = next(line for line in lines if line["message"] == "inside")
    assert inside["experiment"] == "count"
    assert inside["run"] == "fixed-run"
    assert inside["seed"] == 9 and inside["genus"] == 2
    assert current_run_fields() == {}

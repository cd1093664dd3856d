import logging

import numpy as np
import pytest

from schiffer_lab.utils.exceptions import (
    EXIT_DOMAIN_ERROR,
    EXIT_USAGE_ERROR,
    ChartError,
    ConfigurationError,
    CurveSpecError,
    ExceptionHandler,
    ExperimentError,
    JetOrderError,
    LabError,
    NonSquarefreeError,
    QuadratureError,
    get_exit_code,
    handle_exception_chain,
)


class TestLabError:
    def test_module_prefix_in_message(self):
        error = QuadratureError("no convergence", nodes=64, module="abel_jacobi")
        assert str(error) == "[abel_jacobi] QuadratureError: no convergence"
        assert error.details == {"module": "abel_jacobi", "nodes": 64}

    def test_default_module(self):
        assert CurveSpecError("bad", field="f_coeffs", value=3).details == {
            "module": "curve_model", "field": "f_coeffs", "value": "3",
        }

    def test_jet_order_details(self):
        error = JetOrderError("too deep", requested=70, allowed=64)
        assert error.details["requested"] == 70 and error.details["allowed"] == 64

    def test_to_dict(self):
        payload = ChartError("wrong chart", module="ivhs_analysis").to_dict()
        assert payload["type"] == "ChartError"
        assert payload["details"]["module"] == "ivhs_analysis"


class TestExitCodes:
    @pytest.mark.parametrize("error, code", [
        (ConfigurationError("bad value"), EXIT_USAGE_ERROR),
        (NonSquarefreeError("repeated root"), EXIT_DOMAIN_ERROR),
        (ExperimentError("failed"), EXIT_DOMAIN_ERROR),
        (LabError("generic"), EXIT_DOMAIN_ERROR),
        (RuntimeError("foreign"), EXIT_DOMAIN_ERROR),
    ])
    def test_mapping(self, error, code):
        assert get_exit_code(error) == code


def test_exception_chain_follows_cause():
    root = np.linalg.LinAlgError("singular")
    error = ExperimentError("wrapped", cause=root)
    chain = handle_exception_chain(error)
    assert [entry["type"] for entry in chain] == ["ExperimentError", "LinAlgError"]


class TestExceptionHandler:
    def test_foreign_exception_is_rewrapped(self, caplog):
        logger = logging.getLogger("test.handler")
        with caplog.at_level(logging.ERROR):
            with pytest.raises(ExperimentError) as info:
                with ExceptionHandler("grid", logger, default_exception=ExperimentError):
                    raise ZeroDivisionError("eps")
        assert isinstance(info.value.cause, ZeroDivisionError)
        assert "Exception in grid" in caplog.text

    def test_lab_errors_pass_through(self):
        with pytest.raises(ChartError):
            with ExceptionHandler("grid", logging.getLogger("test.handler")):
                raise ChartError("wrong chart")

    def test_swallow_when_not_reraising(self):
        with ExceptionHandler("grid", logging.getLogger("test.handler"), reraise=False):
            raise ValueError("ignored")

from typing import Optional, Dict, Any, List


class LabError(Exception):
    """Base exception class for all laboratory errors"""

    def __init__(
        self,
        message: str,
        code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
        cause: Optional[Exception] = None
    ):
        self.message = message
        self.code = code or self.__class__.__name__
        self.details = details or {}
        self.cause = cause
        super().__init__(self.message)

    def __str__(self) -> str:
        module = self.details.get("module")
        prefix = f"[{module}] " if module else ""
        return f"{prefix}{self.code}: {self.message}"

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}("
            f"message='{self.message}', "
            f"code='{self.code}', "
            f"details={self.details})"
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for serialization"""
        return {
            "error": self.code,
            "message": self.message,
            "details": self.details,
            "type": self.__class__.__name__
        }


class CurveSpecError(LabError):
    """Raised when a curve description is malformed"""

    def __init__(
        self,
        message: str,
        field: Optional[str] = None,
        value: Optional[Any] = None,
        **kwargs
    ):
        details = kwargs.pop('details', {})
        details.setdefault('module', 'curve_model')
        if field:
            details['field'] = field
        if value is not None:
            details['value'] = str(value)

        super().__init__(message, details=details, **kwargs)


class NonSquarefreeError(CurveSpecError):
    """Raised when f(x) has a repeated root"""


class RootRefinementError(LabError):
    """Raised when branch point refinement fails to converge"""

    def __init__(self, message: str, residual: Optional[float] = None, **kwargs):
        details = kwargs.pop('details', {})
        details.setdefault('module', 'curve_model')
        if residual is not None:
            details['residual'] = residual
        super().__init__(message, details=details, **kwargs)


class ChartError(LabError):
    """Raised when an anchor is used with the wrong local coordinate"""

    def __init__(self, message: str, module: str = 'curve_model', **kwargs):
        details = kwargs.pop('details', {})
        details.setdefault('module', module)
        super().__init__(message, details=details, **kwargs)


class JetOrderError(LabError):
    """Raised when a requested truncation order is out of budget"""

    def __init__(
        self,
        message: str,
        requested: Optional[int] = None,
        allowed: Optional[int] = None,
        module: str = 'curve_model',
        **kwargs
    ):
        details = kwargs.pop('details', {})
        details.setdefault('module', module)
        if requested is not None:
            details['requested'] = requested
        if allowed is not None:
            details['allowed'] = allowed
        super().__init__(message, details=details, **kwargs)


class QuadratureError(LabError):
    """Raised when a contour integral does not converge within the node budget"""

    def __init__(
        self,
        message: str,
        nodes: Optional[int] = None,
        estimate: Optional[float] = None,
        module: str = 'homology_periods',
        **kwargs
    ):
        details = kwargs.pop('details', {})
        details.setdefault('module', module)
        if nodes is not None:
            details['nodes'] = nodes
        if estimate is not None:
            details['estimate'] = estimate
        super().__init__(message, details=details, **kwargs)


class ClearanceError(LabError):
    """Raised when a path passes too close to a branch point"""

    def __init__(
        self,
        message: str,
        distance: Optional[float] = None,
        module: str = 'homology_periods',
        **kwargs
    ):
        details = kwargs.pop('details', {})
        details.setdefault('module', module)
        if distance is not None:
            details['distance'] = distance
        super().__init__(message, details=details, **kwargs)


class HomologyError(LabError):
    """Raised when no canonical homology basis can be built"""

    def __init__(self, message: str, **kwargs):
        details = kwargs.pop('details', {})
        details.setdefault('module', 'homology_periods')
        super().__init__(message, details=details, **kwargs)


class PeriodMatrixError(LabError):
    """Raised when the period matrix fails its Riemann certificates"""

    def __init__(self, message: str, residual: Optional[float] = None, **kwargs):
        details = kwargs.pop('details', {})
        details.setdefault('module', 'homology_periods')
        if residual is not None:
            details['residual'] = residual
        super().__init__(message, details=details, **kwargs)


class SiegelSpaceError(LabError):
    """Raised when a matrix leaves the Siegel upper half space"""

    def __init__(self, message: str, min_eigenvalue: Optional[float] = None,
                 module: str = 'theta_tools', **kwargs):
        details = kwargs.pop('details', {})
        details.setdefault('module', module)
        if min_eigenvalue is not None:
            details['min_eigenvalue'] = min_eigenvalue
        super().__init__(message, details=details, **kwargs)


class ThetaConvergenceError(LabError):
    """Raised when a theta lattice sum exceeds its point budget"""

    def __init__(self, message: str, points: Optional[int] = None, **kwargs):
        details = kwargs.pop('details', {})
        details.setdefault('module', 'theta_tools')
        if points is not None:
            details['points'] = points
        super().__init__(message, details=details, **kwargs)


class UnsupportedGenusError(LabError):
    """Raised when an operation is only defined for a range of genera"""

    def __init__(self, message: str, genus: Optional[int] = None, module: str = 'theta_tools', **kwargs):
        details = kwargs.pop('details', {})
        details.setdefault('module', module)
        if genus is not None:
            details['genus'] = genus
        super().__init__(message, details=details, **kwargs)


class LatticeError(LabError):
    """Raised when a lattice basis is degenerate"""

    def __init__(self, message: str, **kwargs):
        details = kwargs.pop('details', {})
        details.setdefault('module', 'soliton_check')
        super().__init__(message, details=details, **kwargs)


class AnchorMismatchError(LabError):
    """Raised when jets meant for one point are anchored elsewhere"""

    def __init__(self, message: str, module: str = 'homology_periods', **kwargs):
        details = kwargs.pop('details', {})
        details.setdefault('module', module)
        super().__init__(message, details=details, **kwargs)


class ExperimentError(LabError):
    """Raised when an experiment precondition fails"""

    def __init__(self, message: str, experiment: Optional[str] = None,
                 module: str = 'experiments', **kwargs):
        details = kwargs.pop('details', {})
        details.setdefault('module', module)
        if experiment:
            details['experiment'] = experiment
        super().__init__(message, details=details, **kwargs)


class ConfigurationError(LabError):
    """Raised when configuration is invalid or missing"""

    def __init__(
        self,
        message: str,
        config_key: Optional[str] = None,
        config_value: Optional[Any] = None,
        **kwargs
    ):
        details = kwargs.pop('details', {})
        details.setdefault('module', 'cli')
        if config_key:
            details['config_key'] = config_key
        if config_value is not None:
            details['config_value'] = str(config_value)

        super().__init__(message, details=details, **kwargs)


EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE_ERROR = 2

# Exit code mapping for the command line front end
EXCEPTION_EXIT_MAP = {
    CurveSpecError: EXIT_DOMAIN_ERROR,
    NonSquarefreeError: EXIT_DOMAIN_ERROR,
    RootRefinementError: EXIT_DOMAIN_ERROR,
    ChartError: EXIT_DOMAIN_ERROR,
    JetOrderError: EXIT_DOMAIN_ERROR,
    QuadratureError: EXIT_DOMAIN_ERROR,
    ClearanceError: EXIT_DOMAIN_ERROR,
    HomologyError: EXIT_DOMAIN_ERROR,
    PeriodMatrixError: EXIT_DOMAIN_ERROR,
    SiegelSpaceError: EXIT_DOMAIN_ERROR,
    ThetaConvergenceError: EXIT_DOMAIN_ERROR,
    UnsupportedGenusError: EXIT_DOMAIN_ERROR,
    LatticeError: EXIT_DOMAIN_ERROR,
    AnchorMismatchError: EXIT_DOMAIN_ERROR,
    ExperimentError: EXIT_DOMAIN_ERROR,
    ConfigurationError: EXIT_USAGE_ERROR,
    LabError: EXIT_DOMAIN_ERROR,
}


def get_exit_code(exception: Exception) -> int:
    """Get process exit code for exception type"""
    for klass in type(exception).__mro__:
        if klass in EXCEPTION_EXIT_MAP:
            return EXCEPTION_EXIT_MAP[klass]
    return EXIT_DOMAIN_ERROR


def handle_exception_chain(exception: Exception) -> List[Dict[str, Any]]:
    """
    Extract information from exception chain for debugging

    Args:
        exception: The exception to analyze

    Returns:
        List of exception information dictionaries
    """
    chain = []
    current = exception
    seen = set()

    while current is not None and id(current) not in seen:
        seen.add(id(current))
        if isinstance(current, LabError):
            chain.append(current.to_dict())
        else:
            chain.append({
                "error": current.__class__.__name__,
                "message": str(current),
                "type": current.__class__.__name__
            })

        if getattr(current, 'cause', None) is not None:
            current = current.cause
        elif current.__cause__ is not None:
            current = current.__cause__
        else:
            current = current.__context__

    return chain


class ExceptionHandler:
    """Context manager that rewraps foreign exceptions as lab errors"""

    def __init__(
        self,
        operation: str,
        logger,
        reraise: bool = True,
        default_exception: type = LabError
    ):
        self.operation = operation
        self.logger = logger
        self.reraise = reraise
        self.default_exception = default_exception

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is None:
            return False

        self.logger.error(
            f"Exception in {self.operation}: {exc_val}",
            extra={
                'operation': self.operation,
                'exception_type': exc_type.__name__,
                'exception_chain': handle_exception_chain(exc_val)
            }
        )

        if self.reraise and not isinstance(exc_val, LabError):
            raise self.default_exception(
                f"Error in {self.operation}: {str(exc_val)}",
                cause=exc_val
            ) from exc_val

        return not self.reraise

"""Exception types raised by the workbench."""


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


class InvalidInputError(WorkbenchError, ValueError):
    """Non-finite or otherwise malformed numeric input."""


class DegenerateLatticeError(WorkbenchError, ValueError):
    pass


class ResolutionError(WorkbenchError, ValueError):
    """Grid or quadrature resolution below the documented minimum."""


class ParameterRangeError(WorkbenchError, ValueError):
    """Sweep parameters (s, alpha) outside their domain."""


class SpecialHeightError(ParameterRangeError):
    """Height s is one of the three special heights; use the first-case path."""


class SingularityError(WorkbenchError, ValueError):
    """Evaluation requested at a cone point of the conformal density."""


class InvalidRadiusError(WorkbenchError, ValueError):
    pass


class FieldFormatError(WorkbenchError, ValueError):
    """Malformed field-definition text."""

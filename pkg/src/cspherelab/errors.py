"""Exception hierarchy shared by all cspherelab modules."""


class LabError(Exception):
    """Base class for all cspherelab errors."""


class ArgumentError(LabError, ValueError):
    """Invalid argument (maps to CLI exit code 2)."""


class DataError(LabError):
    """Input data is unusable (non-finite samples, bad tables)."""


class DivergenceError(LabError):
    """A forward scan or iteration failed to terminate within its cap."""


class ConsistencyError(LabError):
    """An internal cross-check failed; the computation must abort."""


class HypothesisError(LabError, ValueError):
    """Bound requested outside its theorem's hypotheses.

    The message names the violated inequality.
    """

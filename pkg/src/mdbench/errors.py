"""Exception types shared across the engine and the benchmark harness."""


class ConfigError(ValueError):
    """Raised when a configuration value or file is invalid."""


class SingularPairError(RuntimeError):
    """Raised when two particles coincide and the pair force is undefined."""

    def __init__(self, i, j):
        self.i = int(i)
        self.j = int(j)
        super().__init__(
            f"particles {self.i} and {self.j} are at zero separation; "
            "the pair force is singular"
        )


class NeighborOverflowError(RuntimeError):
    """Raised when a neighbor list cannot be built within the stride budget."""


class SimulationAborted(RuntimeError):
    """Wraps a fatal runtime error together with the partial benchmark record.

    The ``record`` attribute holds whatever metrics were gathered before the
    abort so callers can still persist them.
    """

    def __init__(self, cause, record=None, samples=None):
        self.cause = cause
        self.record = record
        self.samples = samples if samples is not None else []
        super().__init__(str(cause))

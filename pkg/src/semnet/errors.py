"""Exception types shared across the package."""


class SemnetError(Exception):
    """Base class for all semnet errors."""


class DegenerateGeometry(SemnetError):
    """Link distance is zero or negative."""


class InvalidConfig(SemnetError):
    """Scenario or sweep configuration violates its constraints."""


class AccuracyUnreachable(SemnetError):
    """Requested accuracy exceeds the maximum of the accuracy envelope."""


class InsufficientSamples(SemnetError):
    """Fewer samples than model parameters."""


class FitDiverged(SemnetError):
    """No least-squares start converged."""


class SingularExtraction(SemnetError):
    """Extraction ratio of zero makes the compute-load ratio unbounded."""


class InfeasibleBudget(SemnetError):
    """Fixed time components already exceed the delay tolerance."""


class DegenerateConstant(SemnetError):
    """The reduced objective is a constant (no semantic classes); carries its value."""

    def __init__(self, gamma):
        super().__init__(f"objective is constant at {gamma}")
        self.gamma = gamma


class BadAnchor(SemnetError):
    """Projection anchor is not feasible."""


class Infeasible(SemnetError):
    """Feasible set is empty."""


class IterationLimit(SemnetError):
    """Iteration cap reached; carries the incumbent result."""

    def __init__(self, result):
        super().__init__(f"iteration limit reached (incumbent value {result.value})")
        self.result = result


class PairInfeasible(SemnetError):
    """No feasible decision exists for a (device, station) pair."""


class OracleTooLarge(SemnetError):
    """Instance exceeds the brute-force oracle caps."""


class InvalidSweep(SemnetError):
    """Unknown sweep parameter or preset."""


class WriteFailed(SemnetError):
    """Output file could not be written."""

"""Exception taxonomy for simulation and decoding failures."""


class CapacityError(ValueError):
    """Requested register exceeds the supported qubit budget."""


class NondeterministicMeasurementError(RuntimeError):
    """A measurement expected to be deterministic was not.

    Raised when no single outcome carries essentially all probability;
    signals either a pipeline bug or an uncorrectable configuration.
    """

    def __init__(self, message, outcome=None, probability=None):
        super().__init__(message)
        self.outcome = outcome
        self.probability = probability


class InvalidGraphError(ValueError):
    """Adjacency matrix is not symmetric / zero-diagonal, or encoder is not an isometry."""


class ConstructionError(RuntimeError):
    """A derived operator failed its algebraic sanity check (e.g. non-unitary)."""


class UnsupportedConfigurationError(ValueError):
    """Noise/erasure configuration outside the shipped code's capability."""


class RecoveryFailureError(RuntimeError):
    """Loss recovery did not leave the fresh block in a pure extractable state."""

    def __init__(self, message, purity=None):
        super().__init__(message)
        self.purity = purity


class InvalidScenarioError(ValueError):
    """Malformed noise scenario (e.g. two events at one address)."""


class UncorrectableConfigurationError(RuntimeError):
    """Decoding pipeline signalled a configuration it cannot correct."""

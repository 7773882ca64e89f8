"""Exception types raised across the package."""


class SpectralGMMError(Exception):
    """Base class for all package errors."""


class NotPositiveDefinite(SpectralGMMError, ValueError):
    pass


class NoConvergence(SpectralGMMError, RuntimeError):
    def __init__(self, max_iter, message=None):
        self.max_iter = max_iter
        super().__init__(message or f"power iteration did not converge in {max_iter} iterations")


class ZeroMean(SpectralGMMError, ValueError):
    def __init__(self, message="mean offset mu is zero; the quantity is undefined"):
        super().__init__(message)


class AlignmentUndefined(SpectralGMMError, ValueError):
    pass


class AlphaOutOfRange(SpectralGMMError, ValueError):
    pass


class EmptyInput(SpectralGMMError, ValueError):
    pass


class LengthMismatch(SpectralGMMError, ValueError):
    pass


class BadScenarioParams(SpectralGMMError, ValueError):
    pass


class AllReplicationsDegenerate(SpectralGMMError, RuntimeError):
    pass


class ConfigError(SpectralGMMError, ValueError):
    pass

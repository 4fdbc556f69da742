"""Exception types shared across the package."""


class DimensionMismatchError(ValueError):
    """Inputs that must share a dimension do not."""


class NonHermitianError(ValueError):
    """A matrix required to be Hermitian deviates beyond tolerance."""


class DegenerateFamilyError(ValueError):
    """The state family has vanishing information matrix, so relative
    error metrics are undefined."""


class KernelLeakageError(ValueError):
    """A matrix expected to vanish on the reference kernel does not."""

"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Inconsistent or out-of-range configuration input."""


class EstimationError(RuntimeError):
    """The channel estimation contract is violated (e.g. non-orthogonal codebook)."""


class ContractError(RuntimeError):
    """A caller broke an internal API precondition."""

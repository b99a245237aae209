"""Exception hierarchy.

Everything raised for a caller-side problem (bad file, wrong shape, bad
parameter) derives from :class:`ContractError`; the CLI maps it to exit code 2.
"""


class ContractError(ValueError):
    """Input violates an operation's precondition."""


class WavFormatError(ContractError):
    pass


class ShapeError(ContractError):
    pass


class ContainerError(ContractError):
    """Malformed or wrong-kind spectrogram container."""


class ConfigError(ContractError):
    pass


class DegenerateSignalError(ContractError):
    """Zero-energy or collinear reference signals."""

"""Exception hierarchy.

Every error carries a short ``code`` string that the command-line front end
prints and maps to an exit status.
"""


class TunnelingError(Exception):
    code = "error"


class ConfigError(TunnelingError, ValueError):
    code = "config"


class InvalidParameters(TunnelingError, ValueError):
    code = "invalid-parameters"


class NotNormalized(TunnelingError, ValueError):
    code = "not-normalized"


class ZeroCoupling(TunnelingError, ValueError):
    code = "zero-coupling"


class DetuningMismatch(TunnelingError, ValueError):
    code = "detuning-mismatch"


class NumericalError(TunnelingError, ArithmeticError):
    code = "numerical"


class StepTooLarge(NumericalError):
    code = "step-too-large"


class NormBlowup(NumericalError):
    code = "norm-blowup"


class NotSettled(NumericalError):
    code = "not-settled"


class GammaZero(InvalidParameters):
    code = "gamma-zero"


class NotConfined(NumericalError):
    code = "not-confined"


class DegenerateDoublet(NumericalError):
    code = "degenerate-doublet"


class GridMismatch(NumericalError):
    code = "grid-mismatch"

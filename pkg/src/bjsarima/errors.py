"""Exception hierarchy.

Two families: :class:`InputError` for problems with what the caller handed
in (bad files, bad flags, inconsistent specs) and :class:`ComputationError`
for numerical failures on otherwise valid input.  The CLI maps the first to
exit code 1 and the second to exit code 2.
"""


class BoxJenkinsError(Exception):
    """Base class for every error raised by this package."""


class InputError(BoxJenkinsError, ValueError):
    pass


class ComputationError(BoxJenkinsError, ArithmeticError):
    pass


class IngestError(InputError):
    """Malformed, gapped or duplicated period rows in a CSV file."""


class ParseError(IngestError):
    """A value or period field could not be parsed."""


class UnsupportedFrequencyError(InputError):
    pass


class LengthError(InputError):
    """Series too short for the requested operation."""


class SpecificationError(InputError):
    """Invalid model specification or missing coefficients."""


class DimensionError(InputError):
    pass


class IncomparableCandidatesError(InputError):
    """Candidate models were fitted to different dependent series."""


class InvalidConfigError(InputError):
    pass


class HorizonError(InputError):
    pass


class IntegrationError(InputError):
    """Differenced series lacks the warmup needed to undo differencing."""


class DegenerateSeriesError(ComputationError):
    """Zero-variance input or a singular recursion pivot."""


class DegenerateFitError(ComputationError):
    pass


class CollinearityError(ComputationError):
    def __init__(self, message, columns=()):
        super().__init__(message)
        self.columns = tuple(columns)


class InfeasibleSpecError(ComputationError):
    """Every point the optimizer visited violated the root condition."""


class EstimationFailed(ComputationError):
    """Optimizer budget exhausted.  ``best`` holds the best-so-far fit."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best

"""Exception types raised across the package."""


class CAError(Exception):
    """Base class for all package errors."""


class BadOffsets(CAError, ValueError):
    """Memory exceeds anticipation."""


class MissingNeighborhood(CAError, KeyError):
    """A local rule table is not total."""

    def __init__(self, word):
        super().__init__(word)
        self.word = word

    def __str__(self):
        return f"no table entry for neighborhood {self.word!r}"


class RowTooShort(CAError, ValueError):
    pass


class AmbiguousParentage(CAError, RuntimeError):
    """Particle matching failed; indicates a rule-table or engine defect."""


class HorizonExceeded(CAError, RuntimeError):
    pass


class NoCrossingFound(CAError, RuntimeError):
    pass


class AgreementTooShort(CAError, ValueError):
    pass


class UnknownSuite(CAError, KeyError):
    def __str__(self):
        return f"unknown suite {self.args[0]!r}"


class ConfigParseError(CAError, ValueError):
    pass

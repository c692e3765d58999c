class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class NotSignificantError(DomainError):
    """The finding is not significant at the requested level.

    Raised by the reverse-Bayes formulas that are undefined unless the
    interval excludes zero (equivalently t^2 > z^2).
    """

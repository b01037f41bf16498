class SolitonError(Exception):
    pass


class DomainError(SolitonError, ValueError):
    """Raised for non-finite inputs and parameters outside their admissible range."""


class ConversionError(DomainError):
    """Raised when a chart conversion leaves the chart (xi <= 0 or Lcal <= 0)."""


class ReconstructionError(SolitonError, ValueError):
    """Raised when metric functions cannot be recovered from a trajectory."""


class SearchError(SolitonError):
    pass


class ValidationError(SolitonError):
    def __init__(self, check, message, failed=()):
        super().__init__(f"check '{check}' failed: {message}")
        self.check = check
        self.failed = list(failed) or [check]

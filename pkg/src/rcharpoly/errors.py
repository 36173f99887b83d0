class SizeLimitError(ValueError):
    """Input exceeds the enumeration budget of an algorithm."""


class NotAboveRootsError(ValueError):
    """Evaluation point is not above the roots (spectrum) it must dominate."""

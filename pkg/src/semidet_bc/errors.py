class SpecParseError(ValueError):
    """A channel or policy spec file is malformed.

    ``field`` names the offending field and ``index`` (if any) the entry
    inside it.
    """

    def __init__(self, field, message, index=None):
        self.field = field
        self.index = index
        where = field if index is None else f"{field}[{index}]"
        super().__init__(f"{where}: {message}")


class GuardError(ValueError):
    """A size or alphabet guard was exceeded."""


class NumericalError(RuntimeError):
    """A numerical routine failed to reach its stated accuracy."""

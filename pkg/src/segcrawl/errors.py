"""Exception types shared across the package."""


class InvalidConfigError(ValueError):
    """A run or experiment configuration violates its constraints."""


class RuleError(ValueError):
    """A rules document is malformed or a rule fails to compile."""

    def __init__(self, message: str, *, rule_name: str | None = None,
                 position: int | None = None):
        super().__init__(message)
        self.rule_name = rule_name
        self.position = position


class ConsistencyError(RuntimeError):
    """Internal accounting went wrong, e.g. a dataset index was processed twice."""

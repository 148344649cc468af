"""Exception types shared across the package."""


class RankMechError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(RankMechError):
    """An input violates a documented precondition (bad index, bad shape, ...)."""


class BudgetError(RankMechError):
    """A brute-force computation would exceed the configured size budget."""


class PatternAmbiguityError(DomainError):
    """Two conflicting special-case parses matched the same revealed profile.

    Provably unreachable for the parse implemented in
    :func:`rankmech.mechanisms.detect_modified_pattern` (the special agent
    ranks the outside option strictly below every competitor's outside-option
    rank, so two successful parses cannot coexist).  Kept as a defensive
    check so a regression fails loudly instead of picking a winner silently.
    """


class MarketSpecError(RankMechError):
    """A market spec file failed to parse or validate.

    Attributes:
        code: stable machine-readable diagnostic code (e.g. "E_DUP_TYPE").
        line: 1-based line number the diagnostic points at, 0 for file-level.
    """

    def __init__(self, code: str, line: int, message: str):
        super().__init__(f"{code} (line {line}): {message}")
        self.code = code
        self.line = line
        self.message = message

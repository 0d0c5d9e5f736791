class FormatError(ValueError):
    """Malformed text input (game, profile, circuit, assignment or map file)."""


class NoTrivialEquilibrium(ValueError):
    pass


class ReductionUndefined(ValueError):
    """Raised when epsilon >= min(p, 1 - p): the all-ones or all-zeros profile
    is already an epsilon-WSNE, so the circuit reduction is not defined."""


class BudgetExceeded(ValueError):
    pass

"""Exception hierarchy shared by the library and the command line."""


class HomcountError(Exception):
    """Base class; ``reason`` is a stable machine-readable tag."""

    reason = "error"


class InvalidSpec(HomcountError, ValueError):
    reason = "invalid_spec"


class CayleyValidationFailed(HomcountError, ValueError):
    reason = "cayley_validation_failed"


class ParseError(HomcountError, ValueError):
    reason = "parse_error"


class SizeMismatch(HomcountError, ValueError):
    reason = "size_mismatch"


class BudgetExceeded(HomcountError):
    reason = "budget_exceeded"

    def __init__(self, cost, budget):
        self.cost = cost
        self.budget = budget
        super().__init__(f"estimated cost {cost} exceeds budget {budget}")


class SigmaInconsistent(HomcountError):
    reason = "sigma_inconsistent"


class NonIntegerResult(HomcountError, ArithmeticError):
    reason = "non_integer_result"


class BoundExceeded(HomcountError, ValueError):
    reason = "bound_exceeded"


class BadConstantTerm(HomcountError, ValueError):
    reason = "bad_constant_term"


class IndexOutOfRange(HomcountError, IndexError):
    reason = "index_out_of_range"


class TableLoadError(HomcountError, ValueError):
    reason = "table_load_error"

"""Exception types raised across the package."""


class PolydiscError(Exception):
    """Base class; carries a short machine-readable ``code``."""

    code = "error"

    def to_record(self):
        return {"error": self.code, "message": str(self)}


class DegenerateInputError(PolydiscError, ValueError):
    code = "degenerate-input"


class UnsupportedDegreeError(PolydiscError, ValueError):
    code = "unsupported-degree"


class DomainError(PolydiscError, ValueError):
    code = "domain-error"


class NumericFailure(PolydiscError, ArithmeticError):
    code = "numeric-failure"


class WorkBudgetExceeded(PolydiscError, RuntimeError):
    code = "budget-exceeded"

    def __init__(self, message, required=None, budget=None):
        super().__init__(message)
        self.required = required
        self.budget = budget

    def to_record(self):
        rec = super().to_record()
        rec["required_operations"] = self.required
        rec["budget"] = self.budget
        return rec

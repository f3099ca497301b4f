"""Exception hierarchy.

Every error carries a short machine-readable ``code`` and an ``exit_status``
used by the command line front end.
"""


class MonodromyError(Exception):
    code = "error"
    exit_status = 10

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details

    def to_json(self):
        out = {"error": self.code, "message": str(self)}
        for key, value in self.details.items():
            out[key] = value
        return out


class ParseError(MonodromyError, ValueError):
    code = "parse_error"
    exit_status = 2


class DegenerateCurve(MonodromyError, ValueError):
    code = "degenerate_curve"
    exit_status = 3


class DegenerateFamily(DegenerateCurve):
    code = "degenerate_family"


class BothZero(MonodromyError, ValueError):
    code = "both_zero"


class IsotrivialFamily(MonodromyError):
    code = "isotrivial_family"
    exit_status = 4


class BudgetExceeded(MonodromyError):
    code = "budget_exceeded"
    exit_status = 5


class PrecisionExhausted(MonodromyError, ArithmeticError):
    code = "precision_exhausted"
    exit_status = 6


class DiscriminantHit(MonodromyError, ArithmeticError):
    code = "discriminant_hit"
    exit_status = 7


class NonGenericProjection(MonodromyError):
    code = "non_generic_projection"
    exit_status = 8


class WrongStrandCount(MonodromyError, ValueError):
    code = "wrong_strand_count"


class RequiresClosedTable(MonodromyError, ValueError):
    code = "requires_closed_table"


class InvalidRank(MonodromyError, ValueError):
    code = "invalid_rank"


class ZeroTwist(MonodromyError, ValueError):
    code = "zero_twist"


class ZeroOnLoop(MonodromyError, ValueError):
    code = "zero_on_loop"


class UnclassifiablePlace(MonodromyError):
    code = "unclassifiable_place"


class GenusTooSmall(MonodromyError, ValueError):
    code = "genus_too_small"


class NonSmoothQuartic(MonodromyError, ValueError):
    code = "non_smooth_quartic"
    exit_status = 9


class NonGenericPencil(MonodromyError):
    code = "non_generic_pencil"
    exit_status = 9

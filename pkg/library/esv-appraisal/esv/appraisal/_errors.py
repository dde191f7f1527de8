from esv.models import ComputationError, InputError

__all__ = (
    'InvalidLedger',
    'InvalidAppraisal',
    'ZeroCost',
)


class InvalidLedger(InputError):
    """Raised when a project ledger breaks its invariants.

    Attributes:
        field: The ledger field at fault, for example `'tangible_costs.utilities'`.
    """

    field: str

    __slots__ = ('field',)

    def __init__(self, field: str, message: str) -> None:
        self.field = field

        super().__init__(f'{field}: {message}')


class InvalidAppraisal(InputError):
    """Raised when an argument of an appraisal formula is outside its domain.

    Attributes:
        field: The name of the offending argument.
    """

    field: str

    __slots__ = ('field',)

    def __init__(self, field: str, message: str) -> None:
        self.field = field

        super().__init__(f'{field}: {message}')


class ZeroCost(ComputationError):
    """Raised when a benefit-cost ratio is asked of a project without costs."""

    __slots__ = ()

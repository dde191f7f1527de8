from esv.models import InputError

__all__ = (
    'NegativeCost',
    'ZeroArea',
    'ZeroQ',
    'ShapeMismatch',
    'InvalidDepth',
    'InvalidUseMatrix',
    'InvalidUrbanParams',
    'UnknownFormula',
)


class NegativeCost(InputError):
    """Raised when a cost that valuation formulas multiply is negative.

    Attributes:
        name: The name of the offending input.
        value: The negative value.
    """

    name: str
    value: float

    __slots__ = ('name', 'value')

    def __init__(self, name: str, value: float) -> None:
        self.name = name
        self.value = value

        super().__init__(f'{name} must not be negative, got {value!r}')


class ZeroArea(InputError):
    """Raised when a value per unit area is asked for a nonpositive area."""

    __slots__ = ()


class ZeroQ(InputError):
    """Raised when the normalization constant of pollution control is nonpositive."""

    __slots__ = ()


class ShapeMismatch(InputError):
    """Raised when the landscape importance and use matrices differ in shape."""

    __slots__ = ()


class InvalidDepth(InputError):
    """Raised when the mean depth of a sea area is not positive."""

    __slots__ = ()


class InvalidUseMatrix(InputError):
    """Raised when a landscape use matrix holds anything but 0 and 1."""

    __slots__ = ()


class InvalidUrbanParams(InputError):
    """Raised when urban valuation parameters are outside their domain.

    Attributes:
        field: The name of the offending parameter.
    """

    field: str

    __slots__ = ('field',)

    def __init__(self, field: str, message: str) -> None:
        self.field = field

        super().__init__(f'{field}: {message}')


class UnknownFormula(InputError):
    """Raised when no urban formula is registered under a name.

    Attributes:
        name: The name that was looked up.
    """

    name: str

    __slots__ = ('name',)

    def __init__(self, name: str) -> None:
        self.name = name

        super().__init__(f'No urban formula registered as {name!r}')

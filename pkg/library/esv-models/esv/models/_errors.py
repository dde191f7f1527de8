from typing import Optional

__all__ = (
    'EsvError',
    'InputError',
    'ComputationError',
    'NegativeEntry',
    'NonFiniteEntry',
    'EmptyMatrix',
    'RaggedRows',
    'InvalidWeights',
    'InvalidFactorTree',
    'InvalidGradeTable',
    'ParseError',
    'SchemaVersionMismatch',
    'CrossRefError',
)


class EsvError(Exception):
    """Base for all exceptions raised by the esv packages.

    The exceptions are split by whether the input was wrong or whether the
    input was valid but numerically degenerate:

        EsvError
        ├── InputError
        │   ├── NegativeEntry
        │   ├── NonFiniteEntry
        │   ├── EmptyMatrix
        │   ├── RaggedRows
        │   ├── InvalidWeights
        │   ├── InvalidFactorTree
        │   ├── InvalidGradeTable
        │   ├── ParseError
        │   ├── SchemaVersionMismatch
        │   └── CrossRefError
        └── ComputationError

    Each subpackage adds its own exceptions below one of the two branches.
    """

    __slots__ = ()


class InputError(EsvError):
    """Exception subclassed by exceptions relating to bad or inconsistent input."""

    __slots__ = ()


class ComputationError(EsvError):
    """Exception subclassed by exceptions raised for degenerate numerical input.

    The input passed validation but the requested quantity is undefined for
    it, for example a denominator summing to zero.
    """

    __slots__ = ()


class NegativeEntry(InputError):
    """Raised when an evaluation matrix contains a negative score.

    Attributes:
        row: The zero-based row of the first negative entry.
        col: The zero-based column of the first negative entry.
    """

    row: int
    col: int

    __slots__ = ('row', 'col')

    def __init__(self, row: int, col: int) -> None:
        self.row = row
        self.col = col

        super().__init__(f'Negative entry at row {row}, column {col}')


class NonFiniteEntry(InputError):
    """Raised when a matrix contains NaN or an infinity.

    Attributes:
        row: The zero-based row of the first non-finite entry.
        col: The zero-based column of the first non-finite entry.
    """

    row: int
    col: int

    __slots__ = ('row', 'col')

    def __init__(self, row: int, col: int) -> None:
        self.row = row
        self.col = col

        super().__init__(f'Non-finite entry at row {row}, column {col}')


class EmptyMatrix(InputError):
    """Raised when a matrix has no rows or no columns."""

    __slots__ = ()


class RaggedRows(InputError):
    """Raised when the rows of a matrix differ in length.

    Attributes:
        row: The zero-based index of the first row with a deviating length.
        expected: The length of the first row.
        got: The length of the offending row.
    """

    row: int
    expected: int
    got: int

    __slots__ = ('row', 'expected', 'got')

    def __init__(self, row: int, expected: int, got: int) -> None:
        self.row = row
        self.expected = expected
        self.got = got

        super().__init__(f'Row {row} has {got} entries, expected {expected}')


class InvalidWeights(InputError):
    """Raised when a weight or grade vector breaks its invariants."""

    __slots__ = ()


class InvalidFactorTree(InputError):
    """Raised when a factor tree is not the five by four hierarchy."""

    __slots__ = ()


class InvalidGradeTable(InputError):
    """Raised when the breakpoints of a grade table cannot form a partition.

    Attributes:
        sub_factor: The name of the sub-factor the table belongs to.
    """

    sub_factor: str

    __slots__ = ('sub_factor',)

    def __init__(self, sub_factor: str, message: str) -> None:
        self.sub_factor = sub_factor

        super().__init__(f'Grade table of {sub_factor!r}: {message}')


class ParseError(InputError):
    """Raised when a data or scenario file cannot be parsed.

    Attributes:
        field: The dotted path of the offending field, for example
            `'urban.sigma'`.
        line: The line number of a syntax error, if known.
    """

    field: str
    line: Optional[int]

    __slots__ = ('field', 'line')

    def __init__(self, field: str, message: str, *, line: Optional[int] = None) -> None:
        self.field = field
        self.line = line

        location = f' (line {line})' if line is not None else ''
        super().__init__(f'{field}: {message}{location}')


class SchemaVersionMismatch(InputError):
    """Raised when a file declares a schema version this release cannot read.

    Attributes:
        expected: The schema version supported.
        got: The schema version found in the file.
    """

    expected: int
    got: object

    __slots__ = ('expected', 'got')

    def __init__(self, expected: int, got: object) -> None:
        self.expected = expected
        self.got = got

        super().__init__(f'Unsupported schema version {got!r}, expected {expected}')


class CrossRefError(InputError):
    """Raised when a name does not resolve against the factor tree.

    Attributes:
        field: Where the name was found.
        name: The name that could not be resolved.
    """

    field: str
    name: str

    __slots__ = ('field', 'name')

    def __init__(self, field: str, name: str) -> None:
        self.field = field
        self.name = name

        super().__init__(f'{field}: unknown sub-factor {name!r}')

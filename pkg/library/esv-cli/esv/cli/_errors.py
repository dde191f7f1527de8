from typing import Optional

from esv.models import ComputationError, EsvError, InputError

__all__ = (
    'StageError',
    'exit_code',
)


def exit_code(exc: BaseException) -> int:
    """The process exit code for an exception: 1 for bad input, 2 otherwise."""
    if isinstance(exc, StageError):
        exc = exc.cause
    if isinstance(exc, ComputationError):
        return 2
    return 1


class StageError(EsvError):
    """Raised when a stage of the pipeline fails.

    Attributes:
        stage: The name of the stage that failed, for example `'weights'`.
        cause: The exception the stage raised.
        field: The offending input field, when the cause names one.
    """

    stage: str
    cause: Exception
    field: Optional[str]

    __slots__ = ('stage', 'cause', 'field')

    def __init__(self, stage: str, cause: Exception, field: Optional[str] = None) -> None:
        self.stage = stage
        self.cause = cause
        self.field = field

        kind = 'input' if isinstance(cause, (InputError, ValueError)) else 'computation'
        location = f' [{field}]' if field else ''
        super().__init__(f'{stage} stage failed ({kind} error){location}: {cause}')

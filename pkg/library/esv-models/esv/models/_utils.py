import json
from pathlib import Path
from typing import Any, Callable, Union

from typing_extensions import Final

from ._errors import ParseError

__all__ = (
    'TOLERANCE',
    'dump_json',
    'load_json',
    'read_json_file',
)


# Allowed deviation from one for anything that should sum to one.
TOLERANCE: Final[float] = 1e-9

dump_json: Callable[..., str]
load_json: Callable[[Union[str, bytes]], Any]

try:
    import orjson

    def orjson_compat(obj: Any, *, pretty: bool = False) -> str:
        option = orjson.OPT_SORT_KEYS
        if pretty:
            option |= orjson.OPT_INDENT_2
        return orjson.dumps(obj, option=option).decode('utf-8')
    dump_json = orjson_compat
    load_json = orjson.loads

except ImportError:

    def json_compat(obj: Any, *, pretty: bool = False) -> str:
        if pretty:
            return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False)
        return json.dumps(obj, sort_keys=True, separators=(',', ':'), allow_nan=False)
    dump_json = json_compat
    load_json = json.loads


def read_json_file(path: Union[str, Path], field: str = '<file>') -> Any:
    """Read and decode a JSON document, converting failures to `ParseError`.

    Parameters:
        path: The file to read.
        field: The field name to report in errors.

    Returns:
        The decoded document.
    """
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as exc:
        raise ParseError(field, f'cannot read {str(path)!r}: {exc.strerror}') from exc

    try:
        return load_json(text)
    except json.JSONDecodeError as exc:
        # orjson's decode error subclasses the standard library's, so both
        # backends report the line of the syntax error.
        raise ParseError(field, f'invalid JSON: {exc.msg}', line=exc.lineno) from exc

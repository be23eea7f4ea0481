# MIT License

# Copyright (c) 2024 bootperc developers

# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:

# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.

# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

from __future__ import annotations

from typing import TYPE_CHECKING, Any, Union
from bootperc.fields.base import Field
from bootperc.exceptions import FieldError

if TYPE_CHECKING:
    from bootperc.schema import Schema

__all__ = (
    'String',
    'Integer',
    'Float',
)


class String(Field[str, str]):
    """Field representing a string (:class:`str`) value.

    Attributes
    ----------
    ERR_INVALID_DATATYPE:
        Error code raised when invalid data type is given in raw data.
    """
    ERR_INVALID_DATATYPE = 'string.invalid_datatype'

    def _get_default_error_message(self, error_code: Any, value: Any) -> Union[FieldError, str]:
        if error_code == self.ERR_INVALID_DATATYPE:
            return 'Value must be a string'

        return super()._get_default_error_message(error_code, value)

    def value_load(self, value: Any, schema: Schema) -> str:
        if not isinstance(value, str):
            raise self._error(self.ERR_INVALID_DATATYPE, value)
        return value

    def value_dump(self, value: str) -> str:
        return value


class Integer(Field[int, int]):
    """Field representing an integer (:class:`int`) value.

    Booleans are rejected even though :class:`bool` subclasses :class:`int`.
    numpy integer scalars are accepted and converted to :class:`int`.

    Parameters
    ----------
    strict: :class:`bool`
        Whether to only allow integer data types. If this is set to False,
        integral strings such as ``'42'`` are converted. Defaults to True.

    Attributes
    ----------
    ERR_INVALID_DATATYPE:
        Error code raised when invalid data type is given in raw data.
    ERR_COERCION_FAILED:
        Error code raised when strict mode is disabled and given raw value
        cannot be converted to an integer.
    """
    ERR_INVALID_DATATYPE = 'integer.invalid_datatype'
    ERR_COERCION_FAILED  = 'integer.coercion_failed'

    def __init__(self, strict: bool = True, **kwargs: Any) -> None:
        self.strict = strict
        super().__init__(**kwargs)

    def _get_default_error_message(self, error_code: Any, value: Any) -> Union[FieldError, str]:
        if error_code == self.ERR_INVALID_DATATYPE:
            return 'Value must be an integer'
        if error_code == self.ERR_COERCION_FAILED:
            return f'Failed to coerce {value!r} to integer'

        return super()._get_default_error_message(error_code, value)

    def value_load(self, value: Any, schema: Schema) -> int:
        if isinstance(value, bool):
            raise self._error(self.ERR_INVALID_DATATYPE, value)
        if isinstance(value, int):
            return value
        if hasattr(value, '__index__'):
            return value.__index__()
        if self.strict:
            raise self._error(self.ERR_INVALID_DATATYPE, value)
        try:
            return int(value)
        except Exception:
            raise self._error(self.ERR_COERCION_FAILED, value) from None

    def value_dump(self, value: int) -> int:
        return value


class Float(Field[float, float]):
    """Representation of a real valued (:class:`float`) field.

    Integers (but not booleans) are always accepted and converted, since
    probabilities such as ``0`` and ``1`` are commonly written as integers.

    Parameters
    ----------
    strict: :class:`bool`
        If set to False, numeric strings such as ``'0.3'`` are converted too.
        Defaults to True.

    Attributes
    ----------
    ERR_INVALID_DATATYPE:
        Error code raised when invalid data type is given in raw data.
    ERR_COERCION_FAILED:
        Error code raised when strict mode is disabled and given raw value
        cannot be converted to float.
    """
    ERR_INVALID_DATATYPE = 'float.invalid_datatype'
    ERR_COERCION_FAILED  = 'float.coercion_failed'

    def __init__(self, strict: bool = True, **kwargs: Any) -> None:
        self.strict = strict
        super().__init__(**kwargs)

    def _get_default_error_message(self, error_code: Any, value: Any) -> Union[FieldError, str]:
        if error_code == self.ERR_INVALID_DATATYPE:
            return 'Value must be a real number'
        if error_code == self.ERR_COERCION_FAILED:
            return f'Failed to coerce {value!r} to float'

        return super()._get_default_error_message(error_code, value)  # pragma: no cover

    def value_load(self, value: Any, schema: Schema) -> float:
        if isinstance(value, bool):
            raise self._error(self.ERR_INVALID_DATATYPE, value)
        if isinstance(value, (int, float)) or hasattr(value, '__float__'):
            return float(value)
        if self.strict:
            raise self._error(self.ERR_INVALID_DATATYPE, value)
        try:
            return float(value)
        except Exception:
            raise self._error(self.ERR_COERCION_FAILED, value) from None

    def value_dump(self, value: float) -> float:
        return value

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

from typing import TYPE_CHECKING, Any, Dict as DictT, Union
from bootperc.fields.base import Field
from bootperc.exceptions import FieldError

import collections.abc

if TYPE_CHECKING:
    from bootperc.schema import Schema

__all__ = (
    'Dict',
)

_SCALARS = (str, int, float, bool, type(None))


def _check_json_value(value: Any, path: str) -> None:
    if isinstance(value, _SCALARS):
        return
    if isinstance(value, (list, tuple)):
        for idx, item in enumerate(value):  # type: ignore
            _check_json_value(item, f'{path}[{idx}]')
        return
    if isinstance(value, collections.abc.Mapping):
        for key, item in value.items():  # type: ignore
            if not isinstance(key, str):
                raise ValueError(f'Key {key!r} at {path} must be a string')
            _check_json_value(item, f'{path}.{key}')
        return
    raise ValueError(f'Value at {path} has unsupported type {type(value).__name__}')


class Dict(Field[DictT[str, Any], DictT[str, Any]]):
    """A field that accepts a string keyed mapping of JSON compatible values.

    Insertion order is preserved: it is the order in which keys are
    serialized to JSON Lines and CSV.

    Attributes
    ----------
    ERR_INVALID_DATATYPE:
        Error raised when the given value is not a mapping.
    """
    ERR_INVALID_DATATYPE = 'dict.invalid_datatype'

    def _get_default_error_message(self, error_code: Any, value: Any) -> Union[FieldError, str]:
        if error_code == self.ERR_INVALID_DATATYPE:
            return 'Value must be a dictionary'

        return super()._get_default_error_message(error_code, value)  # pragma: no cover

    def value_load(self, value: Any, schema: Schema) -> DictT[str, Any]:
        if not isinstance(value, collections.abc.Mapping):
            raise self._error(self.ERR_INVALID_DATATYPE, value)
        _check_json_value(value, self.name)
        return dict(value)  # type: ignore

    def value_dump(self, value: DictT[str, Any]) -> DictT[str, Any]:
        return dict(value)

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

from typing import TYPE_CHECKING, Any, Type, TypeVar, Union
from bootperc.fields.base import Field
from bootperc.exceptions import FieldError

import enum

if TYPE_CHECKING:
    from bootperc.schema import Schema

__all__ = (
    'Choice',
)

EnumT = TypeVar('EnumT', bound=enum.Enum)


class Choice(Field[Union[EnumT, str], EnumT]):
    """A field that accepts one member of an :class:`enum.Enum`.

    Raw data may give the member itself, its value, or its name in any
    letter case; the loaded value is always the member and the dumped value
    is the member's value::

        class TopologySpec(Schema):
            family = fields.Choice(Family)

        TopologySpec({'family': 'rwheel', ...}).family  # Family.RWHEEL

    Parameters
    ----------
    enum_cls: Type[:class:`enum.Enum`]
        The enumeration whose members are accepted.

    Attributes
    ----------
    ERR_INVALID_VALUE:
        Error raised when the given value names no member.
    """
    ERR_INVALID_VALUE = 'choice.invalid_value'

    def __init__(self, enum_cls: Type[EnumT], **kwargs: Any) -> None:
        self.enum_cls = enum_cls
        super().__init__(**kwargs)

    def _get_default_error_message(self, error_code: Any, value: Any) -> Union[FieldError, str]:
        if error_code == self.ERR_INVALID_VALUE:
            accepted = ', '.join(repr(m.value) for m in self.enum_cls)
            return f'Value must be one from: {accepted}'

        return super()._get_default_error_message(error_code, value)  # pragma: no cover

    def value_load(self, value: Any, schema: Schema) -> EnumT:
        if isinstance(value, self.enum_cls):
            return value
        try:
            return self.enum_cls(value)
        except ValueError:
            pass
        if isinstance(value, str):
            for member in self.enum_cls:
                if member.name.lower() == value.lower() or str(member.value).lower() == value.lower():
                    return member
        raise self._error(self.ERR_INVALID_VALUE, value)

    def value_dump(self, value: EnumT) -> Any:
        return value.value

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

from typing import TYPE_CHECKING, Union, TypeVar, Callable, Generic, Any
from bootperc.utils import MISSING

import math

if TYPE_CHECKING:
    from bootperc.fields.base import Field
    from bootperc.schema import Schema


__all__ = (
    'Validator',
    'field',
    'Range',
    'Interval',
)

SchemaT = TypeVar('SchemaT', bound='Schema')
InputT = TypeVar('InputT')
ValidatorCallbackT = Callable[[SchemaT, InputT], Any]


class Validator(Generic[InputT]):
    """The base class for validators.

    Subclasses override :meth:`.validate` and raise :exc:`ValueError`,
    :exc:`AssertionError` or :exc:`bootperc.FieldError` on failure.
    """
    def validate(self, value: InputT, schema: Schema, /) -> Any:
        """Validates a loaded value.

        Parameters
        ----------
        value:
            The value to validate.
        schema: :class:`Schema`
            The schema being loaded. Sibling fields are already loaded.
        """
        raise NotImplementedError

    def __call__(self, schema: Schema, value: InputT, /) -> Any:
        return self.validate(value, schema)


def field(field: Union[Field[Any, Any], str]) -> Callable[[ValidatorCallbackT[SchemaT, Any]], ValidatorCallbackT[SchemaT, Any]]:
    """A decorator to register a schema method as validator for a field.

    The decorated method takes the schema (self) and the loaded value.
    Validators run once every field is loaded, so cross-field constraints
    such as ``n > 2r+1`` are expressed this way.

    Parameters
    ----------
    field: Union[:class:`bootperc.fields.Field`, :class:`str`]
        The field or name of field that the validator is for.
    """
    def __wrapper(func: ValidatorCallbackT[SchemaT, Any]) -> ValidatorCallbackT[SchemaT, Any]:
        func.__validator_field__ = field  # type: ignore
        return func

    return __wrapper


class Range(Validator[int]):
    """Validates that an integer lies in an inclusive range.

    - ``Range(5)`` must be between 0-5 inclusive
    - ``Range(2, 10)`` must be between 2-10 inclusive
    - ``Range(1, None)`` must be at least 1

    Parameters
    ----------
    lb: :class:`int`
        The lower bound, or the upper bound when ``ub`` is omitted.
    ub: Optional[:class:`int`]
        The upper bound. None means unbounded.
    """
    __slots__ = (
        'lb',
        'ub',
        '_msg',
    )

    def __init__(self, lb: int = MISSING, ub: Union[int, None] = MISSING, /) -> None:
        if lb is MISSING:
            raise TypeError('Range() must take at least one argument')  # pragma: no cover
        if ub is MISSING:
            lb, ub = 0, lb

        self.lb = lb
        self.ub = ub
        if ub is None:
            self._msg = f'Value must be at least {lb}'
        elif ub == lb:
            self._msg = f'Value must be equal to {lb}'
        else:
            self._msg = f'Value must be in range {lb} to {ub} inclusive'

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}({self.lb}, {self.ub})'  # pragma: no cover

    def validate(self, value: int, schema: Schema) -> Any:
        if value < self.lb or (self.ub is not None and value > self.ub):
            raise ValueError(self._msg)


class Interval(Validator[float]):
    """Validates that a real number lies in an interval.

    Used for probabilities: ``Interval(0, 1)`` is the closed unit interval,
    ``Interval(0, 1, closed=False)`` the open one.

    Parameters
    ----------
    lo: :class:`float`
        The lower end.
    hi: :class:`float`
        The upper end.
    closed: :class:`bool`
        Whether both ends are included. Defaults to True.
    """
    __slots__ = (
        'lo',
        'hi',
        'closed',
    )

    def __init__(self, lo: float, hi: float, *, closed: bool = True) -> None:
        self.lo = lo
        self.hi = hi
        self.closed = closed

    def __repr__(self) -> str:
        brackets = '[]' if self.closed else '()'
        return f'{brackets[0]}{self.lo}, {self.hi}{brackets[1]}'

    def validate(self, value: float, schema: Schema) -> Any:
        if math.isnan(value):
            raise ValueError('Value must not be NaN')
        inside = self.lo <= value <= self.hi if self.closed else self.lo < value < self.hi
        if not inside:
            raise ValueError(f'Value must be in {self!r}')

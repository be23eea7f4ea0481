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

from typing import (
    TYPE_CHECKING,
    TypeVar,
    Generic,
    Any,
    Type,
    Literal,
    Optional,
    Union,
    List,
    Sequence,
    overload,
)
from typing_extensions import Self
from bootperc.validate import Validator, ValidatorCallbackT
from bootperc.utils import MISSING
from bootperc.exceptions import FieldError, FrozenError

if TYPE_CHECKING:
    from bootperc.schema import Schema


__all__ = (
    'Field',
)

RawValueT = TypeVar('RawValueT')
FinalValueT = TypeVar('FinalValueT')
ValidatorT = Union[Validator[Any], ValidatorCallbackT[Any, Any]]


class Field(Generic[RawValueT, FinalValueT]):
    """The base class for all parameter fields.

    Subclasses must implement :meth:`.value_load` and :meth:`.value_dump`.

    Parameters
    ----------
    none: :class:`bool`
        Whether this field accepts None.
    required: :class:`bool`
        Whether this field is required. Ignored when a default is given.
    default:
        The default value. A callable is called with the schema instance to
        produce the value.
    validators: List[Union[callable, :class:`validate.Validator`]]
        Validators ran on the loaded value, after all fields of the schema
        are loaded (so they may read sibling fields).
    description: :class:`str`
        Human readable description, reused by the command line help.

    Attributes
    ----------
    ERR_FIELD_REQUIRED:
        Error code raised when a required field is missing.
    ERR_NONE_DISALLOWED:
        Error code raised when None is given to a field with ``none=False``.
    ERR_VALIDATION_FAILED:
        Error code raised when a validator fails without a message.
    """
    ERR_FIELD_REQUIRED = 'field.field_required'
    ERR_NONE_DISALLOWED = 'field.none_disallowed'
    ERR_VALIDATION_FAILED = 'field.validation_failed'

    __slots__ = (
        'none',
        'required',
        'description',
        '_default',
        '_name',
        '_schema',
        '_validators',
    )

    def __init__(
            self,
            *,
            none: bool = False,
            required: bool = True,
            default: Any = MISSING,
            validators: Sequence[ValidatorT] = MISSING,
            description: str = '',
        ) -> None:

        self.none = none
        self.required = required and (default is MISSING)
        self.description = description
        self._default = default
        self._validators: List[ValidatorT] = []
        self._name: str = MISSING
        self._schema: Type[Schema] = MISSING

        if validators is not MISSING:
            for validator in validators:
                self.add_validator(validator)

    @overload
    def __get__(self, instance: Literal[None], owner: Type[Schema]) -> Self:
        ...

    @overload
    def __get__(self, instance: Schema, owner: Type[Schema]) -> FinalValueT:
        ...

    def __get__(self, instance: Optional[Schema], owner: Type[Schema]) -> Union[FinalValueT, Self]:
        if instance is None:
            return self

        return instance.get_value_for(self._name)

    def __set__(self, instance: Schema, value: RawValueT) -> None:
        # values are only written while loading; evolve() makes changed copies
        raise FrozenError(instance)

    def _bind(self, name: str, schema: Type[Schema]) -> None:
        if self._name is not MISSING:
            raise RuntimeError(f'Field {schema.__name__}.{name} is already bound to {self._schema.__name__}.{self._name}')

        self._name = name
        self._schema = schema

    def _run_validators(self, schema: Schema, value: Any) -> List[FieldError]:
        errors: List[FieldError] = []

        for validator in self._validators:
            try:
                validator(schema, value)
            except (FieldError, AssertionError, ValueError) as err:
                if not isinstance(err, FieldError):
                    err = self._from_standard_error(err)
                errors.append(err)

        return errors

    def _from_standard_error(self, err: Union[ValueError, AssertionError]) -> FieldError:
        message = str(err)
        if not message:
            return self._error(self.ERR_VALIDATION_FAILED)
        return FieldError(message)

    def _error(self, error_code: str, value: Any = MISSING) -> FieldError:
        error = self.format_error(error_code, value)
        if error is None:
            error = self._get_default_error_message(error_code, value)
        if isinstance(error, str):
            return FieldError(error)
        return error

    def _get_default_error_message(self, error_code: str, value: Any) -> Union[FieldError, str]:
        if error_code == self.ERR_VALIDATION_FAILED:
            return 'Validation failed for this field.'
        if error_code == self.ERR_NONE_DISALLOWED:
            return 'This field must not be None.'
        if error_code == self.ERR_FIELD_REQUIRED:
            return 'This field is required.'

        return 'An unknown error occurred while validating this field.'  # pragma: no cover

    @property
    def name(self) -> str:
        """The name of attribute that the field is assigned to.

        :type: :class:`str`
        """
        if self._name is MISSING:  # pragma: no cover
            raise RuntimeError('Field has no name set')
        return self._name

    @property
    def schema(self) -> Type[Schema]:
        """The schema that the field belongs to.

        :type: :class:`Schema`
        """
        if self._schema is MISSING:  # pragma: no cover
            raise RuntimeError('Field has no schema set')
        return self._schema

    @property
    def default(self) -> Any:
        return self._default if self._default is not MISSING else None

    def has_default(self) -> bool:
        """Indicates whether the field has a default value."""
        return self._default is not MISSING

    def resolve_default(self, schema: Schema) -> Any:
        return self._default(schema) if callable(self._default) else self._default

    def add_validator(self, validator: ValidatorT) -> None:
        """Registers a validator for this field.

        Parameters
        ----------
        validator: Union[callable, :class:`validate.Validator`]
            The validator to register. A callable takes the schema and the
            loaded value.
        """
        if not callable(validator):
            raise TypeError('validator must be a callable or Validator class instance')  # pragma: no cover

        self._validators.append(validator)

    def format_error(self, error_code: Any, value: Any, /) -> Optional[Union[FieldError, str]]:
        """Formats the error.

        This method can be overriden to customize error messages. Returning
        None falls back to the default message.

        Parameters
        ----------
        error_code: :class:`str`
            The error code indicating the error that was raised.
        value:
            The offending raw value, or ``MISSING`` when the field was absent.
        """
        return None

    def value_load(self, value: Any, schema: Schema, /) -> FinalValueT:
        """Deserializes a raw value.

        Parameters
        ----------
        value:
            The raw value to deserialize.
        schema: :class:`Schema`
            The schema being loaded.
        """
        raise NotImplementedError

    def value_dump(self, value: FinalValueT, /) -> Any:
        """Serializes a loaded value to its raw (JSON compatible) form."""
        raise NotImplementedError


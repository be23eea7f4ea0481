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
    Dict,
    Any,
    Mapping,
    List,
    Sequence,
    Tuple,
    Type,
)
from typing_extensions import Self
from bootperc.utils import MISSING, current_field_key, current_schema
from bootperc.exceptions import FieldError, FieldNotSet
from bootperc.configs import SchemaConfig
from bootperc import configs

import collections.abc
import inspect
import json

if TYPE_CHECKING:
    from bootperc.fields.base import Field

__all__ = (
    'Schema',
)


def _schema_repr(self: Schema) -> str:
    attrs = ', '.join((f'{name}={value!r}' for name, value in self._field_values.items()))
    return f'{self.__class__.__name__}({attrs})'


class _SchemaMeta(type):
    def __new__(cls, clsname: str, bases: Tuple[type, ...], attrs: Dict[str, Any]):
        config = SchemaConfig
        found = False
        for value in attrs.values():
            if inspect.isclass(value) and issubclass(value, SchemaConfig):
                found = True
                config = value
                break

        if not found:
            for base in bases:
                if hasattr(base, '__config__'):
                    config = base.__config__

        if config.slotted:
            attrs.setdefault('__slots__', ())

        attrs['__config__'] = config
        return super().__new__(cls, clsname, bases, attrs)


class Schema(metaclass=_SchemaMeta):
    """The base class for all parameter schemas.

    A schema declares its parameters as :class:`fields.Field` class attributes
    and is initialized from a mapping of raw values. Every parameter is
    loaded, then every validator runs; all failures are reported together in
    one :exc:`ValidationError`.

    Parameters
    ----------
    data: Mapping[:class:`str`, Any]
        The raw data to initialize the schema with.
    ignore_extra: :class:`bool`
        Whether to ignore unknown keys in the data. Overrides
        :attr:`SchemaConfig.ignore_extra`.
    """
    __fields__: Dict[str, Field[Any, Any]]
    __config__: Type[SchemaConfig] = SchemaConfig

    __slots__ = (
        '_field_values',
    )

    def __init__(self, data: Mapping[str, Any], /, *, ignore_extra: bool = MISSING) -> None:
        if not isinstance(data, collections.abc.Mapping):
            raise TypeError(f'data must be a mapping, not {type(data)}')

        token = current_schema.set(self)
        try:
            self._field_values: Dict[str, Any] = {}
            self._load(data, ignore_extra=ignore_extra)
        finally:
            current_schema.reset(token)

    def __init_subclass__(cls) -> None:
        from bootperc.fields.base import Field  # circular import

        cls.__fields__ = cls.__fields__.copy() if hasattr(cls, '__fields__') else {}

        members = vars(cls).copy()
        for name, member in members.items():
            if isinstance(member, Field):
                member._bind(name, cls)
                cls.__fields__[name] = member  # type: ignore
            elif callable(member) and hasattr(member, '__validator_field__'):
                field = member.__validator_field__
                if isinstance(field, str):
                    field = cls.__fields__.get(field, field)
                if not isinstance(field, Field):
                    raise TypeError(f'Validator {member.__name__} got an unknown field {field}')  # pragma: no cover

                field.add_validator(member)

        if cls.__config__.add_repr and '__repr__' not in members:
            cls.__repr__ = _schema_repr  # type: ignore

    def _load(self, data: Mapping[str, Any], *, ignore_extra: bool) -> None:
        if ignore_extra is MISSING:
            ignore_extra = self.__config__.ignore_extra

        fields = self.__fields__
        pending = set(fields)
        errors: List[FieldError] = []

        for key, value in data.items():
            token = current_field_key.set(key)
            try:
                field = fields.get(key)
                if field is None:
                    if not ignore_extra:
                        errors.append(FieldError('Invalid or unknown field.'))
                    continue
                pending.discard(key)
                errors.extend(self._load_value(field, value))
            finally:
                current_field_key.reset(token)

        for key in [k for k in fields if k in pending]:
            field = fields[key]
            token = current_field_key.set(key)
            try:
                if field.required:
                    errors.append(field._error(field.ERR_FIELD_REQUIRED))
                elif field.has_default():
                    self._field_values[key] = field.resolve_default(self)
            finally:
                current_field_key.reset(token)

        # validators run last so that they can read sibling fields
        if not errors:
            for key, field in fields.items():
                if key not in self._field_values or self._field_values[key] is None:
                    continue
                token = current_field_key.set(key)
                try:
                    errors.extend(field._run_validators(self, self._field_values[key]))
                finally:
                    current_field_key.reset(token)

        if errors:
            raise configs.config.validation_error_cls(errors)

    def _load_value(self, field: Field[Any, Any], value: Any) -> List[FieldError]:
        if value is None:
            if field.none:
                self._field_values[field.name] = None
                return []
            return [field._error(field.ERR_NONE_DISALLOWED, None)]

        try:
            self._field_values[field.name] = field.value_load(value, self)
        except (ValueError, AssertionError, FieldError) as err:
            if not isinstance(err, FieldError):
                err = field._from_standard_error(err)
            return [err]
        return []

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Schema) or type(other) is not type(self):
            return NotImplemented
        return self.dump() == other.dump()

    def __hash__(self) -> int:
        if not self.__config__.frozen:
            raise TypeError(f'unhashable schema: {self.__class__.__name__!r} is not frozen')
        return hash(json.dumps(self.dump(), sort_keys=True))

    def get_value_for(self, field_name: str, default: Any = MISSING, /) -> Any:
        """Returns the value for a field.

        Parameters
        ----------
        field_name: :class:`str`
            The name of field to get value for.
        default:
            The default value to return if field has no value.

        Raises
        ------
        RuntimeError
            Invalid field name.
        FieldNotSet
            Field value is not set.
        """
        try:
            field = self.__fields__[field_name]
        except KeyError:
            raise RuntimeError(f'Invalid field name {field_name!r}') from None
        try:
            return self._field_values[field_name]
        except KeyError:
            if default is not MISSING:
                return default
            raise FieldNotSet(field, self) from None

    def evolve(self, **changes: Any) -> Self:
        """Returns a new instance with the given fields replaced.

        This is the way to derive variants of frozen schemas, for example a
        trial plan at a different ``p``::

            plan.evolve(p=0.35)
        """
        data: Dict[str, Any] = dict(self._field_values)
        data.update(changes)
        return self.__class__(data)

    def dump(self, *, include: Sequence[str] = MISSING, exclude: Sequence[str] = MISSING) -> Dict[str, Any]:
        """Serializes the schema to its raw form.

        Keys appear in field declaration order. ``include`` and ``exclude``
        are mutually exclusive.

        Raises
        ------
        TypeError
            Both include and exclude provided.
        """
        if include is not MISSING and exclude is not MISSING:
            raise TypeError('include and exclude are mutually exclusive parameters.')

        out: Dict[str, Any] = {}
        for name, field in self.__fields__.items():
            if include is not MISSING and name not in include:
                continue
            if exclude is not MISSING and name in exclude:
                continue
            try:
                value = self._field_values[name]
            except KeyError:
                continue
            out[name] = None if value is None else field.value_dump(value)

        return out

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

from typing import TYPE_CHECKING, Any, Optional, List, Dict
from bootperc.utils import current_field_key, current_schema

if TYPE_CHECKING:
    from bootperc.fields.base import Field
    from bootperc.schema import Schema

__all__ = (
    'BootpercException',
    'FieldNotSet',
    'FrozenError',
    'FieldError',
    'ValidationError',
    'ParameterError',
    'InvalidVertexError',
    'ConfigurationMismatchError',
    'GuardExceededError',
    'BracketError',
    'GridCellError',
    'UnknownCheckError',
)


class BootpercException(Exception):
    """Base class for all exceptions provided by bootperc."""


class FieldNotSet(AttributeError, BootpercException):
    """An exception raised when a field is accessed that has no value set.

    This only happens for optional fields without a default. For a more
    Pythonic handling of this, this exception inherits :exc:`AttributeError`.

    Attributes
    ----------
    field: :class:`bootperc.fields.Field`
        The field that was accessed but had no value set.
    schema: :class:`Schema`
        The schema that accessed the field.
    """
    def __init__(self, field: Field[Any, Any], schema: Schema) -> None:
        self.field = field
        self.schema = schema
        super().__init__(f'Field {field.name!r} has no value set')


class FrozenError(BootpercException):
    """An exception raised when a field of a loaded schema is assigned to.

    Schemas are read only once loaded; :meth:`Schema.evolve` returns a
    changed copy.

    Attributes
    ----------
    schema: :class:`Schema`
        The schema that was assigned to.
    """
    def __init__(self, schema: Schema) -> None:
        self.schema = schema
        super().__init__(f'{schema.__class__.__name__} schema is read only; use evolve() for a changed copy')


class FieldError(BootpercException):
    """An error raised when validation fails for a single parameter.

    When raised from validators, it is accounted as a validation error and
    included in the subsequently raised :exc:`ValidationError`. Raising
    :exc:`ValueError` or :exc:`AssertionError` in a validator has the same
    effect and is usually more convenient.

    Parameters
    ----------
    message:
        The error message. If this is a sequence, each element of sequence is
        accounted as a separate error. A mapping is used for errors of nested
        schemas.

    Attributes
    ----------
    schema: :class:`Schema`
        The schema that the error originates from.
    """
    def __init__(self, message: Any, /) -> None:
        self.message = message
        self.schema = current_schema.get()
        self._key = current_field_key.get()
        super().__init__(message)

    def _copy_with(self, message: Any) -> FieldError:
        copy = self.__class__.__new__(self.__class__)
        copy.message = message
        copy.schema = self.schema
        copy._key = self._key
        return copy

    @property
    def key(self) -> str:
        """The key that points to the erroneous value in raw data.

        :type: :class:`str`
        """
        return self._key


class ValidationError(BootpercException):
    """An error raised when validation fails with one or more :class:`FieldError`.

    The message renders every failing parameter as a tree::

        │ 1 validation error in schema 'TopologySpec'
        │
        └── In field n:
            └── n must exceed 2r+1 (got n=5, r=2)

    Parameters
    ----------
    errors: List[:class:`FieldError`]
        The errors that caused the validation failure.
    """
    def __init__(self, errors: List[FieldError]) -> None:
        self.errors: List[FieldError] = []
        self.schema = current_schema.get()
        for error in errors:
            if isinstance(error.message, (list, tuple)):
                self.errors.extend(error._copy_with(m) for m in error.message)  # type: ignore
            else:
                self.errors.append(error)
        super().__init__(self._make_message())

    def _grouped(self) -> Dict[str, List[FieldError]]:
        out: Dict[str, List[FieldError]] = {}
        for error in self.errors:
            out.setdefault(error.key, []).append(error)
        return out

    def _make_message(self, grouped: Optional[Dict[str, Any]] = None, level: int = 0) -> str:
        if grouped is None:
            grouped = self._grouped()

        builder: List[str] = []
        if level == 0:
            noun = 'errors' if len(grouped) > 1 else 'error'
            builder.append(f'│ {len(grouped)} validation {noun} in schema {self.schema.__class__.__qualname__!r}')

        indent = level*4
        for name, errors in grouped.items():
            builder.append(f'{" "*indent}│')
            builder.append(f'{" "*indent}└── In field {name}:')
            for idx, error in enumerate(errors):
                message = error.message if isinstance(error, FieldError) else error
                if isinstance(message, dict):
                    builder.append(self._make_message(message, level=level+1))  # type: ignore
                    continue
                prefix = '└──' if idx == len(errors) - 1 else '├──'
                builder.append(f'{" "*(indent+4)}{prefix} {message}')

        if level != 0:
            return '\n'.join(builder)
        return '\n│\n' + '\n'.join(builder)

    def _stringify(self, obj: Any) -> Any:
        if isinstance(obj, FieldError):
            return self._stringify(obj.message)
        if isinstance(obj, dict):
            return {k: self._stringify(v) for k, v in obj.items()}  # type: ignore
        if isinstance(obj, list):
            return [self._stringify(v) for v in obj]  # type: ignore
        return str(obj)

    def raw(self) -> Dict[str, List[Any]]:
        """Converts the error into raw format.

        The returned dictionary maps field names to the list of error
        messages of that field.
        """
        return {key: [self._stringify(e) for e in errors] for key, errors in self._grouped().items()}

    def first_message(self) -> str:
        """Returns a single line ``field: message`` summary of the first error.

        Used by the command line front end which reports one diagnostic line.
        """
        key, messages = next(iter(self.raw().items()))
        message = messages[0]
        while isinstance(message, dict):
            key, nested = next(iter(message.items()))  # type: ignore
            message = nested[0]
        return f'{key}: {message}'


class ParameterError(ValueError, BootpercException):
    """An error raised when an oracle or estimator receives parameters outside
    of its domain (for example ``ℓ < r+1`` for the wall measure)."""


class InvalidVertexError(IndexError, BootpercException):
    """An error raised when a vertex id does not belong to the topology.

    Attributes
    ----------
    vertex: :class:`int`
        The offending vertex id.
    vertex_count: :class:`int`
        The number of vertices of the topology.
    """
    def __init__(self, vertex: Any, vertex_count: int) -> None:
        self.vertex = vertex
        self.vertex_count = vertex_count
        super().__init__(f'Invalid vertex id {vertex!r}, expected an integer in 0..{vertex_count - 1}')


class ConfigurationMismatchError(ValueError, BootpercException):
    """An error raised when a configuration does not fit the topology it is used with."""


class GuardExceededError(BootpercException):
    """An error raised when an exhaustive enumeration would exceed its size guard.

    Guards can be bypassed by passing ``accept_cost=True`` to the relevant
    function.

    Attributes
    ----------
    guard: :class:`str`
        The name of the :class:`GlobalConfig` option holding the limit.
    limit: :class:`int`
        The configured limit.
    value: :class:`int`
        The requested size.
    alternative: :class:`str`
        The cheaper operation that should be used instead.
    """
    def __init__(self, guard: str, limit: int, value: int, alternative: str) -> None:
        self.guard = guard
        self.limit = limit
        self.value = value
        self.alternative = alternative
        super().__init__(f'{guard} is {limit} but {value} was requested; use {alternative} '
                         f'instead or pass accept_cost=True')


class BracketError(BootpercException):
    """An error raised when a bisection bracket does not straddle the target.

    Attributes
    ----------
    p_lo, p_hi: :class:`float`
        The bracket endpoints.
    estimate_lo, estimate_hi: :class:`float`
        The estimated success probability at each endpoint.
    target: :class:`float`
        The target probability.
    """
    def __init__(self, p_lo: float, p_hi: float, estimate_lo: float, estimate_hi: float, target: float) -> None:
        self.p_lo = p_lo
        self.p_hi = p_hi
        self.estimate_lo = estimate_lo
        self.estimate_hi = estimate_hi
        self.target = target
        super().__init__(f'Bracket [{p_lo}, {p_hi}] does not straddle target {target}: '
                         f'estimate({p_lo})={estimate_lo}, estimate({p_hi})={estimate_hi}')


class GridCellError(BootpercException):
    """An error raised when a single cell of a parameter scan fails.

    Attributes
    ----------
    index: :class:`int`
        The cell index in row-major (p, r) order.
    p: :class:`float`
        The cell's initial activation probability.
    r: :class:`int`
        The cell's radius.
    original: :class:`Exception`
        The underlying error.
    """
    def __init__(self, index: int, p: float, r: int, original: Exception) -> None:
        self.index = index
        self.p = p
        self.r = r
        self.original = original
        super().__init__(f'Scan cell {index} (p={p}, r={r}) failed: {original}')


class UnknownCheckError(ValueError, BootpercException):
    """An error raised when an unknown verification id is requested."""

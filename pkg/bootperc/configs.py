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

from typing import Callable, Any, Type, Generic, TypeVar, Dict, Mapping, Optional
from bootperc.exceptions import ValidationError

import os

__all__ = (
    'config',
    'GlobalConfig',
    'SchemaConfig',
)

_T = TypeVar('_T')
_GC = TypeVar('_GC', bound='GlobalConfig')
_SPHINX_BUILD = os.environ.get('SPHINX_BUILD', False)


class _ConfigOption(Generic[_T, _GC]):
    __slots__ = (
        '_default',
        '_func',
        '_name',
        '_setter',
        '__doc__',
    )

    def __init__(self, func: Callable[[_GC], _T]) -> None:
        self._default = func(None)  # type: ignore
        self._func = func
        self._name = func.__name__
        self.__doc__ = func.__doc__
        self._setter = None

    def setter(self, func: Callable[[_GC, Any], _T]) -> None:
        self._setter = func

    def __get__(self, instance: Optional[_GC], owner: Type[_GC]) -> _T:
        if instance is None:
            # sphinx needs the descriptor itself to read __doc__
            if _SPHINX_BUILD:
                return self  # type: ignore  # pragma: no cover
            return self._default
        try:
            return instance._values[self._name]
        except KeyError:  # pragma: no cover
            return self._default

    def __set__(self, instance: _GC, value: _T) -> None:
        if self._setter:
            value = self._setter(instance, value)

        instance._values[self._name] = value

def cfg_option(func: Callable[[_GC], _T]) -> _ConfigOption[_T, _GC]:
    return _ConfigOption(func)


def _positive_int(name: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise TypeError(f'{name} must be a positive integer')
    return value


class GlobalConfig:
    """The global configuration of bootperc.

    The instance of this class is available as :data:`bootperc.config`. The
    attributes of this class are the available config options; reading an
    option on the class returns its default.

    Options that only affect *how* work is scheduled (``worker_threads``,
    ``trial_chunk_size``) never change any estimate: trial seeds and chunk
    boundaries are derived from the trial index alone.
    """
    __slots__ = (
        '_values',
    )

    __config_options__ = (
        'validation_error_cls',
        'worker_threads',
        'trial_chunk_size',
        'ci_mode',
        'max_tr_radius',
        'max_block_length',
        'max_enumeration_vertices',
    )

    def __init__(self, **options: Any) -> None:
        self._values: Dict[str, Any] = {}

        unknown = set(options).difference(self.__config_options__)
        if unknown:
            raise TypeError(f'Unknown config options: {", ".join(sorted(unknown))}')
        for name in self.__config_options__:
            setattr(self, name, options.get(name, getattr(GlobalConfig, name)))

    @classmethod
    def from_env(cls, environ: Mapping[str, str] = os.environ, **options: Any) -> GlobalConfig:
        """Builds a configuration honouring the ``BOOTPERC_*`` environment variables.

        - ``BOOTPERC_THREADS``: worker count hint (:attr:`worker_threads`).
        - ``BOOTPERC_CI``: ``1`` enables :attr:`ci_mode`.

        Explicit keyword ``options`` take precedence over the environment.
        """
        threads = environ.get('BOOTPERC_THREADS')
        if threads and 'worker_threads' not in options:
            try:
                options['worker_threads'] = int(threads)
            except ValueError:
                raise TypeError(f'BOOTPERC_THREADS must be an integer, not {threads!r}') from None
        if 'ci_mode' not in options:
            options['ci_mode'] = environ.get('BOOTPERC_CI', '') == '1'
        return cls(**options)

    def overrides(self) -> Dict[str, Any]:
        """Returns the options whose value differs from the default."""
        return {
            name: self._values[name]
            for name in self.__config_options__
            if name != 'validation_error_cls' and self._values[name] != getattr(GlobalConfig, name)
        }

    @cfg_option
    def validation_error_cls(self) -> Type[ValidationError]:
        """The :class:`ValidationError` exception class raised on validation failure.

        :type: Type[:class:`ValidationError`]
        """
        return ValidationError

    @validation_error_cls.setter
    def _set_validation_error_cls(self, value: Type[ValidationError]):
        if not issubclass(value, ValidationError):
            raise TypeError('validation_error_cls must be a subclass of ValidationError')
        return value

    @cfg_option
    def worker_threads(self) -> int:
        """Number of worker threads used for Monte Carlo trials.

        This is a hint only and never changes results.

        :type: :class:`int`
        """
        return 1

    @worker_threads.setter
    def _set_worker_threads(self, value: int):
        return _positive_int('worker_threads', value)

    @cfg_option
    def trial_chunk_size(self) -> int:
        """Number of trials simulated together as a single work unit.

        :type: :class:`int`
        """
        return 512

    @trial_chunk_size.setter
    def _set_trial_chunk_size(self, value: int):
        return _positive_int('trial_chunk_size', value)

    @cfg_option
    def ci_mode(self) -> bool:
        """Strict reproducibility mode.

        When enabled, the command line front end refuses to draw master seeds
        from system entropy.

        :type: :class:`bool`
        """
        return False

    @ci_mode.setter
    def _set_ci_mode(self, value: bool):
        if not isinstance(value, bool):
            raise TypeError('ci_mode must be a boolean')
        return value

    @cfg_option
    def max_tr_radius(self) -> int:
        """Largest radius for which the certified spreading words are enumerated.

        :type: :class:`int`
        """
        return 12

    @max_tr_radius.setter
    def _set_max_tr_radius(self, value: int):
        return _positive_int('max_tr_radius', value)

    @cfg_option
    def max_block_length(self) -> int:
        """Largest block length for exhaustive block measures.

        :type: :class:`int`
        """
        return 24

    @max_block_length.setter
    def _set_max_block_length(self, value: int):
        return _positive_int('max_block_length', value)

    @cfg_option
    def max_enumeration_vertices(self) -> int:
        """Largest vertex count for exhaustive percolation probabilities.

        :type: :class:`int`
        """
        return 22

    @max_enumeration_vertices.setter
    def _set_max_enumeration_vertices(self, value: int):
        return _positive_int('max_enumeration_vertices', value)


def _config_from_env() -> GlobalConfig:
    try:
        return GlobalConfig.from_env()
    except TypeError:
        # invalid BOOTPERC_* values are reported by the command line tool
        return GlobalConfig()


config = _config_from_env()
"""The global configuration of bootperc."""


class SchemaConfig:
    """The configuration for a schema.

    This is a base class for defining configuration of a schema. In order to
    define configuration for a schema, this class is subclassed inside a :class:`Schema`::

        class TopologySpec(Schema):
            ...

            class Config(SchemaConfig):
                frozen = True
    """
    add_repr = True
    """Whether to add a :meth:`__repr__` listing the schema's field values."""

    slotted = True
    """Whether to add a :attr:`__slots__` to the schema class."""

    ignore_extra = False
    """Whether to ignore extra (unknown) keys when initializing the schema."""

    frozen = False
    """Whether instances are hashable. Frozen schemas hash and compare by their dumped values."""

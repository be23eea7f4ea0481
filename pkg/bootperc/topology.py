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

"""Graph families of the simulator: the ring ``C_n(r)`` and the r-wheel
``WH_n(r) = u * C_n(r)``.

Vertex ids ``0..n-1`` are ring positions (arithmetic mod n); the hub of an
r-wheel has id ``n``. Neighborhoods are computed on the fly and never
stored as edge lists.
"""

from __future__ import annotations

from typing import Any, List
from bootperc import fields, validate
from bootperc.schema import Schema
from bootperc.configs import SchemaConfig
from bootperc.exceptions import InvalidVertexError
from bootperc.utils import ceil_div

import enum
import numpy as np

__all__ = (
    'Family',
    'Rule',
    'TopologySpec',
    'Topology',
    'build_topology',
    'window_counts',
)


class Family(enum.Enum):
    """The graph families."""

    RING = 'ring'
    RWHEEL = 'rwheel'


class Rule(enum.Enum):
    """Majority bootstrap percolation rules."""

    STRICT = 'strict'
    SIMPLE = 'simple'

    def threshold(self, degree: int) -> int:
        """Number of active neighbors a passive vertex of the given degree needs.

        Strict majority needs ``⌈(deg+1)/2⌉``, simple majority ``⌈deg/2⌉``;
        both agree for odd degrees.
        """
        return ceil_div(degree + 1, 2) if self is Rule.STRICT else ceil_div(degree, 2)


class TopologySpec(Schema):
    """The parameters of a graph instance.

    Raw data keys are ``family``, ``n`` (ring length) and ``r`` (radius)::

        spec = TopologySpec({'family': 'rwheel', 'n': 10, 'r': 2})

    Ring lengths with ``n <= 2r+1`` are rejected: a vertex would then be
    adjacent to itself or to the same vertex twice.
    """
    family = fields.Choice(Family, description='graph family')
    n = fields.Integer(validators=[validate.Range(1, None)], description='ring length')
    r = fields.Integer(validators=[validate.Range(1, None)], description='radius')

    class Config(SchemaConfig):
        frozen = True

    @validate.field('n')
    def _check_ring_length(self, value: int) -> None:
        r = self.get_value_for('r', None)
        if r is not None and r >= 1 and value <= 2*r + 1:
            raise ValueError(f'n must exceed 2r+1 (got n={value}, r={r})')


def window_counts(states: np.ndarray, r: int, *, circular: bool) -> np.ndarray:
    """Counts, for every cell of every row, the set cells within distance ``r``.

    The cell itself is not counted. ``states`` is a 2-D 0/1 array of shape
    ``(rows, length)``. With ``circular=True`` rows are rings (``length``
    must exceed ``2r``); otherwise cells beyond both ends count as unset.
    One cumulative sum per row makes this O(length) regardless of ``r``.
    """
    x = np.asarray(states, dtype=np.int32)
    rows, length = x.shape
    if circular:
        ext = np.concatenate((x[:, length - r:], x, x[:, :r]), axis=1)
    else:
        pad = np.zeros((rows, r), dtype=np.int32)
        ext = np.concatenate((pad, x, pad), axis=1)

    cs = np.zeros((rows, length + 2*r + 1), dtype=np.int32)
    np.cumsum(ext, axis=1, out=cs[:, 1:])
    return cs[:, 2*r + 1:] - cs[:, :length] - x


class Topology:
    """A concrete graph instance built from a :class:`TopologySpec`.

    Instances are immutable and safe to share between threads.

    Attributes
    ----------
    spec: :class:`TopologySpec`
        The parameters this topology was built from.
    n: :class:`int`
        Ring length.
    r: :class:`int`
        Radius.
    vertex_count: :class:`int`
        ``n`` for rings, ``n + 1`` for r-wheels.
    hub: Optional[:class:`int`]
        The hub's vertex id (``n``) or None for rings.
    """
    __slots__ = (
        'spec',
        'n',
        'r',
        'vertex_count',
        'hub',
    )

    def __init__(self, spec: TopologySpec) -> None:
        self.spec = spec
        self.n: int = spec.n
        self.r: int = spec.r
        self.hub = self.n if spec.family is Family.RWHEEL else None
        self.vertex_count = self.n + (self.hub is not None)

    def __repr__(self) -> str:
        return f'Topology(family={self.family.value!r}, n={self.n}, r={self.r})'

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Topology):
            return NotImplemented
        return self.spec == other.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    @property
    def family(self) -> Family:
        return self.spec.family

    @property
    def has_hub(self) -> bool:
        return self.hub is not None

    def _check_vertex(self, v: Any) -> int:
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not 0 <= v < self.vertex_count:
            raise InvalidVertexError(v, self.vertex_count)
        return int(v)

    def degree(self, v: int) -> int:
        """Returns the degree of a vertex."""
        v = self._check_vertex(v)
        if v == self.hub:
            return self.n
        return 2*self.r + self.has_hub

    def neighbors(self, v: int) -> List[int]:
        """Returns the neighbors of a vertex.

        Ring vertices list offsets ``-r..-1, +1..+r`` in ascending order,
        followed by the hub for r-wheels. The hub lists every ring vertex.

        Raises
        ------
        InvalidVertexError
            ``v`` is not a vertex of this topology.
        """
        v = self._check_vertex(v)
        if v == self.hub:
            return list(range(self.n))

        n, r = self.n, self.r
        out = [(v + k) % n for k in range(-r, 0)]
        out.extend((v + k) % n for k in range(1, r + 1))
        if self.hub is not None:
            out.append(self.hub)
        return out

    def activation_threshold(self, v: int, rule: Rule) -> int:
        """Returns the number of active neighbors ``v`` needs to activate."""
        return rule.threshold(self.degree(v))

    def thresholds(self, rule: Rule) -> np.ndarray:
        """Returns the activation threshold of every vertex, indexed by vertex id."""
        out = np.full(self.vertex_count, rule.threshold(2*self.r + self.has_hub), dtype=np.int32)
        if self.hub is not None:
            out[self.hub] = rule.threshold(self.n)
        return out

    def count_active_neighbors(self, states: np.ndarray) -> np.ndarray:
        """Counts active neighbors for a batch of configurations.

        ``states`` has shape ``(rows, vertex_count)``. The count is linear in
        ``states``, so the dynamics kernel also applies it to the set of
        newly activated vertices to update counters incrementally.
        """
        states = np.asarray(states)
        n = self.n
        counts = np.empty(states.shape, dtype=np.int32)
        counts[:, :n] = window_counts(states[:, :n], self.r, circular=True)
        if self.hub is not None:
            counts[:, :n] += states[:, n:n + 1].astype(np.int32)
            counts[:, n] = states[:, :n].sum(axis=1, dtype=np.int32)
        return counts


def build_topology(spec: TopologySpec) -> Topology:
    """Builds the graph instance described by ``spec``.

    Rings have ``n`` vertices of degree ``2r``; r-wheels have ``n+1``
    vertices, ring vertices of degree ``2r+1`` and a hub of degree ``n``.
    """
    if not isinstance(spec, TopologySpec):
        raise TypeError(f'spec must be a TopologySpec, not {type(spec)}')
    return Topology(spec)

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

from bootperc import Family, Rule, TopologySpec, build_topology
from hypothesis import given, strategies as st

import bootperc
import numpy as np
import pytest


def _topology(family: str, n: int, r: int) -> bootperc.Topology:
    return build_topology(TopologySpec({'family': family, 'n': n, 'r': r}))

def test_build_topology():
    ring = _topology('ring', 10, 2)
    assert ring.vertex_count == 10
    assert ring.hub is None and not ring.has_hub
    assert all(ring.degree(v) == 4 for v in range(10))

    wheel = _topology('rwheel', 10, 2)
    assert wheel.vertex_count == 11
    assert wheel.family is Family.RWHEEL
    assert wheel.hub == 10
    assert all(wheel.degree(v) == 5 for v in range(10))
    assert wheel.degree(wheel.hub) == 10

    with pytest.raises(TypeError, match='TopologySpec'):
        build_topology({'family': 'ring', 'n': 10, 'r': 2})  # type: ignore

def test_topology_spec_validation():
    with pytest.raises(bootperc.ValidationError, match=r'n must exceed 2r\+1 \(got n=5, r=2\)'):
        TopologySpec({'family': 'ring', 'n': 5, 'r': 2})

    with pytest.raises(bootperc.ValidationError, match='Value must be at least 1'):
        TopologySpec({'family': 'ring', 'n': 10, 'r': 0})

    with pytest.raises(bootperc.ValidationError, match="Value must be one from: 'ring', 'rwheel'"):
        TopologySpec({'family': 'torus', 'n': 10, 'r': 2})

    spec = TopologySpec({'family': 'RING', 'n': 6, 'r': 2})
    assert spec.family is Family.RING

    with pytest.raises(bootperc.FrozenError):
        spec.n = 7

def test_neighbors():
    assert _topology('ring', 10, 1).neighbors(0) == [9, 1]
    assert _topology('ring', 10, 2).neighbors(0) == [8, 9, 1, 2]
    assert _topology('ring', 10, 2).neighbors(5) == [3, 4, 6, 7]

    wheel = _topology('rwheel', 10, 1)
    assert wheel.neighbors(0) == [9, 1, wheel.hub]
    assert wheel.neighbors(wheel.hub) == list(range(10))

def test_invalid_vertex():
    ring = _topology('ring', 10, 1)

    for vertex in (-1, 10, 1.0, True, '0'):
        with pytest.raises(bootperc.InvalidVertexError):
            ring.neighbors(vertex)  # type: ignore

    with pytest.raises(IndexError, match='0..9'):
        ring.degree(10)

    assert ring.neighbors(np.int64(3)) == [2, 4]

def test_activation_threshold():
    ring = _topology('ring', 10, 2)
    assert ring.activation_threshold(0, Rule.STRICT) == 3
    assert ring.activation_threshold(0, Rule.SIMPLE) == 2

    wheel = _topology('rwheel', 10, 2)
    assert wheel.activation_threshold(0, Rule.STRICT) == 3
    assert wheel.activation_threshold(0, Rule.SIMPLE) == 3
    assert wheel.activation_threshold(wheel.hub, Rule.STRICT) == 6
    assert wheel.activation_threshold(wheel.hub, Rule.SIMPLE) == 5

    thresholds = wheel.thresholds(Rule.STRICT)
    assert thresholds.tolist() == [3] * 10 + [6]

def test_topology_equality():
    assert _topology('ring', 10, 2) == _topology('ring', 10, 2)
    assert _topology('ring', 10, 2) != _topology('rwheel', 10, 2)
    assert len({_topology('ring', 10, 2), _topology('ring', 10, 2)}) == 1

@given(
    family=st.sampled_from(['ring', 'rwheel']),
    r=st.integers(1, 6),
    extra=st.integers(0, 20),
)
def test_neighborhood_symmetry_and_degree(family: str, r: int, extra: int):
    topology = _topology(family, 2*r + 2 + extra, r)
    neighborhoods = [set(topology.neighbors(v)) for v in range(topology.vertex_count)]

    for v, around in enumerate(neighborhoods):
        assert v not in around
        assert len(around) == len(topology.neighbors(v)) == topology.degree(v)
        for u in around:
            assert v in neighborhoods[u]

@given(
    family=st.sampled_from(['ring', 'rwheel']),
    r=st.integers(1, 5),
    extra=st.integers(0, 12),
    seed=st.integers(0, 2**32 - 1),
)
def test_count_active_neighbors_matches_adjacency(family: str, r: int, extra: int, seed: int):
    topology = _topology(family, 2*r + 2 + extra, r)
    states = np.random.default_rng(seed).random((3, topology.vertex_count)) < 0.5
    counts = topology.count_active_neighbors(states)

    for row in range(3):
        expected = [sum(states[row, u] for u in topology.neighbors(v)) for v in range(topology.vertex_count)]
        assert counts[row].tolist() == expected

def test_window_counts_open_ends():
    states = np.array([[1, 1, 0, 1, 0]])
    assert bootperc.window_counts(states, 1, circular=False).tolist() == [[1, 1, 2, 0, 1]]
    assert bootperc.window_counts(states, 1, circular=True).tolist() == [[1, 1, 2, 0, 2]]

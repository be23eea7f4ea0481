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

from bootperc import fields, validate

import bootperc
import pytest

def test_schema_init():
    class _TestSchema(bootperc.Schema):
        field = fields.String()

    test = _TestSchema({'field': 'test'})
    assert test.field == 'test'

    test.field = 'test 2'
    assert test.field == 'test 2'

    with pytest.raises(bootperc.ValidationError, match='string'):
        test.field = 2  # type: ignore

    assert test.field == 'test 2'

    with pytest.raises(bootperc.ValidationError, match='unknown field'):
        _TestSchema({'field': 'test', 'invalid_field': 'test'})

    with pytest.raises(TypeError, match='data must be a mapping'):
        _TestSchema(None)  # type: ignore

def test_schema_required_and_defaults():
    class _TestSchema(bootperc.Schema):
        required = fields.Integer()
        optional = fields.Integer(default=3)
        computed = fields.Integer(default=lambda schema: schema.optional * 2)
        nullable = fields.Integer(none=True, default=None)

    test = _TestSchema({'required': 1})
    assert test.optional == 3
    assert test.computed == 6
    assert test.nullable is None

    with pytest.raises(bootperc.ValidationError, match='This field is required'):
        _TestSchema({})

    with pytest.raises(bootperc.ValidationError, match='must not be None'):
        _TestSchema({'required': None})

def test_schema_dump():
    class _TestSchema(bootperc.Schema):
        field = fields.String()
        field_2 = fields.String()
        field_3 = fields.String()
        field_4 = fields.String()

    data = {
        'field_4': 'test 4',
        'field': 'test',
        'field_3': 'test 3',
        'field_2': 'test 2',
    }
    partial_data = {'field_2': 'test 2', 'field_3': 'test 3'}
    test = _TestSchema(data)

    assert list(test.dump()) == ['field', 'field_2', 'field_3', 'field_4']
    assert test.dump() == data
    assert test.dump(include=['field_2', 'field_3']) == partial_data
    assert test.dump(exclude=['field_4', 'field']) == partial_data

    with pytest.raises(TypeError):
        test.dump(include=[], exclude=[])

def test_get_value_for():
    class _TestSchema(bootperc.Schema):
        field = fields.String()
        optional = fields.String(required=False)

    test = _TestSchema({'field': 'test'})
    assert test.get_value_for('field') == 'test'
    assert test.get_value_for('optional', 'default') == 'default'

    with pytest.raises(bootperc.FieldNotSet):
        test.get_value_for('optional')

    with pytest.raises(RuntimeError):
        test.get_value_for('invalid field')

def test_inheritance():
    class _Parent(bootperc.Schema):
        parent_f = fields.Integer()
        parent_f2 = fields.Integer()

    class _Child(_Parent):
        child_f = fields.Integer()

    data = {'parent_f': 1, 'parent_f2': 2, 'child_f': 3}

    assert _Child(data).parent_f == 1
    assert _Child(data).child_f == 3

    with pytest.raises(bootperc.ValidationError, match='unknown field'):
        _Parent(data)

def test_frozen_schema():
    class _Frozen(bootperc.Schema):
        n = fields.Integer()
        r = fields.Integer(default=1)

        class Config(bootperc.SchemaConfig):
            frozen = True

    schema = _Frozen({'n': 10})

    with pytest.raises(bootperc.FrozenError, match='_Frozen schema is read only'):
        schema.n = 11

    evolved = schema.evolve(n=12)
    assert evolved.n == 12 and evolved.r == 1
    assert schema.n == 10

    assert _Frozen({'n': 10}) == schema
    assert hash(_Frozen({'n': 10})) == hash(schema)
    assert len({schema, _Frozen({'n': 10}), evolved}) == 2

def test_unfrozen_schema_is_unhashable():
    class _TestSchema(bootperc.Schema):
        n = fields.Integer()

    with pytest.raises(TypeError, match='not frozen'):
        hash(_TestSchema({'n': 1}))

def test_fields_are_read_only():
    class _TestSchema(bootperc.Schema):
        n = fields.Integer()

    schema = _TestSchema({'n': 1})
    with pytest.raises(bootperc.FrozenError, match=r'use evolve\(\)') as exc_info:
        schema.n = 2

    assert exc_info.value.schema is schema
    assert schema.n == 1
    assert schema.evolve(n=2).n == 2

def test_cross_field_validator_reads_siblings():
    class _Interval(bootperc.Schema):
        lo = fields.Float()
        hi = fields.Float()

        @validate.field('hi')
        def check_order(self, value: float):
            if value < self.lo:
                raise ValueError('hi must not be below lo')

    assert _Interval({'hi': 2, 'lo': 1}).hi == 2.0

    with pytest.raises(bootperc.ValidationError, match='hi must not be below lo'):
        _Interval({'lo': 1, 'hi': 0})

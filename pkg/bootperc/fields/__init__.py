"""
bootperc.fields
~~~~~~~~~~~~~~~

Parameter fields used by the schemas of bootperc.
"""
from bootperc.fields.base import *
from bootperc.fields.primitive import *
from bootperc.fields.choices import *
from bootperc.fields.nesting import *
from bootperc.fields.structs import *

"""
bootperc
~~~~~~~~

Simulator and verification suite for majority bootstrap percolation
on rings and r-wheels.

Copyright (C) bootperc developers 2024, licensed under MIT license.
See LICENSE at project's root for more information.
"""

__version__ = '0.1.0'
__author__  = 'bootperc developers'

from bootperc import fields as fields
from bootperc import validate as validate
from bootperc.schema import *
from bootperc.exceptions import *
from bootperc.configs import *
from bootperc.topology import *
from bootperc.dynamics import *
from bootperc.oracles import *
from bootperc.montecarlo import *
from bootperc.verification import *
from bootperc.records import *

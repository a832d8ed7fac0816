"""Multicast switch scheduling with network coding.

Rates are exact: functions take and return fractions.Fraction (strings such as "5/4" and
"0.005" are accepted too). Library errors raise NcswitchError, a ValueError carrying a
machine-readable ``code``.
"""

from ._core import *  # noqa: F401,F403
from ._core import NcswitchError, TrafficPattern, ConflictGraph  # noqa: F401

__version__ = "0.1.0"

"""zerosum2: verification toolkit for zero-sum problems in rank-2 cyclic groups."""

__version__ = "0.1.0"

from .groups import GroupElem, Modulus, MultiSet  # noqa: E402,F401
from .propb import SearchConfig, verify_property_b, verify_triple_mode  # noqa: E402,F401
from .twomult import verify_two_mult  # noqa: E402,F401
from .lemmas import davenport_constant  # noqa: E402,F401

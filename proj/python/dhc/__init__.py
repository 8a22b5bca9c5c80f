"""Spatial traffic-rule formulas, rule automata and conflict hunting.

Thin wrapper around the _dhc extension module built from the C++ core.
"""

try:
    from ._dhc import *  # noqa: F401,F403
    from ._dhc import __doc__ as _core_doc
except ImportError:  # in-tree builds put _dhc next to the package
    from _dhc import *  # type: ignore # noqa: F401,F403
    from _dhc import __doc__ as _core_doc

__doc__ = _core_doc or __doc__
__version__ = "0.1.0"

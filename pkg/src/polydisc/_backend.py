"""Kernel selection: the compiled extension when importable, else pure Python."""
import logging

from . import _pykernels

log = logging.getLogger(__name__)

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None
    log.debug("compiled kernels unavailable; using pure-Python fallback")

_active = _compiled if _compiled is not None else _pykernels


def get():
    return _active


def name():
    return "compiled" if _active is _compiled and _compiled is not None else "python"


def available():
    return ["compiled", "python"] if _compiled is not None else ["python"]


def use(which):
    """Switch backend ("compiled" or "python"); returns the previous name."""
    global _active
    prev = name()
    if which == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        _active = _compiled
    elif which == "python":
        _active = _pykernels
    else:
        raise ValueError(f"unknown backend {which!r}")
    return prev

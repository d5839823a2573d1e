"""Hot kernels: compiled extension when available, pure Python otherwise.

Set ``CRACKLAT_PURE_PYTHON=1`` to force the fallback.  The compiled kernels
work in 64-bit integers and raise ``OverflowError`` when an intermediate value
leaves that range; the wrappers below then redo the call in Python.
"""
import os

from . import _pykernels

_ck = None
if os.environ.get("CRACKLAT_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _ckernels as _ck
    except ImportError:
        _ck = None

BACKEND = _ck.BACKEND if _ck is not None else _pykernels.BACKEND
_INT64 = 1 << 62


def _small(*rows):
    for r in rows:
        for x in r:
            if not -_INT64 < x < _INT64:
                return False
    return True


def adjacent_pairs(pos, neg, masks):
    if _ck is not None and len(masks) > 8:
        return _ck.adjacent_pairs(pos, neg, masks)
    return _pykernels.adjacent_pairs(pos, neg, masks)


def matmul_int(A, B):
    if _ck is not None and A and B and _small(*A, *B):
        try:
            return _ck.matmul_int(A, B)
        except OverflowError:
            pass
    return _pykernels.matmul_int(A, B)


def box_points(lo, hi, A, c):
    if _ck is not None and _small(lo, hi, c, *A):
        try:
            return _ck.box_points(lo, hi, A, c)
        except OverflowError:
            pass
    return _pykernels.box_points(lo, hi, A, c)


def use_backend(name):
    """Switch backend at runtime (``"python"`` or ``"cython"``); returns the previous one."""
    global _ck, BACKEND
    prev = BACKEND
    if name == "python":
        _ck = None
    elif name == "cython":
        from . import _ckernels as mod
        _ck = mod
    else:
        raise ValueError(f"unknown backend {name!r}")
    BACKEND = name
    return prev


def compiled_available():
    try:
        from . import _ckernels  # noqa: F401
    except ImportError:
        return False
    return True

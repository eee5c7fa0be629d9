"""Backend selection for the integer elimination kernel.

The compiled kernel is used when it imported successfully, the input fits
comfortably in int64, and ``SGTC_PURE_PYTHON`` is unset.  On overflow the
compiled kernel returns None and the computation is redone in pure Python,
so results are identical either way.
"""

import os

from sgtc.exact import _rowred_py

try:
    from sgtc.exact import _rowred as _compiled
except ImportError:  # pragma: no cover - depends on build environment
    _compiled = None

_FORCE_PURE = os.environ.get("SGTC_PURE_PYTHON", "").strip() not in ("", "0")

# leave headroom below 2^63 for the first multiply-subtract round
_I64_SAFE = 1 << 40


def backend_name():
    if _compiled is None or _FORCE_PURE:
        return "pure"
    return "compiled"


def _fits_i64(rows):
    for row in rows:
        for x in row:
            if x > _I64_SAFE or x < -_I64_SAFE:
                return False
    return True


def _as_array(rows, ncols):
    import numpy

    return numpy.array(rows, dtype=numpy.int64).reshape(len(rows), ncols)


def row_reduce(rows, ncols):
    """RREF data ``(pivots, primitive_rows)`` of an integer matrix.

    ``rows`` (list of int lists) is not modified.
    """
    if backend_name() == "compiled" and rows and _fits_i64(rows):
        arr = _as_array(rows, ncols)
        pivots = _compiled.row_reduce_i64(arr)
        if pivots is not None:
            return pivots, arr[: len(pivots)].tolist()
    return _rowred_py.row_reduce([list(r) for r in rows], ncols)


def echelon_pivots(rows, ncols):
    """Pivot columns of the row echelon form. ``rows`` is not modified."""
    if backend_name() == "compiled" and rows and _fits_i64(rows):
        arr = _as_array(rows, ncols)
        pivots = _compiled.echelon_pivots_i64(arr)
        if pivots is not None:
            return pivots
    return _rowred_py.echelon_pivots([list(r) for r in rows], ncols)

"""Reference integer row-reduction routines (pure Python, unbounded ints).

Both backends implement the same fraction-free scheme: rows stay integer,
every updated row is divided by the gcd of its entries, and pivot rows get a
positive pivot.  Pivoting is deterministic: first nonzero entry in column
order.  The compiled backend in ``_rowred.pyx`` mirrors this exactly in
int64 arithmetic and bails out on overflow, in which case callers rerun the
computation here.
"""

from math import gcd


def _normalize(row, ncols):
    g = 0
    for k in range(ncols):
        x = row[k]
        if x:
            g = gcd(g, x if x > 0 else -x)
            if g == 1:
                return
    if g > 1:
        for k in range(ncols):
            row[k] //= g


def row_reduce(rows, ncols):
    """Fraction-free Gauss-Jordan over the rationals.

    ``rows`` is a list of integer lists and is consumed.  Returns
    ``(pivots, out)`` where ``out[i]`` is a primitive integer row with a
    positive entry at column ``pivots[i]`` and zeros at the other pivot
    columns; the rational RREF row is ``out[i]`` divided by its pivot entry.
    """
    m = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        sel = -1
        for i in range(r, m):
            if rows[i][c]:
                sel = i
                break
        if sel < 0:
            continue
        if sel != r:
            rows[r], rows[sel] = rows[sel], rows[r]
        prow = rows[r]
        _normalize(prow, ncols)
        if prow[c] < 0:
            for k in range(ncols):
                prow[k] = -prow[k]
        p = prow[c]
        for j in range(m):
            if j == r:
                continue
            b = rows[j][c]
            if not b:
                continue
            g = gcd(p, b if b > 0 else -b)
            f1 = p // g
            f2 = b // g
            rj = rows[j]
            for k in range(ncols):
                rj[k] = rj[k] * f1 - prow[k] * f2
            _normalize(rj, ncols)
        pivots.append(c)
        r += 1
        if r == m:
            break
    return pivots, [rows[i] for i in range(len(pivots))]


def echelon_pivots(rows, ncols):
    """Pivot columns of the row echelon form (forward elimination only)."""
    m = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        sel = -1
        for i in range(r, m):
            if rows[i][c]:
                sel = i
                break
        if sel < 0:
            continue
        if sel != r:
            rows[r], rows[sel] = rows[sel], rows[r]
        prow = rows[r]
        _normalize(prow, ncols)
        if prow[c] < 0:
            for k in range(ncols):
                prow[k] = -prow[k]
        p = prow[c]
        for j in range(r + 1, m):
            b = rows[j][c]
            if not b:
                continue
            g = gcd(p, b if b > 0 else -b)
            f1 = p // g
            f2 = b // g
            rj = rows[j]
            for k in range(c, ncols):
                rj[k] = rj[k] * f1 - prow[k] * f2
            _normalize(rj, ncols)
        pivots.append(c)
        r += 1
        if r == m:
            break
    return pivots

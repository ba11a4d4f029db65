"""Pure-Python exact simplex kernel.

The tableau is a list of integer rows (last entry = right-hand side).
Rows represent equations over nonnegative variables and are scale-free,
so every row is kept content-normalized (divided by the gcd of its
entries) instead of carrying denominators.  The objective is maintained
as a separate integer row plus a positive integer scale; the reduced
cost of column ``j`` is ``-obj[j] / scale``.

Invariants maintained across pivots:

* ``tab[r][basis[r]] > 0`` and that column is zero in every other row;
* ``tab[r][-1] >= 0`` (basic values stay nonnegative);
* ``obj[basis[r]] == 0`` for every row ``r``.

Bland's rule (least eligible column enters; ratio ties broken by least
basic-variable index) guarantees termination without any perturbation.
"""

from math import gcd

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"


def _normalize_row(row):
    g = 0
    for v in row:
        if v:
            g = gcd(g, v if v > 0 else -v)
            if g == 1:
                return
    if g > 1:
        for j in range(len(row)):
            row[j] //= g


def _normalize_obj(obj, scale):
    g = scale
    for v in obj:
        if v:
            g = gcd(g, v if v > 0 else -v)
            if g == 1:
                return scale
    if g > 1:
        for j in range(len(obj)):
            obj[j] //= g
        scale //= g
    return scale


def _eliminate(obj, scale, prow, q):
    """Zero out column q of the objective using pivot row ``prow``."""
    m = obj[q]
    if not m:
        return scale
    p = prow[q]
    for j in range(len(obj)):
        obj[j] = obj[j] * p - m * prow[j]
    return _normalize_obj(obj, scale * p)


def simplex_min(tab, basis, cost, barred=()):
    """Minimize ``cost . vars`` from a basic feasible integer tableau.

    Mutates ``tab`` and ``basis`` in place and returns
    ``(status, tab, basis, obj, scale)`` with status ``"optimal"`` or
    ``"unbounded"``.  The objective value is ``obj[-1] / scale``.
    """
    nrows = len(tab)
    ncols = len(tab[0])
    blocked = set(barred)

    obj = [-c for c in cost]
    obj.append(0)
    scale = 1
    for r in range(nrows):
        scale = _eliminate(obj, scale, tab[r], basis[r])

    while True:
        q = -1
        for j in range(ncols - 1):
            if obj[j] > 0 and j not in blocked:
                q = j
                break
        if q < 0:
            return OPTIMAL, tab, basis, obj, scale

        best = -1
        for r in range(nrows):
            a = tab[r][q]
            if a > 0:
                if best < 0:
                    best = r
                else:
                    lhs = tab[r][-1] * tab[best][q]
                    rhs = tab[best][-1] * a
                    if lhs < rhs or (lhs == rhs and basis[r] < basis[best]):
                        best = r
        if best < 0:
            return UNBOUNDED, tab, basis, obj, scale

        prow = tab[best]
        p = prow[q]
        for i in range(nrows):
            if i == best:
                continue
            row = tab[i]
            m = row[q]
            if m:
                for j in range(ncols):
                    row[j] = row[j] * p - m * prow[j]
                _normalize_row(row)
        scale = _eliminate(obj, scale, prow, q)
        _normalize_row(prow)
        basis[best] = q


def force_pivot(tab, basis, r, q):
    """Pivot row ``r`` to basic column ``q`` without a ratio test.

    Only valid when ``tab[r][-1] == 0`` (degenerate row), which is the
    case when pivoting a zero-valued artificial out of the basis.
    """
    if tab[r][-1] != 0:
        raise ValueError("force_pivot requires a zero right-hand side")
    if tab[r][q] == 0:
        raise ValueError("zero pivot element")
    if tab[r][q] < 0:
        tab[r] = [-v for v in tab[r]]
    prow = tab[r]
    p = prow[q]
    for i in range(len(tab)):
        if i == r:
            continue
        row = tab[i]
        m = row[q]
        if m:
            for j in range(len(row)):
                row[j] = row[j] * p - m * prow[j]
            _normalize_row(row)
    _normalize_row(prow)
    basis[r] = q

"""Kernel selection: compiled speedups when available, pure Python otherwise.

Both backends implement the same deterministic pivot order, so results are
bit-identical; the compiled one additionally raises OverflowError on
instances whose tableau entries outgrow int64, in which case callers rerun
on the pure kernel.
"""

from . import pure

try:
    from . import _speedups as fast

    HAVE_SPEEDUPS = True
except ImportError:  # pragma: no cover - depends on build environment
    fast = None
    HAVE_SPEEDUPS = False

OPTIMAL = pure.OPTIMAL
UNBOUNDED = pure.UNBOUNDED

force_pivot = pure.force_pivot


def backend_name() -> str:
    return "compiled" if HAVE_SPEEDUPS else "pure"


def simplex_min(tab, basis, cost, barred=()):
    """Run the fastest available kernel; fall back on int64 overflow.

    Returns ``(status, tab, basis, obj, scale)``.  The input ``tab`` and
    ``basis`` must not be reused by the caller afterwards (the pure
    backend mutates them in place).
    """
    if HAVE_SPEEDUPS:
        try:
            return fast.simplex_min(tab, basis, cost, barred)
        except OverflowError:
            pass
    return pure.simplex_min(tab, basis, cost, barred)

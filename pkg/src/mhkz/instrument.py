"""Optional counting of coefficient touches for cost assertions in tests.

Only the scalar paths (dot, axpy_into, evaluate, integrate) report touches;
the batch kernels bypass the counter.  Not thread-safe; intended for
single-threaded test code.
"""

from contextlib import contextmanager


class TouchCounter:
    __slots__ = ("coef_touches",)

    def __init__(self):
        self.coef_touches = 0


_active: TouchCounter | None = None


def record(n: int) -> None:
    if _active is not None:
        _active.coef_touches += n


@contextmanager
def count_touches():
    """Enable touch counting inside the block and yield the counter."""
    global _active
    previous = _active
    counter = TouchCounter()
    _active = counter
    try:
        yield counter
    finally:
        _active = previous

"""Logical-time algebras.

The engine is generic over the timestamp type: anything with a partial order,
a least element, and path-summary arithmetic will do. Times themselves stay
plain values (ints, or tuples of ints) so hashing and comparison are cheap;
an algebra object carries the order and the arithmetic.

Two algebras ship:

  * ``INT_TIMES``: unsigned 64-bit integers under the usual total order.
  * ``PAIR_TIMES``: pairs of unsigned integers under the product order, a
    genuinely partial order, so frontiers can hold several incomparable
    minima.

A path summary describes how timestamps advance along a dataflow path. For
both algebras a summary is an additive increment (an int, or a tuple of
ints), applied with saturation at the algebra's ``top`` so feedback paths
cannot wrap around.
"""

U64_MAX = 2**64 - 1


class IntegerTimes:
    """Unsigned 64-bit integer timestamps, totally ordered."""

    total = True
    zero = 0
    top = U64_MAX
    identity = 0

    @staticmethod
    def leq(a, b):
        return a <= b

    @staticmethod
    def apply(summary, time):
        out = time + summary
        return out if out < U64_MAX else U64_MAX

    @staticmethod
    def compose(first, then):
        out = first + then
        return out if out < U64_MAX else U64_MAX

    @staticmethod
    def summary_leq(a, b):
        return a <= b

    @staticmethod
    def advances(summary):
        """True when applying the summary strictly increases every time."""
        return summary > 0

    @staticmethod
    def check_time(t):
        if not isinstance(t, int) or isinstance(t, bool) or not 0 <= t <= U64_MAX:
            raise ValueError(f"not an unsigned 64-bit time: {t!r}")

    @staticmethod
    def check_summary(s):
        if not isinstance(s, int) or isinstance(s, bool) or not 0 <= s <= U64_MAX:
            raise ValueError(f"not a valid integer summary: {s!r}")


class ProductTimes:
    """Tuples of unsigned integers, ordered componentwise.

    ``(a0, a1) leq (b0, b1)`` iff both components compare. Distinct pairs like
    (0, 1) and (1, 0) are incomparable, which is exactly what multi-minima
    frontier handling needs exercised.
    """

    total = False

    def __init__(self, dims=2):
        if dims < 1:
            raise ValueError("need at least one component")
        self.dims = dims
        self.zero = (0,) * dims
        self.top = (U64_MAX,) * dims
        self.identity = (0,) * dims

    @staticmethod
    def leq(a, b):
        for x, y in zip(a, b):
            if x > y:
                return False
        return True

    @staticmethod
    def apply(summary, time):
        return tuple(
            (t + s) if t + s < U64_MAX else U64_MAX for t, s in zip(time, summary)
        )

    @staticmethod
    def compose(first, then):
        return tuple(
            (a + b) if a + b < U64_MAX else U64_MAX for a, b in zip(first, then)
        )

    @staticmethod
    def summary_leq(a, b):
        for x, y in zip(a, b):
            if x > y:
                return False
        return True

    @staticmethod
    def advances(summary):
        """Any nonzero increment strictly advances under the product order."""
        return any(s > 0 for s in summary)

    def check_time(self, t):
        if (
            not isinstance(t, tuple)
            or len(t) != self.dims
            or any(not isinstance(x, int) or not 0 <= x <= U64_MAX for x in t)
        ):
            raise ValueError(f"not a {self.dims}-component time: {t!r}")

    def check_summary(self, s):
        self.check_time(s)


INT_TIMES = IntegerTimes()
PAIR_TIMES = ProductTimes(2)

from typing import Iterable, List, Optional

from attrs import frozen, field

from kuiper_isometry.kuiper_exception import ValidationError
from kuiper_isometry.resources.scalars import ExtReal, NEG_INF, POS_INF, format_ext_real, is_finite, to_ext_real


@frozen
class Interval:
    """A non-empty, possibly degenerate interval of the real line.

    Infinite endpoints are always open. A degenerate interval {x} has lo == hi and both endpoints closed.
    """

    lo: ExtReal = field(converter=to_ext_real)
    hi: ExtReal = field(converter=to_ext_real)
    lo_closed: bool = True
    hi_closed: bool = True

    def __attrs_post_init__(self):
        if self.lo > self.hi:
            raise ValidationError(f"empty interval: lo={self.lo} > hi={self.hi}")
        if not is_finite(self.lo) and (self.lo > 0 or self.lo_closed):
            raise ValidationError(f"invalid lower endpoint {format_ext_real(self.lo)}")
        if not is_finite(self.hi) and (self.hi < 0 or self.hi_closed):
            raise ValidationError(f"invalid upper endpoint {format_ext_real(self.hi)}")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ValidationError(f"empty interval at {self.lo}")

    @classmethod
    def closed(cls, lo, hi) -> "Interval":
        lo, hi = to_ext_real(lo), to_ext_real(hi)
        return cls(lo, hi, is_finite(lo), is_finite(hi))

    @classmethod
    def open(cls, lo, hi) -> "Interval":
        return cls(lo, hi, False, False)

    @classmethod
    def singleton(cls, x) -> "Interval":
        return cls(x, x, True, True)

    @classmethod
    def real_line(cls) -> "Interval":
        return cls(NEG_INF, POS_INF, False, False)

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def is_bounded(self) -> bool:
        return is_finite(self.lo) and is_finite(self.hi)

    @property
    def is_closed(self) -> bool:
        """Closed as a subset of R (infinite ends count as closed)."""
        return (self.lo_closed or not is_finite(self.lo)) and (self.hi_closed or not is_finite(self.hi))

    def contains(self, t) -> bool:
        if t < self.lo or t > self.hi:
            return False
        if t == self.lo and not self.lo_closed:
            return False
        if t == self.hi and not self.hi_closed:
            return False
        return True

    def contains_interval(self, other: "Interval") -> bool:
        if other.lo < self.lo or (other.lo == self.lo and other.lo_closed and not self.lo_closed):
            return False
        if other.hi > self.hi or (other.hi == self.hi and other.hi_closed and not self.hi_closed):
            return False
        return True

    def intersect(self, other: "Interval") -> Optional["Interval"]:
        """The intersection, or None when it is empty."""
        if self.lo > other.lo:
            lo, lo_closed = self.lo, self.lo_closed
        elif self.lo < other.lo:
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hi_closed = self.hi, self.hi_closed
        elif self.hi > other.hi:
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed
        if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
            return None
        return Interval(lo, hi, lo_closed, hi_closed)

    def touches(self, other: "Interval") -> bool:
        """Whether the union with ``other`` is again an interval."""
        first, second = (self, other) if (self.lo, not self.lo_closed) <= (other.lo, not other.lo_closed) else (other, self)
        if second.lo < first.hi:
            return True
        if second.lo == first.hi:
            return first.hi_closed or second.lo_closed
        return False

    def hull(self, other: "Interval") -> "Interval":
        if self.lo < other.lo:
            lo, lo_closed = self.lo, self.lo_closed
        elif self.lo > other.lo:
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed or other.lo_closed
        if self.hi > other.hi:
            hi, hi_closed = self.hi, self.hi_closed
        elif self.hi < other.hi:
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed or other.hi_closed
        return Interval(lo, hi, lo_closed, hi_closed)

    def complement(self) -> List["Interval"]:
        """R minus this interval, as at most two intervals."""
        parts = []
        if is_finite(self.lo):
            parts.append(Interval(NEG_INF, self.lo, False, not self.lo_closed))
        if is_finite(self.hi):
            parts.append(Interval(self.hi, POS_INF, not self.hi_closed, False))
        return parts

    def __str__(self):
        if self.is_degenerate:
            return "{" + format_ext_real(self.lo) + "}"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{format_ext_real(self.lo)},{format_ext_real(self.hi)}{right}"


def complement_intervals(interval: Interval) -> List[Interval]:
    return interval.complement()


def merge_intervals(intervals: Iterable[Interval]) -> List[Interval]:
    """Union of intervals as a sorted list of pairwise disjoint, non-touching intervals."""
    ordered = sorted(intervals, key=lambda i: (i.lo, not i.lo_closed))
    merged: List[Interval] = []
    for interval in ordered:
        if merged and merged[-1].touches(interval):
            merged[-1] = merged[-1].hull(interval)
        else:
            merged.append(interval)
    return merged

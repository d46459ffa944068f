from typing import List

from attrs import frozen, field

from kuiper_isometry.resources.interval import Interval


@frozen
class UnitDistanceRegions:
    """Where a measure at Kuiper distance 1 from mu may put its mass.

    Attributes
    ----------
    outer : list of Interval
        The complement of conv(C_mu), at most two unbounded intervals.
    gaps : list of Interval
        Bounded components of the complement of C_mu, each of mu-mass zero.
    dirac_excluded_points : list
        Atom locations of mu.
    """

    outer: List[Interval] = field(factory=list)
    gaps: List[Interval] = field(factory=list)
    dirac_excluded_points: List = field(factory=list)

    @property
    def regions(self) -> List[Interval]:
        return list(self.outer) + list(self.gaps)

    def __str__(self):
        outer = " u ".join(str(i) for i in self.outer) or "{}"
        gaps = ", ".join(str(i) for i in self.gaps) or "none"
        return f"outer={outer} gaps={gaps}"

from attrs import frozen, field

from kuiper_isometry.resources.interval import Interval
from kuiper_isometry.resources.scalars import Number, format_number, is_exact


@frozen
class Witness:
    """An interval I attaining the Kuiper maximum, with the signed value mu(I) - nu(I)."""

    interval: Interval
    signed_value: Number
    exact: bool = field()

    @exact.default
    def _exact_default(self):
        return is_exact(self.signed_value)

    def __str__(self):
        return f"{self.interval} signed={format_number(self.signed_value)}"

    def __repr__(self):
        return f"Witness({self.interval}, {format_number(self.signed_value)}, exact={self.exact})"

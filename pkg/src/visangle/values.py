"""Metric values: floats that remember which metric produced them."""

from __future__ import annotations

import math

from .errors import InternalConsistencyError, InvalidParameter

METRIC_IDS = ("v", "vbar", "s", "r", "j", "k", "rho", "rho_star", "v_star", "vbar_star")

_UPPER = {
    "v": math.pi,
    "vbar": math.pi,
    "s": 1.0,
    "r": 1.0,
    "v_star": 1.0,
    "vbar_star": 1.0,
    "rho_star": 0.5 * math.pi,
}
_SLACK = 1e-12


class MetricValue(float):
    """A nonnegative float tagged with its metric id and evaluation method.

    Arithmetic on a MetricValue yields a plain float.
    """

    metric: str
    method: str
    pseudometric_warning: bool

    def __new__(cls, value, metric: str, method: str = "closed_form",
                pseudometric_warning: bool = False):
        if metric not in METRIC_IDS:
            raise InvalidParameter(f"unknown metric id {metric!r}")
        value = float(value)
        if math.isnan(value) or value < -_SLACK:
            raise InternalConsistencyError(f"{metric} evaluated to {value}")
        upper = _UPPER.get(metric)
        if upper is not None and value > upper + _SLACK:
            raise InternalConsistencyError(f"{metric} = {value} exceeds {upper}")
        value = max(value, 0.0)
        if upper is not None:
            value = min(value, upper)
        self = super().__new__(cls, value)
        self.metric = metric
        self.method = method
        self.pseudometric_warning = pseudometric_warning
        return self

    def __repr__(self) -> str:
        return f"MetricValue({float(self)!r}, {self.metric!r})"

    def __reduce__(self):
        return (MetricValue, (float(self), self.metric, self.method, self.pseudometric_warning))

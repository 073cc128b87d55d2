"""Visual angle metric, companion hyperbolic-type metrics and Möbius maps."""

from .closed_form import (
    j_metric,
    k_punctured,
    lemma_function,
    rho_ball,
    rho_half,
    rho_star,
    v_ball,
    v_half,
    v_punctured,
)
from .domains import Circle, Generic2D, HalfSpace, Polygon, Polyline, PuncturedSpace, UnitBall
from .geometry import INF, angle_at, envelope_inclusion_check, in_envelope_E, in_envelope_F
from .moebius import (
    MoebiusMap,
    absolute_ratio,
    angular_characteristic,
    canonical_T_a,
    cayley_half_to_ball,
    chordal,
    tangent_circle_ball,
    tangent_circle_half,
)
from .metrics import evaluate
from .sup import BoundarySampler, r_ptolemaic, s_triangular, starred, v_double, v_sup
from .values import METRIC_IDS, MetricValue

__version__ = "0.1.0"

"""Exact symbolic dynamics on a universal dendrite, with checks of its omega-limit sets.

Submodules: ``dyadics`` (enumeration of dyadic rationals), ``itinerary``
(addresses and the map), ``geometry`` (metric, nets, drawing),
``hyperspace`` (Hausdorff and Vietoris), ``dynamics`` (orbits, omega-limit
sets, transitivity), ``interval`` (tent-map reference system), ``cli``.
"""

from .dyadics import Dyadic, index_to_dyadic
from .geometry import CompactApprox, intrinsic_distance
from .itinerary import ORIGIN, Finite, Lazy, apply_f, parse_itinerary, special_point

__all__ = [
    "ORIGIN",
    "CompactApprox",
    "Dyadic",
    "Finite",
    "Lazy",
    "apply_f",
    "index_to_dyadic",
    "intrinsic_distance",
    "parse_itinerary",
    "special_point",
]

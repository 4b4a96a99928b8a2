"""
Hyperbolic plane kernel
"""

from hyperlab.hyperlab.geometry.geometry import (
    ORIGIN,
    HPoint,
    Isometry,
    TangentVec,
    acosh_stable,
    circle_measures,
    distance,
    exp_map,
    geodesic_point,
    log_map,
    lorentz_boost,
    minkowski,
    mp_distance,
    origin,
    polygon_circumference,
    precision_for,
    random_point,
    rotation,
    tangent_frame,
    third_side,
    turning_point,
)

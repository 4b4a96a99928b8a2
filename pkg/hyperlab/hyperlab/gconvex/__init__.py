"""
Geodesically convex objectives
"""

from hyperlab.hyperlab.gconvex.gconvex import (
    DistSqObjective,
    convexity_gap,
    d_coth_d,
    directional_fd,
    grad_inner,
    hessian_fd,
)

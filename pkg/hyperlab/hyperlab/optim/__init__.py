"""
Optimizers and their scaling experiments
"""

from hyperlab.hyperlab.optim.euclid_agd import euclid_agd
from hyperlab.hyperlab.optim.hyperbolic import compass_walk, default_step, momentum_rgd, rgd
from hyperlab.hyperlab.optim.trace import BUDGET, CONVERGED, Trace

import numpy as np

from qrtmap.core import k_min
from qrtmap.cubic import CubicCurve


def random_curves(n, seed, lo=0.1, hi=100.0, dlo=0.05, dhi=30.0):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        d = float(rng.uniform(dlo, dhi))
        out.append(CubicCurve(d, k_min(d) + float(rng.uniform(lo, hi))))
    return out

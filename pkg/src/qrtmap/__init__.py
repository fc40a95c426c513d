"""Integrable QRT map ``F(x, y) = ((y + d)/(xy), (dxy + y + d)/(y(y + d)))``.

Submodules:

* :mod:`qrtmap.core` - the map, its inverse, the invariant G and orbits;
* :mod:`qrtmap.cubic` - the invariant cubics ``C_K`` as projective curves;
* :mod:`qrtmap.transform` - the change of variables to Weierstrass form;
* :mod:`qrtmap.grouplaw` - chord-tangent group law and period tests;
* :mod:`qrtmap.rotation` - rotation numbers and elliptic functions;
* :mod:`qrtmap.periods` - which integers are minimal periods;
* :mod:`qrtmap.exact` - exact biquadratic-field check of a group identity;
* :mod:`qrtmap.sensitivity` - separation of nearby orbits;
* :mod:`qrtmap.cli` - command-line entry point.
"""
from .core import PlanePoint, apply_F, apply_F_inv, fixed_point, invariant_G, jacobian_F, k_min, normalize, orbit
from .cubic import Branch, CubicCurve, ProjPoint
from .errors import DomainError, InternalError, OutOfRangeError, PrecisionError, QRTError
from .rotation import theta, theta_m, winding_estimate

__version__ = "0.1.0"

"""The angle function whose differential is the propagator 1-form on pairs of points."""
import cmath
import math

from src.errors import CoincidentPoints

TWO_PI = 2.0 * math.pi


def propagator_angle(z1: complex, z2: complex) -> float:
    """phi(z1, z2) = arg((z1 - z2) / (conj(z1) - z2)) / 2pi with arg in [0, 2pi).

    Both points lie in the closed upper half-plane.
    """
    z1, z2 = complex(z1), complex(z2)
    if z1 == z2:
        raise CoincidentPoints(f"propagator evaluated at coincident points {z1}")
    if z1.imag < 0 or z2.imag < 0:
        raise ValueError(f"points must lie in the closed upper half-plane: {z1}, {z2}")
    angle = cmath.phase((z1 - z2) / (z1.conjugate() - z2)) % TWO_PI
    value = angle / TWO_PI
    return 0.0 if value >= 1.0 else value


def collapse_limit_angle(theta: float) -> float:
    """Limit of phi(z, z + r e^{i theta}) as r -> 0 with z in the open half-plane."""
    return ((theta - math.pi / 2) / TWO_PI) % 1.0


def circular_distance(a: float, b: float) -> float:
    """Distance between two normalised angles on R / Z."""
    d = (a - b) % 1.0
    return min(d, 1.0 - d)

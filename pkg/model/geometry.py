"""
Numeric kernel of the Poissonized random hyperbolic graph model:

1. Model and region descriptors
   - ModelParams: (alpha, nu, n, seed) and the derived disk radius R = 2 ln(n/nu)
   - PolarPoint: a position (r, theta) in B_O(R)
   - SectorAnnulus: r_lo <= r < r_hi within half_angle of theta_center

2. Distances and connection angles
   - hyp_distance, is_adjacent (and their array forms distance, adjacent)
   - theta_exact, theta_approx, connection_angle

3. Measures under the radial density f(r) = alpha sinh(alpha r) / (cosh(alpha R) - 1)
   - mu_ball, mu_annulus_sector and their leading-order asymptotics
   - expected_degree

Everything here is a pure function of its arguments. Array arguments
broadcast, so builders and audits evaluate millions of pairs per call.

Called by:
- model/sampler.py: radial law and region membership
- builders/: adjacency tests and pruning angles
- audits/: region construction and exact adjacency checks
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate

from utils.errors import GeometryError, ParameterError

TWO_PI = 2.0 * math.pi

# Largest overshoot of the arccos argument we silently absorb.
ARCCOS_SLACK = 1e-9

# |theta_approx / theta_exact - 1| <= THETA_APPROX_C * exp(R - d1 - d2)
# whenever d1 + d2 >= R + 4 and d1, d2 <= R (sweep in tests/test_geometry.py).
THETA_APPROX_C = 2.0


def _out(value):
    """Return numpy scalars and 0-d arrays as Python floats, arrays unchanged."""
    if np.ndim(value) == 0:
        return float(value)
    return value


@dataclass(frozen=True)
class ModelParams:
    """
    Configuration of one Poi_{alpha,nu}(n) model instance.

    Example usage:
        params = ModelParams(alpha=0.75, nu=1.0, n=1e5, seed=7)
        params.R                     # 2 ln(1e5) ~ 23.03
        params.with_seed(8)          # same model, different stream
    """
    alpha: float
    nu: float
    n: float
    seed: int = 0
    R: float = field(init=False)

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ParameterError(f"alpha must be positive, got {self.alpha}")
        if not (math.isfinite(self.nu) and self.nu > 0):
            raise ParameterError(f"nu must be positive, got {self.nu}")
        if not (math.isfinite(self.n) and self.n / self.nu > 1):
            raise ParameterError(f"n/nu must exceed 1 so that R > 0, got n={self.n}, nu={self.nu}")
        if not (0 <= int(self.seed) < 2**64):
            raise ParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        object.__setattr__(self, 'alpha', float(self.alpha))
        object.__setattr__(self, 'nu', float(self.nu))
        object.__setattr__(self, 'n', float(self.n))
        object.__setattr__(self, 'seed', int(self.seed))
        object.__setattr__(self, 'R', 2.0 * math.log(self.n / self.nu))

    @classmethod
    def from_radius(cls, alpha, nu, R, seed=0):
        """Parameters with a given disk radius; R is kept exactly as passed."""
        params = cls(alpha=alpha, nu=nu, n=nu * math.exp(R / 2.0), seed=seed)
        object.__setattr__(params, 'R', float(R))
        return params

    def with_seed(self, seed):
        """Copy of these parameters with another seed."""
        return replace(self, seed=seed)

    def as_dict(self):
        return {'alpha': self.alpha, 'nu': self.nu, 'n': self.n, 'seed': self.seed, 'R': self.R}


def reduce_angle(theta):
    """Reduce angles to [0, 2 pi)."""
    reduced = np.mod(theta, TWO_PI)
    # np.mod of a tiny negative number rounds to exactly 2 pi
    reduced = np.where(reduced >= TWO_PI, 0.0, reduced)
    return _out(reduced)


def angular_distance(theta1, theta2):
    """Small angle between two directions at the origin, in [0, pi]."""
    diff = np.abs(np.mod(theta1, TWO_PI) - np.mod(theta2, TWO_PI))
    return _out(np.minimum(diff, TWO_PI - diff))


@dataclass(frozen=True)
class PolarPoint:
    """A vertex position; theta is stored reduced to [0, 2 pi)."""
    r: float
    theta: float

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r >= 0):
            raise ParameterError(f"radius must be finite and non-negative, got {self.r}")
        if not math.isfinite(self.theta):
            raise ParameterError(f"angle must be finite, got {self.theta}")
        object.__setattr__(self, 'r', float(self.r))
        object.__setattr__(self, 'theta', reduce_angle(float(self.theta)))


@dataclass(frozen=True)
class SectorAnnulus:
    """
    Points with r_lo <= r < r_hi whose angular distance to theta_center is at
    most half_angle. Building block of the audit regions.
    """
    r_lo: float
    r_hi: float
    theta_center: float
    half_angle: float

    def __post_init__(self):
        if not (0 <= self.r_lo <= self.r_hi):
            raise ParameterError(f"need 0 <= r_lo <= r_hi, got r_lo={self.r_lo}, r_hi={self.r_hi}")
        if not (0 <= self.half_angle <= math.pi):
            raise ParameterError(f"half_angle must lie in [0, pi], got {self.half_angle}")
        object.__setattr__(self, 'theta_center', reduce_angle(float(self.theta_center)))

    def check(self, params):
        """Raise ParameterError unless the region lies inside B_O(R)."""
        if self.r_hi > params.R:
            raise ParameterError(f"region reaches r_hi={self.r_hi} beyond R={params.R}")
        return self

    def contains(self, r, theta):
        """Membership mask (or bool) for points given by radius and angle arrays."""
        r = np.asarray(r, dtype=float)
        inside = (r >= self.r_lo) & (r < self.r_hi)
        if self.half_angle < math.pi:
            inside &= np.asarray(angular_distance(theta, self.theta_center)) <= self.half_angle
        if inside.ndim == 0:
            return bool(inside)
        return inside


def cosh_distance(r1, theta1, r2, theta2):
    """cosh d_h in the cancellation-free form

        cosh(r1 - r2) + sinh r1 sinh r2 * 2 sin^2(dphi / 2)

    which equals the hyperbolic law of cosines term for term but only adds
    non-negative numbers.
    """
    dphi = angular_distance(theta1, theta2)
    half = np.sin(np.asarray(dphi) / 2.0)
    return _out(np.cosh(np.asarray(r1) - r2) + np.sinh(r1) * np.sinh(r2) * 2.0 * half * half)


def distance(r1, theta1, r2, theta2):
    """Hyperbolic distance between points given in polar coordinates.

    Uses the cosh form halved, sinh^2(d/2) = sinh^2((r1 - r2)/2) + sinh r1 sinh r2 sin^2(dphi/2),
    which keeps full relative precision for nearby points as well.
    """
    dphi = angular_distance(theta1, theta2)
    radial = np.sinh(np.abs(np.asarray(r1, dtype=float) - r2) / 2.0)
    angular = np.sin(np.asarray(dphi) / 2.0)
    s = radial * radial + np.sinh(r1) * np.sinh(r2) * angular * angular
    return _out(2.0 * np.arcsinh(np.sqrt(s)))


def adjacent(r1, theta1, r2, theta2, R):
    """
    Adjacency mask d_h <= R, decided on cosh values without inverting cosh.

    Pairs with r1 + r2 <= R are adjacent by the triangle inequality and are
    accepted without the cosh comparison, so rounding cannot split ties there.
    """
    close = np.asarray(r1) + np.asarray(r2) <= R
    result = close | (np.asarray(cosh_distance(r1, theta1, r2, theta2)) <= math.cosh(R))
    if result.ndim == 0:
        return bool(result)
    return result


def hyp_distance(p, q, R=None):
    """Hyperbolic distance between two PolarPoints. R is accepted for symmetry with is_adjacent."""
    return distance(p.r, p.theta, q.r, q.theta)


def is_adjacent(p, q, R):
    """True iff d_h(p, q) <= R."""
    return adjacent(p.r, p.theta, q.r, q.theta, R)


def theta_exact(d1, d2, d):
    """
    Angle at the apex of a hyperbolic triangle with sides d1, d2 meeting at the
    apex and opposite side d, i.e. arccos((cosh d1 cosh d2 - cosh d) / (sinh d1 sinh d2)).

    Evaluated through the half-angle identities

        sin^2(t/2) = sinh((d + d1 - d2)/2) sinh((d - d1 + d2)/2) / (sinh d1 sinh d2)
        cos^2(t/2) = sinh((d1 + d2 + d)/2) sinh((d1 + d2 - d)/2) / (sinh d1 sinh d2)

    and t = 2 atan2(sin, cos). An arccos argument beyond [-1, 1] by more than
    ARCCOS_SLACK means the three lengths violate the triangle inequality and
    raises GeometryError; smaller overshoot is clamped.
    """
    d1 = np.asarray(d1, dtype=float)
    d2 = np.asarray(d2, dtype=float)
    d = np.asarray(d, dtype=float)
    if np.any(d1 <= 0) or np.any(d2 <= 0):
        raise GeometryError("theta_exact needs d1 > 0 and d2 > 0 (sinh vanishes)")
    denom = np.sinh(d1) * np.sinh(d2)
    sin2 = np.sinh((d + d1 - d2) / 2.0) * np.sinh((d - d1 + d2) / 2.0) / denom
    cos2 = np.sinh((d1 + d2 + d) / 2.0) * np.sinh((d1 + d2 - d) / 2.0) / denom
    # arccos argument = 1 - 2 sin2 = 2 cos2 - 1
    if np.any(sin2 < -ARCCOS_SLACK / 2.0) or np.any(cos2 < -ARCCOS_SLACK / 2.0):
        raise GeometryError(
            "theta_exact: arccos argument outside [-1, 1] beyond tolerance; "
            "the lengths do not form a hyperbolic triangle"
        )
    sin2 = np.maximum(sin2, 0.0)
    cos2 = np.maximum(cos2, 0.0)
    return _out(2.0 * np.arctan2(np.sqrt(sin2), np.sqrt(cos2)))


def theta_approx(d1, d2, R):
    """Leading term 2 exp((R - d1 - d2) / 2) of theta_exact(d1, d2, R).

    Valid for min(d1, d2) <= R <= d1 + d2; the relative error is
    O(exp(R - d1 - d2)), see THETA_APPROX_C.
    """
    d1 = np.asarray(d1, dtype=float)
    d2 = np.asarray(d2, dtype=float)
    if np.any(np.minimum(d1, d2) > R) or np.any(d1 + d2 < R):
        raise GeometryError(f"theta_approx needs min(d1, d2) <= R <= d1 + d2 (R={R})")
    return _out(2.0 * np.exp((R - d1 - d2) / 2.0))


def connection_angle(r1, r2, R):
    """
    Largest angular distance at which points of radii r1 and r2 are still
    adjacent: pi when r1 + r2 <= R (always adjacent), theta_exact(r1, r2, R)
    otherwise. Non-increasing in each radius.
    """
    r1, r2 = np.broadcast_arrays(np.asarray(r1, dtype=float), np.asarray(r2, dtype=float))
    angle = np.full(r1.shape, math.pi)
    far = r1 + r2 > R
    if np.any(far):
        angle[far] = theta_exact(r1[far], r2[far], np.full(np.count_nonzero(far), R))
    return _out(angle)


def radial_pdf(r, params):
    """Radial density f(r) on [0, R)."""
    r = np.asarray(r, dtype=float)
    a = params.alpha
    inside = (r >= 0) & (r < params.R)
    dens = a * np.sinh(a * np.where(inside, r, 0.0)) / (math.cosh(a * params.R) - 1.0)
    return _out(np.where(inside, dens, 0.0))


def radial_cdf(r, params):
    """F(r) = (cosh(alpha r) - 1) / (cosh(alpha R) - 1), clipped to [0, 1]."""
    r = np.clip(np.asarray(r, dtype=float), 0.0, params.R)
    return mu_ball(r, params)


def mu_ball(rho, params):
    """
    Exact measure of B_O(rho): (cosh(alpha rho) - 1) / (cosh(alpha R) - 1),
    computed as sinh^2(alpha rho / 2) / sinh^2(alpha R / 2).
    """
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0) or np.any(rho > params.R):
        raise GeometryError(f"mu_ball needs 0 <= rho <= R (R={params.R})")
    a = params.alpha
    ratio = np.sinh(a * rho / 2.0) / math.sinh(a * params.R / 2.0)
    return _out(ratio * ratio)


def mu_ball_asymptotic(rho, params):
    """Leading-order ball measure exp(-alpha (R - rho))."""
    return _out(np.exp(-params.alpha * (params.R - np.asarray(rho, dtype=float))))


def mu_annulus_sector(region, params):
    """Exact measure (half_angle / pi) * (mu_ball(r_hi) - mu_ball(r_lo)) of a SectorAnnulus."""
    region.check(params)
    a = params.alpha
    # cosh x - cosh y = 2 sinh((x + y)/2) sinh((x - y)/2), no cancellation
    band = (math.sinh(a * (region.r_hi + region.r_lo) / 2.0) * math.sinh(a * (region.r_hi - region.r_lo) / 2.0)
            / math.sinh(a * params.R / 2.0) ** 2)
    return region.half_angle / math.pi * band


def mu_annulus_asymptotic(r_lo, r_hi, params):
    """Leading-order annulus measure exp(-alpha (R - r_hi)) (1 - exp(-alpha (r_hi - r_lo)))."""
    a = params.alpha
    return math.exp(-a * (params.R - r_hi)) * (1.0 - math.exp(-a * (r_hi - r_lo)))


def expected_degree(r, params):
    """
    Expected degree n * mu(B_v(R) ∩ B_O(R)) of a vertex at radius r, by
    quadrature of f(r') * connection_angle(r, r') / pi over r' in [0, R).
    """
    R = params.R
    if not (0 < r < R):
        raise ParameterError(f"expected_degree needs 0 < r < R, got r={r}, R={R}")

    def integrand(rp):
        if rp <= 0.0:
            return 0.0
        return radial_pdf(rp, params) * connection_angle(r, rp, R) / math.pi

    split = [R - r] if 0.0 < R - r < R else None
    value, _ = integrate.quad(integrand, 0.0, R, points=split, limit=200)
    return params.n * value


def expected_degree_asymptotic(r, params):
    """Leading order nu * (2 alpha / pi) / (alpha - 1/2) * exp((R - r) / 2), for alpha > 1/2."""
    if params.alpha <= 0.5:
        raise ParameterError("expected_degree_asymptotic needs alpha > 1/2")
    a = params.alpha
    return params.nu * (2.0 * a / math.pi) / (a - 0.5) * math.exp((params.R - r) / 2.0)

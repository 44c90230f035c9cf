"""
Poisson point process on B_O(R) with intensity g(r, theta) = nu e^{R/2} f(r) / (2 pi).

The vertex count is Poisson(n); angles are uniform on [0, 2 pi); radii follow
f(r) through its exact inverse CDF. A PointSet is fully determined by its
ModelParams (the seed included) and is immutable once created.

Called by:
- builders/: every builder consumes a PointSet
- audits/base_audit.py: AuditContext samples the instance under audit
- experiments/scan.py: one sample per trial
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from utils.errors import ParameterError, RecordIOError
from utils.rng import stream
from .geometry import TWO_PI, PolarPoint, SectorAnnulus, radial_cdf, reduce_angle

logger = logging.getLogger(__name__)


def sample_radii(u, params):
    """
    Inverse of the radial CDF: r = (1/alpha) arcosh(1 + u (cosh(alpha R) - 1)).

    Evaluated as r = (2/alpha) asinh(sqrt(u) sinh(alpha R / 2)), the same
    function without the cancellation of arcosh near 1.
    """
    a = params.alpha
    u = np.asarray(u, dtype=float)
    r = (2.0 / a) * np.arcsinh(np.sqrt(u) * math.sinh(a * params.R / 2.0))
    # u < 1 maps below R in exact arithmetic; keep it so after rounding
    return np.minimum(r, np.nextafter(params.R, 0.0))


def sample_radii_between(r_lo, r_hi, size, rng, params):
    """Radii drawn from f restricted to [r_lo, r_hi); the bounds may be arrays of length `size`."""
    r_lo = np.asarray(r_lo, dtype=float)
    r_hi = np.asarray(r_hi, dtype=float)
    if not (np.all(r_lo >= 0) and np.all(r_lo < r_hi) and np.all(r_hi <= params.R)):
        raise ParameterError(f"need 0 <= r_lo < r_hi <= R, got [{np.min(r_lo)}, {np.max(r_hi)}) with R={params.R}")
    lo, hi = radial_cdf(r_lo, params), radial_cdf(r_hi, params)
    r = sample_radii(lo + (hi - lo) * rng.random(size), params)
    return np.clip(r, r_lo, np.nextafter(r_hi, r_lo))


@dataclass(frozen=True, eq=False)
class PointSet:
    """
    Vertex positions of one model instance, in generation order.

    Example usage:
        ps = sample(ModelParams(alpha=0.75, nu=1.0, n=1e4, seed=1))
        ps.count, ps.r[:5], ps.theta[:5]
        ps[0]                               # PolarPoint of vertex 0
    """
    params: object
    r: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        r = np.ascontiguousarray(self.r, dtype=np.float64)
        theta = np.ascontiguousarray(self.theta, dtype=np.float64)
        if r.shape != theta.shape or r.ndim != 1:
            raise ParameterError("radius and angle arrays must be one-dimensional and of equal length")
        r.setflags(write=False)
        theta.setflags(write=False)
        object.__setattr__(self, 'r', r)
        object.__setattr__(self, 'theta', theta)

    @classmethod
    def from_arrays(cls, params, r, theta):
        """Validate externally supplied coordinates and wrap them."""
        r = np.asarray(r, dtype=np.float64)
        if np.any(~np.isfinite(r)) or np.any(r < 0) or np.any(r >= params.R):
            raise ParameterError(f"all radii must lie in [0, R) with R={params.R}")
        return cls(params, r, np.asarray(reduce_angle(np.asarray(theta, dtype=np.float64)), dtype=np.float64))

    @property
    def count(self):
        return int(self.r.shape[0])

    def __len__(self):
        return self.count

    def __getitem__(self, index):
        return PolarPoint(self.r[index], self.theta[index])

    def rotated(self, delta):
        """Copy with every angle shifted by delta."""
        return PointSet(self.params, self.r, np.asarray(reduce_angle(self.theta + delta), dtype=np.float64))

    def same_as(self, other):
        """Bit-for-bit equality of parameters and coordinates."""
        return (self.params == other.params
                and np.array_equal(self.r, other.r)
                and np.array_equal(self.theta, other.theta))


def sample(params):
    """Draw the point process V for `params` from the stream of params.seed."""
    rng = stream(params.seed)
    count = int(rng.poisson(params.n))
    theta = np.asarray(reduce_angle(rng.random(count) * TWO_PI), dtype=np.float64)
    r = sample_radii(rng.random(count), params)
    logger.debug("sample(): alpha=%g nu=%g n=%g seed=%d -> %d points (R=%.4f)",
                 params.alpha, params.nu, params.n, params.seed, count, params.R)
    return PointSet(params, r, theta)


def count_in_region(ps, region):
    """Exact number of points of ps inside region, angle wrap-around included."""
    if not isinstance(region, SectorAnnulus):
        raise ParameterError("count_in_region expects a SectorAnnulus")
    return int(np.count_nonzero(region.contains(ps.r, ps.theta)))


def write_points_csv(ps, path):
    """Write `id,r,theta` rows with 17 significant digits."""
    frame = pd.DataFrame({'id': np.arange(ps.count), 'r': ps.r, 'theta': ps.theta})
    try:
        frame.to_csv(path, index=False, float_format='%.17g')
    except OSError as e:
        raise RecordIOError(path, f"cannot write points: {e}") from e
    logger.info("write_points_csv(): %d points written to %s", ps.count, path)


def read_points_csv(path, params):
    """Read a file written by write_points_csv back into a PointSet for `params`."""
    try:
        frame = pd.read_csv(path, float_precision='round_trip')
        frame = frame.sort_values('id', kind='stable')
        r, theta = frame['r'].to_numpy(dtype=float), frame['theta'].to_numpy(dtype=float)
    except (OSError, ValueError, KeyError) as e:
        raise RecordIOError(path, f"cannot read points: {e}") from e
    return PointSet.from_arrays(params, r, theta)

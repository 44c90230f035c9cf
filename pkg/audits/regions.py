"""
Staircase regions of the lower-bound construction.

Around a reference direction theta_center the construction stacks unit rings
[ell - 1 + i, ell + i), i = 0..K, and inside each ring two nested sectors:

    Upsilon_i: half-angle upsilon[i] = phi/2 + sum_{j<i} theta_approx(ell-1+j, ell+j)
    Xi_i:      half-angle xi[i]      = theta_approx(ell-1+i, ell-1+i) + phi/2 + xi_sum

with phi = 9 theta_approx(ell, ell) and xi_sum the full sum over j < K.
Xi minus Upsilon splits into two walls, one on each side of Upsilon.

At desk scale the asymptotic choice ell = R - ln R/(1-alpha) + M/(1-alpha)
usually lands above R, so ell is clamped into [ceil(R/2)+1, floor(R)-3];
the unclamped value is kept for reporting.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from model.geometry import SectorAnnulus, angular_distance, reduce_angle, theta_approx
from utils.errors import ParameterError

logger = logging.getLogger(__name__)

# Number of equal sub-sectors Upsilon_ell is split into for the occupancy event.
SUBSECTORS = 18

# phi = PHI_FACTOR * theta_approx(ell, ell, R)
PHI_FACTOR = 9.0


def check_alpha(params):
    """The lower- and upper-bound constructions need 1/2 < alpha < 1."""
    if not (0.5 < params.alpha < 1.0):
        raise ParameterError(f"this construction needs 1/2 < alpha < 1, got alpha={params.alpha}")


def lower_bound_ell(params, M):
    """(ell, unclamped value, clamped flag) for the lower-bound construction."""
    R, a = params.R, params.alpha
    raw = R - math.log(R) / (1.0 - a) + M / (1.0 - a)
    lo, hi = math.ceil(R / 2.0) + 1, math.floor(R) - 3
    if hi < lo:
        raise ParameterError(f"R={R:.3f} is too small for the lower-bound regions (need R >= 10)")
    ell = int(min(max(round(raw), lo), hi))
    return ell, raw, ell != round(raw)


def upper_bound_ell(params, L):
    """(ell, unclamped value, clamped flag) for ell = R - ln R/(1-alpha) - L/(1-alpha), floored at ceil(R/2)+1."""
    R, a = params.R, params.alpha
    raw = R - math.log(R) / (1.0 - a) - L / (1.0 - a)
    # the (ell - 1, ell] band must hold enough vertices to fill every window at desk scale
    lo = math.ceil(R / 2.0) + 1
    ell = int(max(round(raw), lo))
    return ell, raw, ell != round(raw)


@dataclass(frozen=True, eq=False)
class LowerBoundRegions:
    """
    Half-angles and region lists of one lower-bound construction.

    Example usage:
        regions = build_regions(params, M=8, beta=0.1, theta_center=0.0)
        regions.ell, regions.phi, regions.upsilon, regions.xi
        regions.in_upsilon(ps.r, ps.theta)      # membership mask
    """
    R: float
    ell: int
    ell_unclamped: float
    clamped: bool
    M: float
    beta: float
    phi: float
    psi: float
    upsilon: np.ndarray
    xi: np.ndarray
    xi_sum: float
    theta_center: float

    @property
    def levels(self):
        """K + 1, the number of rings."""
        return int(self.upsilon.shape[0])

    def ring(self, i):
        """Radial extent [lo, hi) of ring i; the top ring stops at R."""
        return self.ell - 1.0 + i, min(self.ell + float(i), self.R)

    @property
    def upsilon_regions(self):
        return [SectorAnnulus(*self.ring(i), self.theta_center, min(self.upsilon[i], math.pi))
                for i in range(self.levels)]

    @property
    def xi_regions(self):
        return [SectorAnnulus(*self.ring(i), self.theta_center, min(self.xi[i], math.pi))
                for i in range(self.levels)]

    def walls(self):
        """The two parts (W', W'') of Xi minus Upsilon, each as one SectorAnnulus per ring."""
        upper, lower = [], []
        for i in range(self.levels):
            width = (self.xi[i] - self.upsilon[i]) / 2.0
            offset = (self.xi[i] + self.upsilon[i]) / 2.0
            upper.append(SectorAnnulus(*self.ring(i), self.theta_center + offset, min(width, math.pi)))
            lower.append(SectorAnnulus(*self.ring(i), self.theta_center - offset, min(width, math.pi)))
        return upper, lower

    def subsectors(self):
        """Upsilon_ell cut into SUBSECTORS equal angular parts, in angular order."""
        width = self.phi / SUBSECTORS
        start = self.theta_center - self.phi / 2.0
        return [SectorAnnulus(*self.ring(0), start + (k + 0.5) * width, width / 2.0)
                for k in range(SUBSECTORS)]

    def level_of(self, r):
        """Ring index of each radius, -1 outside [ell - 1, R)."""
        r = np.asarray(r, dtype=float)
        level = np.floor(r - (self.ell - 1.0)).astype(np.int64)
        outside = (level < 0) | (level >= self.levels) | (r >= self.R)
        return np.where(outside, -1, level)

    def _within(self, half_angles, r, theta, center):
        level = self.level_of(r)
        center = self.theta_center if center is None else center
        dist = np.asarray(angular_distance(theta, center))
        return (level >= 0) & (dist <= half_angles[np.maximum(level, 0)])

    def in_upsilon(self, r, theta, center=None):
        """Membership mask of Upsilon, optionally re-centred at `center`."""
        return self._within(self.upsilon, r, theta, center)

    def in_xi(self, r, theta, center=None):
        return self._within(self.xi, r, theta, center)

    def recentered(self, theta_center):
        """Same construction around another direction."""
        return LowerBoundRegions(**{**self.__dict__, 'theta_center': reduce_angle(theta_center)})

    def as_dict(self):
        return {
            'ell': self.ell, 'ell_unclamped': self.ell_unclamped, 'clamped': self.clamped,
            'M': self.M, 'beta': self.beta, 'phi': self.phi, 'psi': self.psi,
            'xi_sum': self.xi_sum, 'upsilon': self.upsilon.tolist(), 'xi': self.xi.tolist(),
        }


def build_regions(params, M=8.0, beta=0.1, theta_center=0.0):
    """Lower-bound regions around theta_center for the model `params`."""
    check_alpha(params)
    if not (M > 0 and beta > 0):
        raise ParameterError(f"M and beta must be positive, got M={M}, beta={beta}")
    R = params.R
    ell, raw, clamped = lower_bound_ell(params, M)
    K = int(math.ceil(R - ell))

    phi = PHI_FACTOR * theta_approx(ell, ell, R)
    steps = np.asarray([theta_approx(ell - 1 + j, ell + j, R) for j in range(K)], dtype=float)
    upsilon = phi / 2.0 + np.concatenate([[0.0], np.cumsum(steps)])
    xi_sum = float(steps.sum())
    xi = np.asarray([theta_approx(ell - 1 + i, ell - 1 + i, R) for i in range(K + 1)]) + phi / 2.0 + xi_sum
    psi = (params.nu / params.n) ** (1.0 - beta)

    upsilon.setflags(write=False)
    xi.setflags(write=False)
    regions = LowerBoundRegions(R, ell, raw, clamped, float(M), float(beta), float(phi), float(psi),
                                upsilon, xi, xi_sum, reduce_angle(theta_center))
    if clamped:
        logger.info("build_regions(): ell=%.2f clamped to %d for R=%.3f", raw, ell, R)
    logger.debug("build_regions(): ell=%d K=%d phi=%.3g xi=%.3g psi=%.3g", ell, K, phi, xi_sum, psi)
    return regions

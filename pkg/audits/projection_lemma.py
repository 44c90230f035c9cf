"""
Projection lemma: if p and p'' are adjacent and p' lies angularly between
them with r_p' <= min(r_p, r_p''), then p' is adjacent to both.

The statement is deterministic, so any violation is a geometry bug.
"""
import numpy as np

from model.geometry import TWO_PI, angular_distance, connection_angle, is_adjacent, radial_cdf
from model.sampler import sample_radii
from utils.errors import ParameterError
from utils.rng import stream
from .base_audit import Audit

# Relative slack on angle comparisons; covers the rounding of angle reduction only.
ANGLE_RTOL = 1e-12
# Absolute slack of the betweenness check in check_triple.
ANGLE_ATOL = 1e-12


def draw_triples(params, triples, rng):
    """Radius and angle arrays (r, theta) of shape (3, triples) satisfying the lemma's hypotheses."""
    R = params.R
    r_p = sample_radii(rng.random(triples), params)
    r_pp = sample_radii(rng.random(triples), params)
    reach = np.asarray(connection_angle(r_p, r_pp, R))
    gap = rng.random(triples) * reach
    theta_p = rng.random(triples) * TWO_PI
    theta_mid = theta_p + rng.random(triples) * gap
    theta_pp = theta_p + gap
    # p' from the radial law restricted to [0, min(r_p, r_p''))
    r_mid = sample_radii(rng.random(triples) * radial_cdf(np.minimum(r_p, r_pp), params), params)
    r_mid = np.minimum(r_mid, np.minimum(r_p, r_pp))
    r = np.stack([r_p, r_mid, r_pp])
    theta = np.mod(np.stack([theta_p, theta_mid, theta_pp]), TWO_PI)
    return r, theta


def _adjacent(r1, t1, r2, t2, R):
    limit = np.asarray(connection_angle(r1, r2, R))
    return np.asarray(angular_distance(t1, t2)) <= limit * (1.0 + ANGLE_RTOL)


def projection_lemma_audit(params, triples, rng=None):
    """Number of sampled triples where p' misses p or p''."""
    if triples <= 0:
        return 0
    if rng is None:
        rng = stream(params.seed, 'audit', 'projection_lemma')
    R = params.R
    violations = 0
    chunk = 1_000_000
    for first in range(0, triples, chunk):
        r, theta = draw_triples(params, min(chunk, triples - first), rng)
        left = _adjacent(r[0], theta[0], r[1], theta[1], R)
        right = _adjacent(r[1], theta[1], r[2], theta[2], R)
        violations += int(np.count_nonzero(~(left & right)))
    return violations


def check_triple(p, q, s, R):
    """
    True if the triple (p, q, s) violates the lemma. Raises ParameterError when
    the hypotheses do not hold (s not adjacent to p, q not between them, or
    q not innermost).
    """
    if not is_adjacent(p, s, R):
        raise ParameterError("p and p'' must be adjacent")
    if q.r > min(p.r, s.r):
        raise ParameterError("p' must not lie further out than p or p''")
    span = angular_distance(p.theta, s.theta)
    if angular_distance(p.theta, q.theta) + angular_distance(q.theta, s.theta) > span * (1.0 + ANGLE_RTOL) + ANGLE_ATOL:
        raise ParameterError("p' must lie angularly between p and p''")
    return not (is_adjacent(p, q, R) and is_adjacent(q, s, R))


class ProjectionLemmaAudit(Audit):
    name = 'projection_lemma'

    def check(self, ctx):
        triples = int(self.options.get('triples', 100_000))
        return projection_lemma_audit(ctx.params, triples, ctx.rng(self.name)), triples, {}

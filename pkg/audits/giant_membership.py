"""
Giant membership: every vertex of radius at most
ell = R - ln R/(1-alpha) - L/(1-alpha) belongs to the largest component.
"""
import numpy as np

from .base_audit import Audit
from .regions import check_alpha, upper_bound_ell


def giant_membership_audit(g, cs, L):
    """Number of vertices with r <= ell outside the largest component."""
    params = g.points.params
    check_alpha(params)
    if g.vertex_count == 0:
        return 0
    ell, _, _ = upper_bound_ell(params, L)
    inner = g.points.r <= ell
    return int(np.count_nonzero(inner & ~cs.in_giant()))


class GiantMembershipAudit(Audit):
    name = 'giant_membership'

    def check(self, ctx):
        L = float(self.options.get('L', 10.0))
        ell, raw, clamped = upper_bound_ell(ctx.params, L)
        g, cs = ctx.graph, ctx.components
        violations = giant_membership_audit(g, cs, L)
        checked = int(np.count_nonzero(g.points.r <= ell))
        return violations, checked, {'ell': ell, 'ell_unclamped': raw, 'clamped': clamped,
                                     'L1': cs.L1, 'L2': cs.L2}

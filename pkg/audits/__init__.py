"""
rhgTool audits package.
Numerical checks of the structural statements behind the component bounds.
"""

from .regions import LowerBoundRegions, build_regions, lower_bound_ell, upper_bound_ell
from .base_audit import Audit, AuditContext, AuditReport
from .wall_separation import wall_separation_audit, is_valid_pair
from .projection_lemma import projection_lemma_audit, check_triple
from .giant_membership import giant_membership_audit
from .sector_occupancy import sector_occupancy_audit
from .precomponents import precomponent_audit
from .audit_manager import AUDIT_TYPES, AuditManager

"""
rhgTool model package.
Geometry kernel of the hyperbolic disk and the Poisson point process sampler.
"""

from .geometry import (
    ModelParams, PolarPoint, SectorAnnulus,
    hyp_distance, is_adjacent, theta_exact, theta_approx, connection_angle,
    mu_ball, mu_ball_asymptotic, mu_annulus_sector, mu_annulus_asymptotic,
    angular_distance, expected_degree,
)
from .sampler import PointSet, sample, count_in_region, write_points_csv, read_points_csv

import json
import math

import numpy as np
import pytest

from analysis.components import connected_components
from audits.audit_manager import AUDIT_TYPES, AuditManager
from audits.base_audit import AuditContext, AuditReport
from audits.giant_membership import giant_membership_audit
from audits.precomponents import precomponent_audit, sector_centers, subsector_edges
from audits.projection_lemma import check_triple, draw_triples, projection_lemma_audit
from audits.regions import (
    PHI_FACTOR, SUBSECTORS, build_regions, check_alpha, lower_bound_ell, upper_bound_ell,
)
from audits.sector_occupancy import empty_windows, occupancy_angle, sector_occupancy_audit
from audits.wall_separation import draw_pairs, is_valid_pair, wall_separation_audit
from builders.banded import build_banded
from model.geometry import ModelParams, PolarPoint, angular_distance, theta_approx
from model.sampler import PointSet, count_in_region, sample
from utils.errors import ParameterError
from utils.rng import stream


class TestRegions:
    params = ModelParams(alpha=0.75, nu=1.0, n=1e6, seed=1)

    def test_basic_invariants(self):
        regions = build_regions(self.params, M=8, beta=0.1)
        assert regions.upsilon[0] == pytest.approx(regions.phi / 2)
        assert np.all(np.diff(regions.upsilon) > 0)
        assert np.all(regions.xi > regions.upsilon)
        assert regions.phi / theta_approx(regions.ell, regions.ell, self.params.R) == pytest.approx(PHI_FACTOR)
        assert regions.xi_sum < regions.phi / 3
        assert regions.upsilon[-1] < regions.phi
        assert regions.levels == math.ceil(self.params.R - regions.ell) + 1

    def test_xi_sum_ratio(self):
        regions = build_regions(self.params)
        scale = (self.params.nu / self.params.n) * math.exp(self.params.R - regions.ell)
        target = 2 * math.exp(1.5) / (math.e - 1)
        assert regions.xi_sum / scale == pytest.approx(target, rel=0.1)

    def test_ell_clamped_at_desk_scale(self):
        ell, raw, clamped = lower_bound_ell(self.params, 8)
        R = self.params.R
        assert math.ceil(R / 2) + 1 <= ell <= math.floor(R) - 3
        assert clamped and raw > ell
        regions = build_regions(self.params)
        assert regions.clamped and regions.ell_unclamped == raw

    def test_upper_bound_ell_floor(self):
        ell, raw, clamped = upper_bound_ell(ModelParams(alpha=0.7, nu=1.0, n=1e5), 10)
        assert ell == math.ceil(2 * math.log(1e5) / 2) + 1 == 13
        assert clamped and raw < ell

    def test_walls(self):
        regions = build_regions(self.params)
        upper, lower = regions.walls()
        assert len(upper) == len(lower) == regions.levels
        for i, wall in enumerate(upper):
            assert 2 * wall.half_angle == pytest.approx(regions.xi[i] - regions.upsilon[i])
            assert angular_distance(wall.theta_center, regions.theta_center) == pytest.approx(
                (regions.xi[i] + regions.upsilon[i]) / 2)

    def test_upsilon_inside_xi(self):
        regions = build_regions(self.params, theta_center=3.0)
        rng = np.random.default_rng(0)
        r = rng.uniform(regions.ell - 1, self.params.R, 20000)
        theta = 3.0 + rng.uniform(-2, 2, 20000) * regions.xi[-1]
        up = regions.in_upsilon(r, theta)
        assert np.any(up)
        assert np.all(regions.in_xi(r, theta)[up])

    def test_level_of(self):
        regions = build_regions(self.params)
        levels = regions.level_of([regions.ell - 1.5, regions.ell - 1.0, regions.ell + 0.5, self.params.R])
        np.testing.assert_array_equal(levels, [-1, 0, 1, -1])

    def test_subsectors(self):
        regions = build_regions(self.params)
        parts = regions.subsectors()
        assert len(parts) == SUBSECTORS
        assert sum(2 * p.half_angle for p in parts) == pytest.approx(regions.phi)

    def test_subsector_edges(self):
        regions = build_regions(self.params, theta_center=6.2)
        edges = subsector_edges(regions)
        assert edges.shape == (SUBSECTORS + 1,)
        assert np.all(np.diff(edges) > 0)
        assert edges[0] == pytest.approx(-regions.phi / 2)
        assert edges[-1] == pytest.approx(regions.phi / 2)

    @pytest.mark.parametrize("center", [0.0, 3.0, 6.25])
    def test_region_lists_match_masks(self, center):
        regions = build_regions(self.params, theta_center=center)
        rng = np.random.default_rng(7)
        r = rng.uniform(regions.ell - 1.5, self.params.R, 50_000)
        theta = center + rng.uniform(-1.5, 1.5, 50_000) * regions.xi[-1]
        ps = PointSet.from_arrays(self.params, r, theta)
        assert len(regions.upsilon_regions) == len(regions.xi_regions) == regions.levels
        for listed, mask in ((regions.upsilon_regions, regions.in_upsilon), (regions.xi_regions, regions.in_xi)):
            inside = int(np.count_nonzero(mask(ps.r, ps.theta)))
            assert inside > 0
            assert sum(count_in_region(ps, part) for part in listed) == inside

    def test_recentered(self):
        regions = build_regions(self.params)
        moved = regions.recentered(1.0)
        assert moved.theta_center == 1.0 and moved.ell == regions.ell

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.2])
    def test_alpha_outside_range(self, alpha):
        with pytest.raises(ParameterError):
            build_regions(ModelParams(alpha=alpha, nu=1.0, n=1e5))

    def test_too_small(self):
        with pytest.raises(ParameterError):
            build_regions(ModelParams(alpha=0.7, nu=1.0, n=30))

    def test_bad_constants(self):
        with pytest.raises(ParameterError):
            build_regions(self.params, M=0)

    def test_check_alpha(self):
        check_alpha(self.params)


class TestWallSeparation:
    params = ModelParams(alpha=0.75, nu=1.0, n=1e6, seed=2)

    def test_zero_samples(self):
        assert wall_separation_audit(build_regions(self.params), self.params, 0) == 0

    def test_no_violations(self):
        regions = build_regions(self.params, M=8)
        assert wall_separation_audit(regions, self.params, 200_000, stream(4)) == 0

    def test_draws_are_valid(self):
        regions = build_regions(self.params, theta_center=1.0)
        r_p, t_p, r_q, t_q = draw_pairs(regions, self.params, 500, stream(5))
        for i in range(500):
            assert is_valid_pair(regions, PolarPoint(r_p[i], t_p[i]), PolarPoint(r_q[i], t_q[i]))

    def test_same_angle_not_valid(self):
        regions = build_regions(self.params)
        edge = regions.theta_center + regions.upsilon[0]
        p = PolarPoint(regions.ell - 0.5, edge)
        assert not is_valid_pair(regions, p, p)

    def test_violations_do_not_grow_with_n(self):
        counts = []
        for n in (1e3, 1e6):
            params = ModelParams(alpha=0.75, nu=1.0, n=n, seed=2)
            counts.append(wall_separation_audit(build_regions(params), params, 50_000, stream(6)))
        assert counts[1] <= counts[0]
        assert counts == [0, 0]


class TestProjectionLemma:
    def test_random_triples(self):
        for params in (ModelParams(alpha=0.75, nu=1.0, n=1e5, seed=1),
                       ModelParams(alpha=0.55, nu=0.5, n=1e3, seed=2),
                       ModelParams(alpha=1.0, nu=2.0, n=1e6, seed=3)):
            assert projection_lemma_audit(params, 100_000) == 0

    def test_triples_meet_hypotheses(self):
        params = ModelParams(alpha=0.75, nu=1.0, n=1e4)
        r, theta = draw_triples(params, 200, stream(6))
        for i in range(200):
            p, q, s = (PolarPoint(r[k, i], theta[k, i]) for k in range(3))
            assert not check_triple(p, q, s, params.R)

    def test_degenerate(self):
        R = 20.0
        p, q, s = PolarPoint(15, 1.0), PolarPoint(6, 1.0), PolarPoint(12, 1.0)
        assert not check_triple(p, q, s, R)
        inner = PolarPoint(14, 1.0)
        assert not check_triple(inner, inner, PolarPoint(15, 1.01), R)

    def test_hypotheses_enforced(self):
        R = 20.0
        with pytest.raises(ParameterError):
            check_triple(PolarPoint(19, 0.0), PolarPoint(1, 1.0), PolarPoint(19, math.pi), R)
        with pytest.raises(ParameterError):
            check_triple(PolarPoint(10, 0.0), PolarPoint(12, 0.01), PolarPoint(10, 0.02), R)

    def test_zero_triples(self):
        assert projection_lemma_audit(ModelParams(alpha=0.7, nu=1.0, n=100), 0) == 0


class TestGiantMembership:
    def test_clique(self):
        params = ModelParams.from_radius(0.7, 1.0, 20.0)
        rng = np.random.default_rng(1)
        ps = PointSet.from_arrays(params, rng.uniform(0, 10, 50), rng.uniform(0, 2 * math.pi, 50))
        g = build_banded(ps)
        assert giant_membership_audit(g, connected_components(g), 10) == 0

    def test_empty(self):
        ps = PointSet.from_arrays(ModelParams(alpha=0.7, nu=1.0, n=1e4), [], [])
        g = build_banded(ps)
        assert giant_membership_audit(g, connected_components(g), 10) == 0

    def test_sampled_instance(self, audit_params):
        g = build_banded(sample(audit_params))
        assert giant_membership_audit(g, connected_components(g), 10) == 0

    def test_counts_outsiders(self):
        params = ModelParams.from_radius(0.7, 1.0, 20.0)
        r = [10.0, 10.0, 10.5, 10.5]
        ps = PointSet.from_arrays(params, r, [0.0, math.pi, 0.0, 0.01])
        g = build_banded(ps)
        cs = connected_components(g)
        assert cs.num_components >= 1
        assert giant_membership_audit(g, cs, 10) == int(np.count_nonzero(~cs.in_giant()))


class TestSectorOccupancy:
    def test_windows(self):
        assert empty_windows([], 1.0) == math.ceil(2 * math.pi)
        assert empty_windows([0.5], 7.0) == 0
        assert empty_windows([], 7.0) == 1
        angles = np.arange(0.05, 2 * math.pi, 0.5)
        assert empty_windows(angles, 0.5) == 0
        assert empty_windows([0.1], 1.0) == 4

    def test_wraps(self):
        # the window starting at 6 reaches past 2 pi and sees the point again
        assert empty_windows([1.5], 1.0) == 4

    def test_no_vertices(self):
        ps = PointSet.from_arrays(ModelParams(alpha=0.7, nu=1.0, n=1e4), [], [])
        g = build_banded(ps)
        phi = occupancy_angle(ps.params, 20)
        expected = 1 if phi >= 2 * math.pi else math.ceil(2 * math.pi / phi)
        assert sector_occupancy_audit(g, 20, 20) == expected

    def test_alpha_checked(self):
        g = build_banded(PointSet.from_arrays(ModelParams(alpha=1.0, nu=1.0, n=1e4), [], []))
        with pytest.raises(ParameterError):
            sector_occupancy_audit(g, 20, 20)


class TestPrecomponents:
    def test_sectors_cover_disk(self, audit_params):
        regions = build_regions(audit_params)
        centers, width = sector_centers(regions)
        assert width >= 2 * regions.xi[0] - 1e-12
        assert len(centers) * width == pytest.approx(2 * math.pi)

    def test_runs_without_violations(self, audit_params):
        g = build_banded(sample(audit_params))
        cs = connected_components(g)
        violations, sectors, details = precomponent_audit(build_regions(audit_params), g, cs)
        assert violations == 0
        assert sectors == details['sectors']
        assert details['isolated'] <= details['walls_empty'] <= details['occupied'] <= sectors
        assert details['largest_isolated_component'] <= cs.L1
        json.dumps(details)


class TestManager:
    def test_registry(self):
        assert set(AUDIT_TYPES) == {'wall_separation', 'projection_lemma', 'giant_membership',
                                    'sector_occupancy', 'precomponents'}

    def test_overrides(self):
        manager = AuditManager()
        audit = manager.get_audit('wall_separation', {'M': 6, 'samples': None, 'L': 3})
        assert audit.options['M'] == 6
        assert audit.options['samples'] == manager.defaults['wall_separation']['samples']
        assert 'L' not in audit.options
        assert audit.threshold == 0

    def test_unknown(self):
        with pytest.raises(ParameterError):
            AuditManager().get_audit('diameter')

    def test_run_and_report(self, tmp_path, audit_params):
        manager = AuditManager()
        reports = manager.run(['projection_lemma', 'giant_membership', 'wall_separation'], audit_params,
                              overrides={'triples': 2000, 'samples': 2000})
        assert [r.audit for r in reports] == ['projection_lemma', 'giant_membership', 'wall_separation']
        assert all(isinstance(r, AuditReport) for r in reports)
        assert manager.exceeded(reports) == []
        path = tmp_path / 'audit.jsonl'
        manager.write_reports(reports, path)
        lines = [json.loads(line) for line in path.read_text().splitlines()]
        assert lines[0]['audit'] == 'projection_lemma'
        assert {'audit', 'params', 'violations', 'samples', 'seed'} <= set(lines[1])
        assert lines[0]['params']['triples'] == 2000

    def test_exceeded(self):
        report = AuditReport('giant_membership', {}, 3, 10, 0)
        manager = AuditManager()
        assert manager.exceeded([report]) == [report]
        assert manager.exceeded([report], threshold=3) == []

    def test_context_is_shared(self, audit_params):
        ctx = AuditContext(audit_params)
        assert ctx.graph is ctx.graph
        assert ctx.components.L1 <= ctx.points.count
        a = ctx.rng('x').random()
        assert a == ctx.rng('x').random()
        assert a != ctx.rng('y').random()


@pytest.mark.slow
def test_wall_separation_acceptance():
    params = ModelParams(alpha=0.75, nu=1.0, n=1e6, seed=1)
    assert wall_separation_audit(build_regions(params, M=8), params, 1_000_000) == 0


@pytest.mark.slow
def test_projection_lemma_acceptance():
    assert projection_lemma_audit(ModelParams(alpha=0.75, nu=1.0, n=1e6, seed=1), 1_000_000) == 0


@pytest.mark.slow
def test_upper_bound_audits_acceptance():
    giant_ok = occupancy_ok = 0
    for seed in range(50):
        ctx = AuditContext(ModelParams(alpha=0.7, nu=1.0, n=1e5, seed=seed))
        giant_ok += giant_membership_audit(ctx.graph, ctx.components, 10) == 0
        occupancy_ok += sector_occupancy_audit(ctx.graph, 20, 20) == 0
    assert giant_ok >= 48
    assert occupancy_ok >= 48
